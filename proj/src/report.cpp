#include "madpl/report.hpp"

#include <cmath>
#include <cstdio>

#include "madpl/errors.hpp"

namespace madpl {

double metric_value(const MetricsRow& row, const std::string& name) {
  if (name == "success") return row.success;
  if (name == "inform_f1") return row.inform_f1;
  if (name == "match") return row.match;
  if (name == "avg_turns") return row.avg_turns;
  if (name == "mean_r_S") return row.mean_r_S;
  if (name == "mean_r_U") return row.mean_r_U;
  if (name == "mean_r_G") return row.mean_r_G;
  if (name == "L_V") return row.L_V;
  throw SchemaError("unknown metric '" + name + "'");
}

namespace {

void set_metric(MetricsRow& row, const std::string& name, double v) {
  if (name == "success") row.success = v;
  else if (name == "inform_f1") row.inform_f1 = v;
  else if (name == "match") row.match = v;
  else if (name == "avg_turns") row.avg_turns = v;
  else if (name == "mean_r_S") row.mean_r_S = v;
  else if (name == "mean_r_U") row.mean_r_U = v;
  else if (name == "mean_r_G") row.mean_r_G = v;
  else if (name == "L_V") row.L_V = v;
}

// Episodes contributed by row i (cumulative counts are stored).
int row_weight(const std::vector<MetricsRow>& rows, std::size_t i) {
  return rows[i].episodes - (i == 0 ? 0 : rows[i - 1].episodes);
}

}  // namespace

double window_mean(const std::vector<MetricsRow>& rows, const std::string& metric, int from_episode, int to_episode) {
  double sum = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].episodes <= from_episode || rows[i].episodes > to_episode) continue;
    const double w = row_weight(rows, i);
    sum += w * metric_value(rows[i], metric);
    weight += w;
  }
  return weight > 0 ? sum / weight : std::nan("");
}

std::vector<MetricsRow> bin_by_episodes(const std::vector<MetricsRow>& rows, int width) {
  if (width < 1) throw SchemaError("curve bin width must be positive");
  std::vector<MetricsRow> out;
  std::vector<double> weights;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].episodes <= rows[i - 1].episodes)
      throw MalformedCsv("metrics csv: episode counts must increase");
    const std::size_t bin = static_cast<std::size_t>((rows[i].episodes + width - 1) / width);
    while (out.size() < bin) {
      MetricsRow r;
      r.iteration = static_cast<int>(out.size()) + 1;
      r.episodes = r.iteration * width;
      out.push_back(r);
      weights.push_back(0.0);
    }
    const double w = row_weight(rows, i);
    MetricsRow& b = out[bin - 1];
    for (const auto& m : kCurveMetrics) set_metric(b, m, metric_value(b, m) + w * metric_value(rows[i], m));
    weights[bin - 1] += w;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (weights[k] == 0.0) throw MalformedCsv("metrics csv: no iteration ends inside episode bin " + std::to_string(k + 1));
    for (const auto& m : kCurveMetrics) set_metric(out[k], m, metric_value(out[k], m) / weights[k]);
  }
  if (!out.empty()) out.back().episodes = rows.back().episodes;
  return out;
}

std::string merge_curves_csv(const std::vector<std::vector<MetricsRow>>& runs, int width) {
  if (runs.empty()) throw MalformedCsv("no runs to merge");
  std::vector<std::vector<MetricsRow>> binned;
  for (const auto& r : runs) binned.push_back(bin_by_episodes(r, width));
  for (std::size_t r = 1; r < binned.size(); ++r) {
    bool same = binned[r].size() == binned[0].size();
    for (std::size_t k = 0; same && k < binned[0].size(); ++k) same = binned[r][k].episodes == binned[0][k].episodes;
    if (!same)
      throw MalformedCsv("runs have mismatched episode grids (run 1 vs run " + std::to_string(r + 1) + ")");
  }
  std::string out = "bin,episodes";
  for (const auto& m : kCurveMetrics) out += "," + m + "_mean," + m + "_std";
  out += "\n";
  char buf[64];
  const double n = static_cast<double>(binned.size());
  for (std::size_t k = 0; k < binned[0].size(); ++k) {
    out += std::to_string(k + 1) + "," + std::to_string(binned[0][k].episodes);
    for (const auto& m : kCurveMetrics) {
      double mean = 0.0;
      for (const auto& b : binned) mean += metric_value(b[k], m);
      mean /= n;
      double var = 0.0;
      for (const auto& b : binned) var += std::pow(metric_value(b[k], m) - mean, 2);
      std::snprintf(buf, sizeof buf, ",%.6f,%.6f", mean, std::sqrt(var / n));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string comparison_table(const std::vector<RunGroup>& groups, int window) {
  std::size_t width = 6;
  for (const auto& g : groups) width = std::max(width, g.label.size());
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-*s  %4s  %6s  %6s  %6s  %7s  %8s  %8s  %8s\n", static_cast<int>(width), "Method",
                "Runs", "Turns", "Inform", "Match", "Success", "r_S", "r_U", "r_G");
  std::string out = buf;
  out += std::string(width + 70, '-') + "\n";
  for (const auto& g : groups) {
    std::vector<double> v(7, 0.0);
    const char* names[7] = {"avg_turns", "inform_f1", "match", "success", "mean_r_S", "mean_r_U", "mean_r_G"};
    for (const auto& run : g.runs) {
      if (run.empty()) throw MalformedCsv("run of '" + g.label + "' has no rows");
      const int end = run.back().episodes;
      for (int i = 0; i < 7; ++i) v[i] += window_mean(run, names[i], end - window, end);
    }
    for (auto& x : v) x /= static_cast<double>(g.runs.size());
    std::snprintf(buf, sizeof buf, "%-*s  %4zu  %6.2f  %6.3f  %6.3f  %6.1f%%  %8.2f  %8.2f  %8.2f\n",
                  static_cast<int>(width), g.label.c_str(), g.runs.size(), v[0], v[1], v[2], 100.0 * v[3], v[4], v[5],
                  v[6]);
    out += buf;
  }
  return out;
}

}  // namespace madpl
