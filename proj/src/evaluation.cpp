#include "madpl/evaluation.hpp"

#include <algorithm>
#include <cstdio>

namespace madpl {

Aggregate aggregate(const std::vector<GoalResult>& results) {
  Aggregate a;
  a.dialogs = static_cast<int>(results.size());
  if (results.empty()) return a;
  for (const auto& r : results) {
    a.avg_turns += r.turns;
    a.inform_precision += r.inform.precision;
    a.inform_recall += r.inform.recall;
    a.inform_f1 += r.inform.f1;
    a.match += r.match;
    a.success += r.success ? 1.0 : 0.0;
  }
  const double n = static_cast<double>(results.size());
  for (double* f : {&a.avg_turns, &a.inform_precision, &a.inform_recall, &a.inform_f1, &a.match, &a.success}) *f /= n;
  return a;
}

std::string domain_class(const UserGoal& goal) {
  auto names = goal.domain_names();
  std::sort(names.begin(), names.end());
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += '+';
    out += n;
  }
  return out;
}

namespace {

std::string aggregate_fields(const Aggregate& a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", a.dialogs, a.avg_turns, a.inform_precision,
                a.inform_recall, a.inform_f1, a.match, a.success);
  return buf;
}

}  // namespace

std::string EvalReport::to_csv() const {
  std::string out = "goal,domains,class,turns,inform_precision,inform_recall,inform_f1,match,success\n";
  char buf[256];
  for (const auto& r : per_goal) {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%d,%.6f,%.6f,%.6f,%.6f,%d\n", r.index, r.domain_count,
                  r.domain_class.c_str(), r.turns, r.inform.precision, r.inform.recall, r.inform.f1, r.match,
                  r.success ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string EvalReport::slices_csv() const {
  std::string out = "slice,dialogs,avg_turns,inform_precision,inform_recall,inform_f1,match,success\n";
  out += "overall," + aggregate_fields(overall) + "\n";
  for (const auto& [n, a] : by_domain_count) out += "domains=" + std::to_string(n) + "," + aggregate_fields(a) + "\n";
  for (const auto& [c, a] : by_domain_class) out += "class=" + c + "," + aggregate_fields(a) + "\n";
  return out;
}

EvalReport evaluate(const World& world, const StateLayout& layout, UserAgent& user, SystemAgent& system,
                    const std::vector<UserGoal>& goals, std::uint64_t seed, int max_turns) {
  EpisodeOptions opts;
  opts.max_turns = max_turns;
  EvalReport report;
  std::map<int, std::vector<GoalResult>> by_count;
  std::map<std::string, std::vector<GoalResult>> by_class;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    const Trajectory traj = run_episode(world, layout, goals[i], user, system, rng, opts);
    GoalResult r;
    r.index = static_cast<int>(i);
    r.domain_count = static_cast<int>(goals[i].subgoals.size());
    r.domain_class = domain_class(goals[i]);
    r.turns = static_cast<int>(traj.turns.size());
    r.inform = inform_f1(traj.record, world.ontology());
    r.match = match_rate(traj.record, goals[i], world.db);
    r.success = success(traj.record, goals[i], world.db);
    by_count[r.domain_count].push_back(r);
    by_class[r.domain_class].push_back(r);
    report.per_goal.push_back(std::move(r));
  }
  report.overall = aggregate(report.per_goal);
  for (const auto& [k, v] : by_count) report.by_domain_count[k] = aggregate(v);
  for (const auto& [k, v] : by_class) report.by_domain_class[k] = aggregate(v);
  return report;
}

std::string summary_table(const std::vector<std::pair<std::string, Aggregate>>& rows) {
  std::size_t width = 6;
  for (const auto& [label, a] : rows) width = std::max(width, label.size());
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-*s  %6s  %6s  %6s  %6s  %6s  %7s\n", static_cast<int>(width), "Method", "Turns",
                "Inf-P", "Inf-R", "Inf-F1", "Match", "Success");
  out += buf;
  out += std::string(width + 51, '-') + "\n";
  for (const auto& [label, a] : rows) {
    std::snprintf(buf, sizeof buf, "%-*s  %6.2f  %6.3f  %6.3f  %6.3f  %6.3f  %6.1f%%\n", static_cast<int>(width),
                  label.c_str(), a.avg_turns, a.inform_precision, a.inform_recall, a.inform_f1, a.match,
                  100.0 * a.success);
    out += buf;
  }
  return out;
}

}  // namespace madpl
