#pragma once

#include <string>
#include <utility>
#include <vector>

#include "madpl/trainer.hpp"

namespace madpl {

// Metric columns carried through curves and tables.
inline const std::vector<std::string> kCurveMetrics = {"success",  "inform_f1", "match", "avg_turns",
                                                       "mean_r_S", "mean_r_U",  "mean_r_G", "L_V"};

double metric_value(const MetricsRow& row, const std::string& name);

// Episode-weighted mean of a metric over the iterations whose cumulative
// episode count falls in (from_episode, to_episode].
double window_mean(const std::vector<MetricsRow>& rows, const std::string& metric, int from_episode, int to_episode);

// Re-grids one run onto fixed episode bins: bin k covers episodes
// ((k-1)*width, k*width]; each row is episode-weighted into the bin holding
// its cumulative count. The returned rows carry iteration = k and
// episodes = k*width (the last bin ends at the run's final count).
std::vector<MetricsRow> bin_by_episodes(const std::vector<MetricsRow>& rows, int width);

// Mean and population standard deviation across runs on the shared episode
// grid. Throws MalformedCsv when the runs' grids differ.
std::string merge_curves_csv(const std::vector<std::vector<MetricsRow>>& runs, int width);

struct RunGroup {
  std::string label;
  std::vector<std::vector<MetricsRow>> runs;
};

// Table of final-window training metrics (last `window` episodes), mean over
// the runs of each group.
std::string comparison_table(const std::vector<RunGroup>& groups, int window);

}  // namespace madpl
