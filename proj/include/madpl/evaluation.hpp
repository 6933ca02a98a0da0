#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "madpl/episode.hpp"

namespace madpl {

struct GoalResult {
  int index = 0;
  int domain_count = 0;
  std::string domain_class;  // sorted domain names joined by '+'
  int turns = 0;
  InformScore inform;
  double match = 1.0;
  bool success = false;
};

struct Aggregate {
  int dialogs = 0;
  double avg_turns = 0.0;
  double inform_precision = 0.0;
  double inform_recall = 0.0;
  double inform_f1 = 0.0;
  double match = 0.0;
  double success = 0.0;
};

Aggregate aggregate(const std::vector<GoalResult>& results);

struct EvalReport {
  std::vector<GoalResult> per_goal;
  Aggregate overall;
  std::map<int, Aggregate> by_domain_count;
  std::map<std::string, Aggregate> by_domain_class;

  // One row per goal.
  std::string to_csv() const;
  // One row per slice (overall, domains=<n>, class=<a+b>).
  std::string slices_csv() const;
};

std::string domain_class(const UserGoal& goal);

// Runs one dialog per goal. Agents decide their own decoding mode; policy
// agents are expected to be greedy here. Goal i uses rng seed
// derive_seed(seed, i).
EvalReport evaluate(const World& world, const StateLayout& layout, UserAgent& user, SystemAgent& system,
                    const std::vector<UserGoal>& goals, std::uint64_t seed, int max_turns = 20);

// Plain-text table with the columns Turns, Inform (P/R/F1), Match, Success.
std::string summary_table(const std::vector<std::pair<std::string, Aggregate>>& rows);

}  // namespace madpl
