#pragma once

#include <vector>

#include "madpl/agent.hpp"
#include "madpl/metrics.hpp"
#include "madpl/reward.hpp"

namespace madpl {

struct EpisodeOptions {
  int max_turns = 20;
  bool stop_on_success = true;
  RewardConfig rewards;
};

// One dialog turn: the user moves on s^U, the system answers on s^S.
struct Transition {
  VectorXd s_user;
  ActIndices a_user;
  bool terminal = false;
  VectorXd s_system;
  ActIndices a_system;
  RewardBreakdown reward;
  VectorXd next_user;
  VectorXd next_system;  // equals s_system on the final turn
  bool done = false;
};

struct Trajectory {
  std::vector<Transition> turns;
  DialogRecord record;
  bool success = false;

  double return_system() const;
  double return_user() const;
  double return_global() const;
};

// Rollout: user acts (+T) are grounded from the goal, the system state is
// updated and the system answers, system acts are grounded from the first
// entity matching the belief; the dialog ends on T, on the turn cap, or
// (when enabled) on task success.
Trajectory run_episode(const World& world, const StateLayout& layout, const UserGoal& goal, UserAgent& user,
                       SystemAgent& system, Rng& rng, const EpisodeOptions& options = {});

}  // namespace madpl
