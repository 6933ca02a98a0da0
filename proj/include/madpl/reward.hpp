#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "madpl/metrics.hpp"
#include "madpl/state.hpp"

namespace madpl {

struct RewardConfig {
  double empty_act_penalty = -5.0;
  double late_answer_penalty = -1.0;
  double early_inform_penalty = -1.0;
  double efficiency_penalty = -1.0;
  double subgoal_reward = 5.0;
  double success_reward = 20.0;
  double failure_penalty = -5.0;

  // Overrides fields named in j; throws SchemaError on sign violations.
  static RewardConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

enum class RewardTrigger {
  system_empty_act,
  late_answer,
  system_success,
  system_failure,
  user_empty_act,
  early_inform,
  user_goal_reward,
  user_goal_failure,
  efficiency,
  subgoal,
  global_success,
  global_failure,
};

std::string_view trigger_name(RewardTrigger t);

struct FiredComponent {
  RewardTrigger trigger;
  double value;
};

struct RewardBreakdown {
  double r_S = 0.0;
  double r_U = 0.0;
  double r_G = 0.0;
  std::vector<FiredComponent> fired;

  double total() const { return r_S + r_U + r_G; }
  bool has(RewardTrigger t) const;
  int count(RewardTrigger t) const;
};

using SlotKey = std::pair<std::string, std::string>;  // (domain, slot)

struct SystemRewardContext {
  std::vector<DialogAct> system_acts;
  std::vector<SlotKey> pending_requests;  // requested by the user in this turn's user acts
  bool done = false;
  bool expressed_success = false;
};

struct UserRewardContext {
  std::vector<DialogAct> user_acts;
  std::set<std::string> domains_with_uninformed_constraints;
  bool done = false;
  bool expressed_all = false;
};

struct GlobalRewardContext {
  int newly_completed_subgoals = 0;
  bool done = false;
  bool task_success = false;
};

double system_reward(const SystemRewardContext& ctx, const RewardConfig& cfg, RewardBreakdown* out = nullptr);
double user_reward(const UserRewardContext& ctx, const RewardConfig& cfg, RewardBreakdown* out = nullptr);
double global_reward(const GlobalRewardContext& ctx, const RewardConfig& cfg, RewardBreakdown* out = nullptr);

// Symbolic bookkeeping of one session, shared by the reward functions, the
// success-based termination and the metrics.
class DialogTracker {
 public:
  DialogTracker(const UserGoal& goal, const StateLayout& layout, const Database& db);

  // Call once per turn with the grounded acts of both agents.
  void observe_turn(const std::vector<DialogAct>& user_acts, const std::vector<DialogAct>& system_acts);

  const DialogRecord& record() const { return record_; }

  // Requests in the latest user turn.
  std::vector<SlotKey> last_user_requests() const;
  // Goal domains with a constraint the user has not informed yet.
  std::set<std::string> domains_with_uninformed_constraints() const;

  bool user_expressed_all() const;
  // Success against what the user expressed: it expressed something, every
  // slot it requested was informed, and every domain where it supplied a book
  // slot has a booking that satisfies the expressed constraints.
  bool system_expressed_success(const SystemState& system_state) const;
  bool task_success() const;
  // Marks and counts goal domains whose subtask completed since the last call.
  int take_newly_completed(const UserState& user_state);

 private:
  bool subgoal_complete(const SubGoal& sg, const UserState& user_state) const;

  const StateLayout* layout_;
  const Database* db_;
  DialogRecord record_;
  std::set<SlotKey> user_informed_;
  std::set<SlotKey> user_requested_;
  std::set<SlotKey> system_informed_;
  std::set<std::string> book_asked_;
  std::set<std::string> completed_;
  bool user_expressed_anything_ = false;
};

}  // namespace madpl
