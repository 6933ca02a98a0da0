#include "madpl/reward.hpp"

#include <algorithm>
#include <cmath>

#include "madpl/errors.hpp"

namespace madpl {

RewardConfig RewardConfig::from_json(const nlohmann::json& j) {
  RewardConfig c;
  auto read = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw SchemaError(std::string("rewards.") + key + ": expected number");
    field = j.at(key).get<double>();
    if (!std::isfinite(field)) throw SchemaError(std::string("rewards.") + key + ": not finite");
  };
  read("empty_act_penalty", c.empty_act_penalty);
  read("late_answer_penalty", c.late_answer_penalty);
  read("early_inform_penalty", c.early_inform_penalty);
  read("efficiency_penalty", c.efficiency_penalty);
  read("subgoal_reward", c.subgoal_reward);
  read("success_reward", c.success_reward);
  read("failure_penalty", c.failure_penalty);
  for (double p : {c.empty_act_penalty, c.late_answer_penalty, c.early_inform_penalty, c.efficiency_penalty,
                   c.failure_penalty}) {
    if (p > 0) throw SchemaError("rewards: penalties must be <= 0");
  }
  if (c.subgoal_reward < 0 || c.success_reward < 0) throw SchemaError("rewards: rewards must be >= 0");
  return c;
}

nlohmann::json RewardConfig::to_json() const {
  return {{"empty_act_penalty", empty_act_penalty},       {"late_answer_penalty", late_answer_penalty},
          {"early_inform_penalty", early_inform_penalty}, {"efficiency_penalty", efficiency_penalty},
          {"subgoal_reward", subgoal_reward},             {"success_reward", success_reward},
          {"failure_penalty", failure_penalty}};
}

std::string_view trigger_name(RewardTrigger t) {
  switch (t) {
    case RewardTrigger::system_empty_act: return "system_empty_act";
    case RewardTrigger::late_answer: return "late_answer";
    case RewardTrigger::system_success: return "system_success";
    case RewardTrigger::system_failure: return "system_failure";
    case RewardTrigger::user_empty_act: return "user_empty_act";
    case RewardTrigger::early_inform: return "early_inform";
    case RewardTrigger::user_goal_reward: return "user_goal_reward";
    case RewardTrigger::user_goal_failure: return "user_goal_failure";
    case RewardTrigger::efficiency: return "efficiency";
    case RewardTrigger::subgoal: return "subgoal";
    case RewardTrigger::global_success: return "global_success";
    case RewardTrigger::global_failure: return "global_failure";
  }
  return "?";
}

bool RewardBreakdown::has(RewardTrigger t) const { return count(t) > 0; }

int RewardBreakdown::count(RewardTrigger t) const {
  return static_cast<int>(std::count_if(fired.begin(), fired.end(), [&](const auto& f) { return f.trigger == t; }));
}

namespace {

double fire(RewardBreakdown* out, double RewardBreakdown::*stream, RewardTrigger t, double value) {
  if (out) {
    out->*stream += value;
    out->fired.push_back({t, value});
  }
  return value;
}

}  // namespace

double system_reward(const SystemRewardContext& ctx, const RewardConfig& cfg, RewardBreakdown* out) {
  constexpr auto S = &RewardBreakdown::r_S;
  double r = 0.0;
  if (ctx.system_acts.empty()) r += fire(out, S, RewardTrigger::system_empty_act, cfg.empty_act_penalty);
  const bool late = std::any_of(ctx.pending_requests.begin(), ctx.pending_requests.end(), [&](const SlotKey& k) {
    return std::none_of(ctx.system_acts.begin(), ctx.system_acts.end(), [&](const DialogAct& a) {
      return a.intent == "inform" && a.domain == k.first && a.slot == k.second;
    });
  });
  if (late) r += fire(out, S, RewardTrigger::late_answer, cfg.late_answer_penalty);
  if (ctx.done) {
    r += ctx.expressed_success ? fire(out, S, RewardTrigger::system_success, cfg.success_reward)
                               : fire(out, S, RewardTrigger::system_failure, cfg.failure_penalty);
  }
  return r;
}

double user_reward(const UserRewardContext& ctx, const RewardConfig& cfg, RewardBreakdown* out) {
  constexpr auto U = &RewardBreakdown::r_U;
  double r = 0.0;
  if (ctx.user_acts.empty()) r += fire(out, U, RewardTrigger::user_empty_act, cfg.empty_act_penalty);
  const bool early = std::any_of(ctx.user_acts.begin(), ctx.user_acts.end(), [&](const DialogAct& a) {
    return a.intent == "request" && ctx.domains_with_uninformed_constraints.count(a.domain);
  });
  if (early) r += fire(out, U, RewardTrigger::early_inform, cfg.early_inform_penalty);
  if (ctx.done) {
    r += ctx.expressed_all ? fire(out, U, RewardTrigger::user_goal_reward, cfg.success_reward)
                           : fire(out, U, RewardTrigger::user_goal_failure, cfg.failure_penalty);
  }
  return r;
}

double global_reward(const GlobalRewardContext& ctx, const RewardConfig& cfg, RewardBreakdown* out) {
  constexpr auto G = &RewardBreakdown::r_G;
  double r = fire(out, G, RewardTrigger::efficiency, cfg.efficiency_penalty);
  for (int i = 0; i < ctx.newly_completed_subgoals; ++i) r += fire(out, G, RewardTrigger::subgoal, cfg.subgoal_reward);
  if (ctx.done) {
    r += ctx.task_success ? fire(out, G, RewardTrigger::global_success, cfg.success_reward)
                          : fire(out, G, RewardTrigger::global_failure, cfg.failure_penalty);
  }
  return r;
}

DialogTracker::DialogTracker(const UserGoal& goal, const StateLayout& layout, const Database& db)
    : layout_(&layout), db_(&db) {
  record_.goal = goal;
}

void DialogTracker::observe_turn(const std::vector<DialogAct>& user_acts, const std::vector<DialogAct>& system_acts) {
  const auto& onto = layout_->ontology();
  for (const auto& a : user_acts) {
    if (a.domain == kGeneralDomain) continue;
    user_expressed_anything_ = true;
    if (a.intent == "inform") {
      user_informed_.emplace(a.domain, a.slot);
      if (onto.domain(a.domain).is_book_slot(a.slot)) book_asked_.insert(a.domain);
    } else if (a.intent == "request") {
      user_requested_.emplace(a.domain, a.slot);
    }
  }
  for (const auto& a : system_acts) {
    if (a.intent == "inform" && a.domain != kGeneralDomain && onto.domain(a.domain).is_requestable(a.slot))
      system_informed_.emplace(a.domain, a.slot);
  }
  record_.add_turn(user_acts, system_acts);
}

std::vector<SlotKey> DialogTracker::last_user_requests() const {
  std::vector<SlotKey> out;
  if (record_.turns.empty()) return out;
  for (const auto& a : record_.turns.back().user_acts) {
    if (a.intent == "request") out.emplace_back(a.domain, a.slot);
  }
  return out;
}

std::set<std::string> DialogTracker::domains_with_uninformed_constraints() const {
  std::set<std::string> out;
  for (const auto& sg : record_.goal.subgoals) {
    for (const auto& [slot, value] : sg.constraints) {
      if (!user_informed_.count({sg.domain, slot})) out.insert(sg.domain);
    }
  }
  return out;
}

bool DialogTracker::user_expressed_all() const {
  for (const auto& sg : record_.goal.subgoals) {
    for (const auto& [slot, value] : sg.constraints) {
      if (!user_informed_.count({sg.domain, slot})) return false;
    }
    for (const auto& slot : sg.requests) {
      const SlotKey k{sg.domain, slot};
      if (!user_requested_.count(k) && !system_informed_.count(k)) return false;
    }
  }
  return true;
}

bool DialogTracker::system_expressed_success(const SystemState& system_state) const {
  if (!user_expressed_anything_) return false;
  for (const auto& k : user_requested_) {
    if (!system_informed_.count(k)) return false;
  }
  const auto& onto = layout_->ontology();
  for (const auto& dom : book_asked_) {
    auto it = record_.booked.find(dom);
    if (it == record_.booked.end()) return false;
    const Entity* e = db_->find(dom, it->second);
    if (!e || !entity_satisfies(*e, system_state.belief_constraints(*layout_, onto.domain_index(dom)))) return false;
  }
  return true;
}

bool DialogTracker::task_success() const { return success(record_, record_.goal, *db_); }

bool DialogTracker::subgoal_complete(const SubGoal& sg, const UserState& user_state) const {
  for (const auto& [slot, value] : sg.constraints) {
    if (!user_informed_.count({sg.domain, slot})) return false;
    if (user_state.inconsistent[layout_->informable_index(sg.domain, slot)]) return false;
  }
  for (const auto& slot : sg.requests) {
    if (!system_informed_.count({sg.domain, slot})) return false;
  }
  if (sg.needs_booking()) {
    auto it = record_.booked.find(sg.domain);
    if (it == record_.booked.end()) return false;
    const Entity* e = db_->find(sg.domain, it->second);
    if (!e || !entity_satisfies(*e, sg.constraints)) return false;
  }
  return true;
}

int DialogTracker::take_newly_completed(const UserState& user_state) {
  int n = 0;
  for (const auto& sg : record_.goal.subgoals) {
    if (completed_.count(sg.domain)) continue;
    if (subgoal_complete(sg, user_state)) {
      completed_.insert(sg.domain);
      ++n;
    }
  }
  return n;
}

}  // namespace madpl
