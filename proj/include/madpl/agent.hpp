#pragma once

#include <vector>

#include "madpl/dialog_act.hpp"
#include "madpl/policy.hpp"
#include "madpl/state.hpp"

namespace madpl {

struct UserDecision {
  std::vector<DialogAct> acts;  // grounded
  ActIndices taken;             // what the agent chose in its action space
  bool terminal = false;
};

class UserAgent {
 public:
  virtual ~UserAgent() = default;
  virtual void reset(const UserGoal& goal) = 0;
  virtual UserDecision act(const UserState& state, const VectorXd& features,
                           const std::vector<DialogAct>& system_acts, Rng& rng) = 0;
};

class SystemAgent {
 public:
  virtual ~SystemAgent() = default;
  virtual void reset() {}
  virtual ActIndices act(const SystemState& state, const VectorXd& features, const std::vector<DialogAct>& user_acts,
                         Rng& rng) = 0;
};

// Fills user acts from the goal without failing: informs of constraints the
// goal lacks become "dont care", book-slot informs for domains without a
// booking are dropped.
std::vector<DialogAct> ground_user_acts(const ActIndices& taken, const UserGoal& goal, const StateLayout& layout);

// Fills system acts from the first entity matching the current belief of
// each act's domain. Acts that need an entity when none matches turn into a
// nooffer for that domain.
std::vector<DialogAct> ground_system_acts(const ActIndices& taken, const SystemState& state,
                                          const StateLayout& layout, const Database& db);

class PolicyUser : public UserAgent {
 public:
  PolicyUser(const DialogPolicy& policy, const StateLayout& layout, DecodeMode mode)
      : policy_(&policy), layout_(&layout), mode_(mode) {}

  void reset(const UserGoal& goal) override { goal_ = goal; }
  UserDecision act(const UserState& state, const VectorXd& features, const std::vector<DialogAct>& system_acts,
                   Rng& rng) override;

 private:
  const DialogPolicy* policy_;
  const StateLayout* layout_;
  DecodeMode mode_;
  UserGoal goal_;
};

class PolicySystem : public SystemAgent {
 public:
  PolicySystem(const DialogPolicy& policy, DecodeMode mode) : policy_(&policy), mode_(mode) {}

  ActIndices act(const SystemState& state, const VectorXd& features, const std::vector<DialogAct>& user_acts,
                 Rng& rng) override;

 private:
  const DialogPolicy* policy_;
  DecodeMode mode_;
};

}  // namespace madpl
