#pragma once

#include <deque>
#include <set>
#include <string>
#include <vector>

#include "madpl/agent.hpp"
#include "madpl/corpus.hpp"
#include "madpl/reward.hpp"

namespace madpl {

// Stack-driven simulated user. The agenda starts as, per goal domain in goal
// order, the constraint informs, then the book-slot informs, then the
// requests; the top of the stack is popped first.
class AgendaUser : public UserAgent {
 public:
  static constexpr std::size_t kActsPerTurn = 2;

  AgendaUser(const StateLayout& layout, const Database& db) : layout_(&layout), db_(&db) {}

  void reset(const UserGoal& goal) override;
  UserDecision act(const UserState& state, const VectorXd& features, const std::vector<DialogAct>& system_acts,
                   Rng& rng) override;

  // Reacts to the system turn and pops the next acts.
  UserDecision respond(const std::vector<DialogAct>& system_acts);

  const std::deque<DialogAct>& agenda() const { return stack_; }
  const UserGoal& working_goal() const { return goal_; }

 private:
  void push_top(DialogAct a) { stack_.push_front(std::move(a)); }
  void relax(const std::string& domain);
  DialogAct inform_for(const SubGoal& sg, const std::string& slot) const;

  const StateLayout* layout_;
  const Database* db_;
  UserGoal goal_;
  std::deque<DialogAct> stack_;
  std::set<SlotKey> answered_;
  std::vector<SlotKey> last_requests_;
  std::set<std::string> booked_;
  std::set<std::string> book_repushed_;
  bool finished_ = false;
};

// Scripted system: answers requests from the first entity matching the
// belief, recommends on informs, asks for an unfilled constraint while at
// least kNarrowThreshold entities match, books once every book slot is
// supplied, says nooffer on empty queries, reqmore when idle and bye+welcome
// on bye.
class RuleSystem : public SystemAgent {
 public:
  // Result-set size from which the system asks for a missing constraint.
  static constexpr std::size_t kNarrowThreshold = 4;

  RuleSystem(const StateLayout& layout, const Database& db) : layout_(&layout), db_(&db) {}

  ActIndices act(const SystemState& state, const VectorXd& features, const std::vector<DialogAct>& user_acts,
                 Rng& rng) override;
  std::vector<DialogAct> decide(const SystemState& state, const std::vector<DialogAct>& user_acts) const;

 private:
  const StateLayout* layout_;
  const Database* db_;
};

// Agenda user x rule system self-play on goals sampled from derived seeds;
// both roles' (state, action, terminal) records go into the corpus.
Corpus generate_corpus(const World& world, const StateLayout& layout, int n_dialogs, std::uint64_t seed,
                       int max_turns = 20);

}  // namespace madpl
