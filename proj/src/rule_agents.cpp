#include "madpl/rule_agents.hpp"

#include <algorithm>
#include <limits>

#include "madpl/episode.hpp"

namespace madpl {

DialogAct AgendaUser::inform_for(const SubGoal& sg, const std::string& slot) const {
  auto it = sg.constraints.find(slot);
  return {sg.domain, "inform", slot, it == sg.constraints.end() ? kDontCare : it->second};
}

void AgendaUser::reset(const UserGoal& goal) {
  goal_ = goal;
  stack_.clear();
  answered_.clear();
  last_requests_.clear();
  booked_.clear();
  book_repushed_.clear();
  finished_ = false;
  for (const auto& sg : goal_.subgoals) {
    for (const auto& [slot, value] : sg.constraints) stack_.push_back({sg.domain, "inform", slot, value});
    for (const auto& [slot, value] : sg.book) stack_.push_back({sg.domain, "inform", slot, value});
    for (const auto& slot : sg.requests) stack_.push_back({sg.domain, "request", slot, kRequestValue});
  }
}

// Sets the constraint whose value is rarest in the database to "dont care".
void AgendaUser::relax(const std::string& domain) {
  SubGoal* sg = nullptr;
  for (auto& g : goal_.subgoals) {
    if (g.domain == domain) sg = &g;
  }
  if (!sg) return;
  const std::string* best = nullptr;
  std::size_t best_count = std::numeric_limits<std::size_t>::max();
  for (const auto& [slot, value] : sg->constraints) {
    if (value == kDontCare) continue;
    const std::size_t n = db_->count(domain, {{slot, value}});
    if (n < best_count) {
      best_count = n;
      best = &slot;
    }
  }
  if (!best) return;
  sg->constraints[*best] = kDontCare;
  push_top({domain, "inform", *best, kDontCare});
}

UserDecision AgendaUser::act(const UserState&, const VectorXd&, const std::vector<DialogAct>& system_acts, Rng&) {
  return respond(system_acts);
}

UserDecision AgendaUser::respond(const std::vector<DialogAct>& system_acts) {
  const auto& onto = layout_->ontology();
  UserDecision out;
  if (finished_) {
    out.terminal = true;
    return out;
  }

  for (const auto& a : system_acts) {
    if (a.domain == kGeneralDomain) continue;
    const auto& schema = onto.domain(a.domain);
    const SubGoal* sg = goal_.find(a.domain);
    if (a.intent == "inform" && schema.is_requestable(a.slot)) {
      answered_.emplace(a.domain, a.slot);
    } else if (a.intent == "inform" && sg) {
      auto it = sg->constraints.find(a.slot);
      if (it != sg->constraints.end() && it->second != kDontCare && it->second != a.value)
        push_top({a.domain, "inform", a.slot, it->second});
    } else if (a.intent == "request" && sg) {
      push_top(inform_for(*sg, a.slot));
    } else if (a.intent == "nooffer" && sg) {
      relax(a.domain);
    } else if (a.intent == "book" && sg) {
      const Entity* e = db_->find(a.domain, a.value);
      if (e && entity_satisfies(*e, sg->constraints)) booked_.insert(a.domain);
    }
  }

  for (auto it = last_requests_.rbegin(); it != last_requests_.rend(); ++it) {
    if (!answered_.count(*it)) push_top({it->first, "request", it->second, kRequestValue});
  }

  // Drop answered requests and repeated entries, keeping the topmost copy.
  std::deque<DialogAct> cleaned;
  std::set<ActTriple> seen;
  for (auto& a : stack_) {
    if (a.intent == "request" && answered_.count({a.domain, a.slot})) continue;
    if (!seen.insert(a.triple()).second) continue;
    cleaned.push_back(std::move(a));
  }
  stack_ = std::move(cleaned);

  if (stack_.empty()) {
    for (const auto& sg : goal_.subgoals) {
      if (!sg.needs_booking() || booked_.count(sg.domain) || book_repushed_.count(sg.domain)) continue;
      book_repushed_.insert(sg.domain);
      for (const auto& [slot, value] : sg.book) stack_.push_back({sg.domain, "inform", slot, value});
    }
  }

  last_requests_.clear();
  if (stack_.empty()) {
    out.acts = {{kGeneralDomain, "thank", kNoSlot, kNoSlot}, {kGeneralDomain, "bye", kNoSlot, kNoSlot}};
    out.terminal = true;
    finished_ = true;
  } else {
    for (std::size_t k = 0; k < kActsPerTurn && !stack_.empty(); ++k) {
      DialogAct a = std::move(stack_.front());
      stack_.pop_front();
      if (a.intent == "request") last_requests_.emplace_back(a.domain, a.slot);
      out.acts.push_back(std::move(a));
    }
  }
  out.taken = layout_->user_space().indices(out.acts);
  return out;
}

std::vector<DialogAct> RuleSystem::decide(const SystemState& state, const std::vector<DialogAct>& user_acts) const {
  const auto& onto = layout_->ontology();
  std::vector<DialogAct> out;
  auto add = [&](DialogAct a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
  };
  for (const auto& a : user_acts) {
    if (a.domain == kGeneralDomain && a.intent == "bye") {
      return {{kGeneralDomain, "bye", kNoSlot, kPlaceholder}, {kGeneralDomain, "welcome", kNoSlot, kPlaceholder}};
    }
  }
  std::vector<std::string> domains;
  for (const auto& a : user_acts) {
    if (a.domain != kGeneralDomain && std::find(domains.begin(), domains.end(), a.domain) == domains.end())
      domains.push_back(a.domain);
  }
  for (const auto& dom : domains) {
    const std::size_t d = onto.domain_index(dom);
    const auto& schema = onto.domains()[d];
    const Constraints belief = state.belief_constraints(*layout_, d);
    const Entity* e = db_->first_match(dom, belief);
    if (!e) {
      add({dom, "nooffer", kNoSlot, kPlaceholder});
      continue;
    }
    bool informed = false;
    bool requested = false;
    for (const auto& a : user_acts) {
      if (a.domain != dom) continue;
      if (a.intent == "request") {
        add({dom, "inform", a.slot, kPlaceholder});
        requested = true;
      }
      if (a.intent == "inform" && schema.find_informable(a.slot)) informed = true;
    }
    if (informed) add({dom, "recommend", kNameSlot, kPlaceholder});
    // Narrow a wide result set by asking for the first unfilled constraint.
    if (!requested && state.db_count[d] >= kNarrowThreshold) {
      const auto& slots = layout_->informable();
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].domain == d && state.belief[i].empty()) {
          add({dom, "request", slots[i].name, kRequestValue});
          break;
        }
      }
    }
    if (schema.bookable && state.all_book_slots_supplied(*layout_, d)) {
      const Entity* booked = state.booked[d].empty() ? nullptr : db_->find(dom, state.booked[d]);
      if (!booked || !entity_satisfies(*booked, belief)) add({dom, "book", kNoSlot, kPlaceholder});
    }
  }
  if (out.empty()) add({kGeneralDomain, "reqmore", kNoSlot, kPlaceholder});
  return out;
}

ActIndices RuleSystem::act(const SystemState& state, const VectorXd&, const std::vector<DialogAct>& user_acts, Rng&) {
  return layout_->system_space().indices(decide(state, user_acts));
}

Corpus generate_corpus(const World& world, const StateLayout& layout, int n_dialogs, std::uint64_t seed,
                       int max_turns) {
  Corpus corpus;
  AgendaUser user(layout, world.db);
  RuleSystem system(layout, world.db);
  EpisodeOptions opts;
  opts.max_turns = max_turns;
  const auto& ud = layout.user_space().dim();
  const auto& sd = layout.system_space().dim();
  for (int i = 0; i < n_dialogs; ++i) {
    const UserGoal goal =
        sample_goal(world.ontology(), world.db, derive_seed(seed, static_cast<std::uint64_t>(i)),
                    world.config.domain_count_weights);
    Rng rng(derive_seed(seed ^ 0x5eedULL, static_cast<std::uint64_t>(i)));
    const Trajectory traj = run_episode(world, layout, goal, user, system, rng, opts);
    // The terminal label marks the dialog's final user turn.
    const int last = static_cast<int>(traj.turns.size()) - 1;
    for (int turn = 0; turn <= last; ++turn) {
      const Transition& t = traj.turns[static_cast<std::size_t>(turn)];
      corpus.records.push_back(make_record(i, turn, Role::user, t.s_user, t.a_user, ud, turn == last));
      corpus.records.push_back(make_record(i, turn, Role::system, t.s_system, t.a_system, sd, false));
    }
    corpus.dialog_success.push_back(traj.success ? 1 : 0);
  }
  return corpus;
}

}  // namespace madpl
