#include "madpl/agent.hpp"

#include <algorithm>

namespace madpl {

std::vector<DialogAct> ground_user_acts(const ActIndices& taken, const UserGoal& goal, const StateLayout& layout) {
  const auto& onto = layout.ontology();
  std::vector<DialogAct> out;
  for (const auto i : taken) {
    DialogAct a = layout.user_space().act(i);
    if (a.intent == "request") {
      a.value = kRequestValue;
    } else if (a.intent == "inform") {
      const SubGoal* sg = goal.find(a.domain);
      if (onto.domain(a.domain).find_informable(a.slot)) {
        auto it = sg ? sg->constraints.find(a.slot) : Constraints::const_iterator{};
        a.value = (sg && it != sg->constraints.end()) ? it->second : kDontCare;
      } else {
        if (!sg) continue;
        auto it = sg->book.find(a.slot);
        if (it == sg->book.end()) continue;
        a.value = it->second;
      }
    } else {
      a.value = kNoSlot;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<DialogAct> ground_system_acts(const ActIndices& taken, const SystemState& state,
                                          const StateLayout& layout, const Database& db) {
  const auto& onto = layout.ontology();
  std::vector<DialogAct> out;
  auto add = [&](DialogAct a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
  };
  for (const auto i : taken) {
    DialogAct a = layout.system_space().act(i);
    if (a.domain == kGeneralDomain || a.intent == "nooffer" || a.intent == "offerbook") {
      a.value = kNoSlot;
      add(std::move(a));
      continue;
    }
    if (a.intent == "request") {
      a.value = kRequestValue;
      add(std::move(a));
      continue;
    }
    const Entity* e = db.first_match(a.domain, state.belief_constraints(layout, onto.domain_index(a.domain)));
    if (!e) {
      add(DialogAct{a.domain, "nooffer", kNoSlot, kNoSlot});
      continue;
    }
    a.value = a.intent == "book" ? e->id : e->attr(a.slot);
    add(std::move(a));
  }
  return out;
}

UserDecision PolicyUser::act(const UserState&, const VectorXd& features, const std::vector<DialogAct>&, Rng& rng) {
  const PolicyAction pa = policy_->act(features, mode_, &rng);
  return {ground_user_acts(pa.acts, goal_, *layout_), pa.acts, pa.terminal};
}

ActIndices PolicySystem::act(const SystemState&, const VectorXd& features, const std::vector<DialogAct>&, Rng& rng) {
  return policy_->act(features, mode_, &rng).acts;
}

}  // namespace madpl
