#include "madpl/metrics.hpp"

#include <set>
#include <utility>

namespace madpl {

void DialogRecord::add_turn(std::vector<DialogAct> user_acts, std::vector<DialogAct> system_acts) {
  for (const auto& a : system_acts) {
    if (a.intent == "book") booked[a.domain] = a.value;
  }
  turns.push_back({std::move(user_acts), std::move(system_acts)});
}

InformScore inform_f1(const DialogRecord& dialog, const Ontology& ontology) {
  std::set<std::pair<std::string, std::string>> requested, informed;
  for (const auto& sg : dialog.goal.subgoals) {
    for (const auto& s : sg.requests) requested.emplace(sg.domain, s);
  }
  for (const auto& t : dialog.turns) {
    for (const auto& a : t.system_acts) {
      if (a.intent != "inform" || !ontology.has_domain(a.domain)) continue;
      if (ontology.domain(a.domain).is_requestable(a.slot)) informed.emplace(a.domain, a.slot);
    }
  }
  if (requested.empty()) return {};
  std::size_t hit = 0;
  for (const auto& r : requested) hit += informed.count(r);
  InformScore s;
  s.recall = static_cast<double>(hit) / static_cast<double>(requested.size());
  s.precision = informed.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(informed.size());
  s.f1 = hit == 0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

bool entity_satisfies(const Entity& e, const Constraints& c) {
  for (const auto& [slot, value] : c) {
    if (value == kDontCare) continue;
    auto it = e.attributes.find(slot);
    if (it == e.attributes.end() || it->second != value) return false;
  }
  return true;
}

double match_rate(const DialogRecord& dialog, const UserGoal& goal, const Database& db) {
  int domains = 0;
  int matched = 0;
  for (const auto& sg : goal.subgoals) {
    if (!sg.needs_booking()) continue;
    ++domains;
    auto it = dialog.booked.find(sg.domain);
    if (it == dialog.booked.end()) continue;
    const Entity* e = db.find(sg.domain, it->second);
    if (e && entity_satisfies(*e, sg.constraints)) ++matched;
  }
  return domains == 0 ? 1.0 : static_cast<double>(matched) / domains;
}

bool success(const DialogRecord& dialog, const UserGoal& goal, const Database& db) {
  return inform_f1(dialog, db.ontology()).recall == 1.0 && match_rate(dialog, goal, db) == 1.0;
}

}  // namespace madpl
