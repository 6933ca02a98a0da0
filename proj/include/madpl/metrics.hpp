#pragma once

#include <map>
#include <string>
#include <vector>

#include "madpl/dialog_act.hpp"
#include "madpl/ontology.hpp"

namespace madpl {

struct DialogTurn {
  std::vector<DialogAct> user_acts;
  std::vector<DialogAct> system_acts;
};

// A finished (or in-progress) dialog: one turn is a user act set followed by
// the system's response.
struct DialogRecord {
  UserGoal goal;
  std::vector<DialogTurn> turns;
  std::map<std::string, std::string> booked;  // domain -> entity id (latest book act)

  std::size_t turn_count() const { return turns.size(); }
  void add_turn(std::vector<DialogAct> user_acts, std::vector<DialogAct> system_acts);
};

struct InformScore {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Requested set: goal requests (domain, slot). Informed set: requestable
// (domain, slot) pairs the system informed. Empty request set -> (1, 1, 1).
InformScore inform_f1(const DialogRecord& dialog, const Ontology& ontology);

// Mean over goal domains that require booking of [booked entity satisfies
// every non-"dont care" constraint]. No booking domains -> 1.
double match_rate(const DialogRecord& dialog, const UserGoal& goal, const Database& db);

// inform recall == 1 and match rate == 1.
bool success(const DialogRecord& dialog, const UserGoal& goal, const Database& db);

bool entity_satisfies(const Entity& e, const Constraints& c);

}  // namespace madpl
