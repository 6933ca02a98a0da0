#pragma once

#include <string>
#include <vector>

#include "fixtures.hpp"
#include "madpl/metrics.hpp"

// Hand-built dialogs and an independent set-based oracle for the dialog
// metrics, shared by the unit tests and the acceptance run.
namespace metric_cases {

using namespace madpl;
using fixtures::act;

// Two bookable domains so that match rates can take the value 1/2.
inline const std::string kTwoBookable = R"({
  "seed": 2,
  "entities_per_domain": 2,
  "domain_count_weights": [0.5, 0.5, 0.0],
  "domains": [
    {
      "name": "restaurant",
      "informable": {"food": ["italian", "chinese"]},
      "requestable": ["phone", "address"],
      "book_slots": ["people"],
      "bookable": true
    },
    {
      "name": "hotel",
      "informable": {"stars": ["2", "4"]},
      "requestable": ["phone", "postcode", "address"],
      "book_slots": ["day"],
      "bookable": true
    }
  ]
})";

inline World two_bookable() {
  WorldConfig cfg = load_world_config(kTwoBookable);
  World w{cfg, {}};
  w.db = Database(cfg.ontology, {{"restaurant",
                                  {{"r1", {{"food", "italian"}, {"phone", "1"}, {"address", "a"}, {"name", "r1"}}},
                                   {"r2", {{"food", "chinese"}, {"phone", "2"}, {"address", "b"}, {"name", "r2"}}}}},
                                 {"hotel",
                                  {{"h1", {{"stars", "2"}, {"phone", "3"}, {"postcode", "p1"}, {"address", "c"},
                                           {"name", "h1"}}},
                                   {"h2", {{"stars", "4"}, {"phone", "4"}, {"postcode", "p2"}, {"address", "d"},
                                           {"name", "h2"}}}}}});
  return w;
}

inline SubGoal sub(std::string domain, Constraints c, std::set<std::string> r, std::map<std::string, std::string> book = {}) {
  return {std::move(domain), std::move(c), std::move(r), std::move(book)};
}

inline DialogRecord dialog(UserGoal g, const std::vector<std::vector<DialogAct>>& system_turns) {
  DialogRecord d;
  d.goal = std::move(g);
  for (const auto& t : system_turns) d.add_turn({}, t);
  return d;
}

// Independent recomputation: enumerate every (domain, slot) the ontology
// declares requestable and look for a system inform of it anywhere.
struct Oracle {
  double precision, recall, f1, match;
  bool success;
};

inline Oracle oracle(const DialogRecord& d, const World& w) {
  int requested = 0, informed = 0, hit = 0;
  for (const auto& dom : w.ontology().domains()) {
    for (const auto& slot : dom.requestable) {
      bool asked = false, told = false;
      for (const auto& sg : d.goal.subgoals)
        asked = asked || (sg.domain == dom.name && sg.requests.count(slot) > 0);
      for (const auto& t : d.turns)
        for (const auto& a : t.system_acts) told = told || (a.intent == "inform" && a.domain == dom.name && a.slot == slot);
      requested += asked;
      informed += told;
      hit += asked && told;
    }
  }
  Oracle o{1.0, 1.0, 1.0, 1.0, false};
  if (requested > 0) {
    o.recall = static_cast<double>(hit) / requested;
    o.precision = informed == 0 ? 0.0 : static_cast<double>(hit) / informed;
    o.f1 = hit == 0 ? 0.0 : 2 * o.precision * o.recall / (o.precision + o.recall);
  }
  int booking = 0, matched = 0;
  for (const auto& sg : d.goal.subgoals) {
    if (sg.book.empty()) continue;
    ++booking;
    std::string last;
    for (const auto& t : d.turns)
      for (const auto& a : t.system_acts)
        if (a.intent == "book" && a.domain == sg.domain) last = a.value;
    for (const auto& e : w.db.entities(sg.domain)) {
      if (e.id != last) continue;
      bool ok = true;
      for (const auto& [slot, value] : sg.constraints) ok = ok && (value == kDontCare || e.attributes.at(slot) == value);
      matched += ok;
    }
  }
  if (booking > 0) o.match = static_cast<double>(matched) / booking;
  o.success = o.recall == 1.0 && o.match == 1.0;
  return o;
}

// Covers successes and failures, the empty request set and goals without
// bookings.
inline std::vector<DialogRecord> hand_built_dialogs() {
  const auto R = [](std::string d, std::string s, std::string v) { return act(d, "inform", s, v); };
  const auto B = [](std::string d, std::string id) { return act(d, "book", "none", id); };
  const UserGoal rest{{sub("restaurant", {{"food", "chinese"}}, {"phone", "address"}, {{"people", "3"}})}};
  const UserGoal hotel{{sub("hotel", {{"stars", "2"}}, {"postcode"})}};
  const UserGoal both{{sub("restaurant", {{"food", "italian"}}, {"phone"}),
                       sub("hotel", {{"stars", "4"}}, {"address"}, {{"day", "friday"}})}};
  const UserGoal book_only{{sub("hotel", {{"stars", "2"}}, {}, {{"day", "monday"}})}};
  return {
      dialog(rest, {{R("restaurant", "phone", "2")}, {R("restaurant", "address", "b"), B("restaurant", "r2")}}),
      dialog(rest, {{R("restaurant", "phone", "2")}, {B("restaurant", "r1")}}),
      dialog(rest, {{}}),
      dialog(rest, {{R("restaurant", "phone", "2"), R("restaurant", "address", "b"), R("hotel", "phone", "3")},
                    {B("restaurant", "r2")}}),
      dialog(hotel, {{R("hotel", "postcode", "p1")}}),
      dialog(hotel, {{R("hotel", "phone", "3")}}),
      dialog(hotel, {{R("hotel", "postcode", "p1"), R("hotel", "address", "c"), R("restaurant", "address", "a")}}),
      dialog(both, {{R("restaurant", "phone", "1"), R("hotel", "address", "d")}, {B("hotel", "h2")}}),
      dialog(both, {{R("restaurant", "phone", "1")}, {B("hotel", "h1")}}),
      dialog(both, {{R("hotel", "address", "d"), B("hotel", "h2"), B("restaurant", "r1")}}),
      dialog(both, {{act("general", "reqmore", "none")}, {act("restaurant", "nooffer", "none")}}),
      dialog(both, {{R("restaurant", "phone", "1"), R("restaurant", "food", "italian"), R("hotel", "address", "d"),
                     B("hotel", "h1")},
                    {B("hotel", "h2")}}),
      dialog(book_only, {{R("hotel", "phone", "3"), B("hotel", "h1")}}),
      dialog(book_only, {{B("hotel", "h2")}}),
  };
}

}  // namespace metric_cases
