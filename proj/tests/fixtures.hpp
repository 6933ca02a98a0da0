#pragma once

#include <string>

#include "madpl/ontology.hpp"
#include "madpl/state.hpp"

namespace fixtures {

// One bookable domain with 2 informable, 2 requestable and 2 book slots.
inline const std::string kMiniConfig = R"({
  "seed": 1,
  "entities_per_domain": 3,
  "domain_count_weights": [1.0, 0.0, 0.0],
  "domains": [{
    "name": "restaurant",
    "informable": {"food": ["italian", "chinese"], "area": ["north", "south"]},
    "requestable": ["phone", "address"],
    "book_slots": ["people", "time"],
    "bookable": true
  }]
})";

// Two domains, one of them not bookable.
inline const std::string kTwoDomainConfig = R"({
  "seed": 5,
  "entities_per_domain": 6,
  "domain_count_weights": [0.5, 0.5, 0.0],
  "domains": [
    {
      "name": "hotel",
      "informable": {"area": ["north", "south", "east"], "stars": ["2", "3", "4"]},
      "requestable": ["phone", "postcode", "address"],
      "book_slots": ["day"],
      "bookable": true
    },
    {
      "name": "attraction",
      "informable": {"type": ["museum", "park"]},
      "requestable": ["entrance"],
      "book_slots": [],
      "bookable": false
    }
  ]
})";

inline madpl::Entity entity(const std::string& id, const std::string& food, const std::string& area,
                            const std::string& phone) {
  return {id, {{"food", food}, {"area", area}, {"phone", phone}, {"address", id + " street"}, {"name", "venue " + id}}};
}

// r1 italian/north, r2 chinese/north, r3 chinese/south.
inline madpl::World mini_world() {
  madpl::WorldConfig cfg = madpl::load_world_config(kMiniConfig);
  madpl::World w{cfg, {}};
  w.db = madpl::Database(cfg.ontology, {{"restaurant",
                                         {entity("r1", "italian", "north", "01223 100100"),
                                          entity("r2", "chinese", "north", "01223 200200"),
                                          entity("r3", "chinese", "south", "01223 300300")}}});
  return w;
}

inline madpl::SubGoal subgoal(madpl::Constraints c, std::set<std::string> r,
                              std::map<std::string, std::string> book = {}) {
  return {"restaurant", std::move(c), std::move(r), std::move(book)};
}

inline madpl::UserGoal goal_of(madpl::SubGoal sg) { return madpl::UserGoal{{std::move(sg)}}; }

inline madpl::DialogAct act(const std::string& d, const std::string& i, const std::string& s,
                            const std::string& v = madpl::kPlaceholder) {
  return {d, i, s, v};
}

}  // namespace fixtures
