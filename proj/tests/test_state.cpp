#include <doctest.h>

#include "fixtures.hpp"
#include "madpl/errors.hpp"
#include "madpl/state.hpp"

using namespace madpl;
using fixtures::act;

namespace {

struct Mini {
  World world = fixtures::mini_world();
  StateLayout layout{world.ontology()};
};

bool in_unit_range(const Eigen::VectorXd& v) { return (v.array() >= 0.0).all() && (v.array() <= 1.0).all(); }

}  // namespace

TEST_SUITE("state_tracking") {
  TEST_CASE("db count buckets") {
    CHECK(db_count_bucket(0) == 0);
    CHECK(db_count_bucket(1) == 1);
    CHECK(db_count_bucket(2) == 2);
    CHECK(db_count_bucket(3) == 2);
    CHECK(db_count_bucket(4) == 3);
    CHECK(db_count_bucket(400) == 3);
  }

  TEST_CASE("init flags one per goal slot") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}, {"area", "north"}}, {"phone", "address"}));
    const auto [u, s] = init_states(g, m.layout, m.world.db);
    CHECK(u.pending_count() == 4);
    CHECK(std::count(u.inconsistent.begin(), u.inconsistent.end(), 1) == 0);

    const UserGoal booked = fixtures::goal_of(
        fixtures::subgoal({{"food", "italian"}, {"area", "north"}}, {"phone", "address"}, {{"people", "2"}, {"time", "18:00"}}));
    const auto [ub, sb] = init_states(booked, m.layout, m.world.db);
    // Book-slot flags plus one booking flag.
    CHECK(ub.pending_count() == 4 + 2 + 1);
  }

  TEST_CASE("init counts reflect the unconstrained query") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}));
    const auto [u, s] = init_states(g, m.layout, m.world.db);
    CHECK(s.db_count[0] == 3);
    CHECK(db_count_bucket(s.db_count[0]) == 2);
    CHECK(std::all_of(s.belief.begin(), s.belief.end(), [](const std::string& v) { return v.empty(); }));
  }

  TEST_CASE("user informs write the belief and narrow the count") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}));
    auto [u, s] = init_states(g, m.layout, m.world.db);
    s = update_system_state(s, {act("restaurant", "inform", "food", "italian")}, m.layout, m.world.db);
    CHECK(s.belief[m.layout.informable_index("restaurant", "food")] == "italian");
    CHECK(s.db_count[0] == 1);
    CHECK(db_count_bucket(s.db_count[0]) == 1);

    s = update_system_state(s, {act("restaurant", "inform", "food", "chinese")}, m.layout, m.world.db);
    CHECK(s.belief[m.layout.informable_index("restaurant", "food")] == "chinese");
    CHECK(s.db_count[0] == 2);

    const auto before = s.belief;
    s = update_system_state(s, {act("restaurant", "request", "phone", "?")}, m.layout, m.world.db);
    CHECK(s.requested[m.layout.requestable_index("restaurant", "phone")] == 1);
    CHECK(s.belief == before);
  }

  TEST_CASE("unknown slots and domains are rejected") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}));
    auto [u, s] = init_states(g, m.layout, m.world.db);
    CHECK_THROWS(update_system_state(s, {act("taxi", "inform", "car", "x")}, m.layout, m.world.db));
    CHECK_THROWS(update_user_state(u, {act("restaurant", "inform", "stars", "4")}, g, m.layout, m.world.db));
  }

  TEST_CASE("inconsistency follows the latest system inform") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}, {"area", kDontCare}}, {"phone"}));
    auto [u, s] = init_states(g, m.layout, m.world.db);
    const std::size_t food = m.layout.informable_index("restaurant", "food");
    const std::size_t area = m.layout.informable_index("restaurant", "area");
    u = update_user_state(u, {act("restaurant", "inform", "food", "chinese")}, g, m.layout, m.world.db);
    CHECK(u.inconsistent[food] == 1);
    u = update_user_state(u, {act("restaurant", "inform", "food", "italian")}, g, m.layout, m.world.db);
    CHECK(u.inconsistent[food] == 0);
    u = update_user_state(u, {act("restaurant", "inform", "area", "south")}, g, m.layout, m.world.db);
    CHECK(u.inconsistent[area] == 0);
  }

  TEST_CASE("answers and bookings clear goal flags") {
    Mini m;
    const UserGoal g =
        fixtures::goal_of(fixtures::subgoal({{"food", "chinese"}}, {"phone", "address"}, {{"people", "2"}, {"time", "12:00"}}));
    auto [u, s] = init_states(g, m.layout, m.world.db);
    const std::size_t phone = m.layout.requestable_index("restaurant", "phone");
    u = update_user_state(u, {act("restaurant", "inform", "phone", "01223 200200")}, g, m.layout, m.world.db);
    CHECK(u.request_pending[phone] == 0);
    CHECK(u.request_pending[m.layout.requestable_index("restaurant", "address")] == 1);
    u = update_user_state(u, {act("restaurant", "book", "none", "r1")}, g, m.layout, m.world.db);
    CHECK(u.booking_pending[0] == 1);  // r1 is italian
    u = update_user_state(u, {act("restaurant", "book", "none", "r2")}, g, m.layout, m.world.db);
    CHECK(u.booking_pending[0] == 0);

    u = record_user_acts(u, {act("restaurant", "inform", "food", "chinese"), act("restaurant", "inform", "people", "2")},
                         m.layout);
    CHECK(u.constraint_pending[m.layout.informable_index("restaurant", "food")] == 0);
    CHECK(u.book_slot_pending[m.layout.book_slot_index("restaurant", "people")] == 0);
    CHECK(u.book_slot_pending[m.layout.book_slot_index("restaurant", "time")] == 1);
  }

  TEST_CASE("vector lengths") {
    Mini m;
    // Belief (2+1)+(2+1), 2 requested flags, 4 buckets, plus 2 booking features per bookable domain.
    CHECK(m.layout.system_dim() == 8 + 13 + 6 + 2 + 4 + 2);
    // Pending constraint, book slot, request, booking, then inconsistency.
    CHECK(m.layout.user_dim() == 13 + 8 + 2 + 2 + 2 + 1 + 2);
    const StateLayout def(load_ontology(read_text_file(MADPL_DEFAULT_CONFIG)));
    CHECK(def.user_dim() == 102);
    CHECK(def.system_dim() == 140);
    CHECK_FALSE(m.layout.describe().empty());
  }

  TEST_CASE("vectors at init and along a dialog") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}, {{"people", "2"}, {"time", "12:00"}}));
    auto [u, s] = init_states(g, m.layout, m.world.db);
    const Eigen::VectorXd vs = vectorize(s, m.layout);
    const Eigen::VectorXd vu = vectorize(u, m.layout);
    CHECK(vs.head(8 + 13).isZero());
    CHECK(vu.head(13 + 8).isZero());
    CHECK(vectorize(s, m.layout) == vs);
    CHECK(vectorize(u, m.layout) == vu);

    const std::vector<std::vector<DialogAct>> user_turns = {
        {act("restaurant", "inform", "food", "italian"), act("restaurant", "inform", "people", "2")},
        {act("restaurant", "inform", "time", "12:00"), act("restaurant", "request", "phone", "?")},
        {act("general", "thank", "none", "none"), act("general", "bye", "none", "none")}};
    const std::vector<std::vector<DialogAct>> sys_turns = {
        {act("restaurant", "recommend", "name", "venue r1")},
        {act("restaurant", "inform", "phone", "01223 100100"), act("restaurant", "book", "none", "r1")},
        {act("general", "bye", "none", "*"), act("general", "welcome", "none", "*")}};
    const std::size_t total = u.pending_count();
    CHECK(total == 5);
    std::size_t cleared = 0;
    for (std::size_t t = 0; t < user_turns.size(); ++t) {
      u = record_user_acts(u, user_turns[t], m.layout);
      s = update_system_state(s, user_turns[t], m.layout, m.world.db);
      s = record_system_acts(s, sys_turns[t], m.layout);
      u = update_user_state(u, sys_turns[t], g, m.layout, m.world.db);
      const Eigen::VectorXd a = vectorize(s, m.layout);
      const Eigen::VectorXd b = vectorize(u, m.layout);
      CHECK(static_cast<std::size_t>(a.size()) == m.layout.system_dim());
      CHECK(static_cast<std::size_t>(b.size()) == m.layout.user_dim());
      CHECK(in_unit_range(a));
      CHECK(in_unit_range(b));
      const std::size_t now = total - u.pending_count();
      CHECK(now >= cleared);
      cleared = now;
    }
    CHECK(u.pending_count() == 0);
    CHECK(s.booked[0] == "r1");
  }
}
