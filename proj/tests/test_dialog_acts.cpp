#include <doctest.h>

#include "fixtures.hpp"
#include "madpl/dialog_act.hpp"
#include "madpl/errors.hpp"

using namespace madpl;
using fixtures::act;

namespace {

// Closed-form dimensions from the enumeration rule.
std::size_t expected_user_dim(const Ontology& o) {
  std::size_t n = 2;
  for (const auto& d : o.domains()) n += d.informable.size() + d.book_slots.size() + d.requestable.size();
  return n;
}

std::size_t expected_system_dim(const Ontology& o) {
  std::size_t n = 3;
  for (const auto& d : o.domains()) n += 2 * d.informable.size() + d.requestable.size() + 1 + 3;
  return n;
}

}  // namespace

TEST_SUITE("dialog_acts") {
  TEST_CASE("mini-ontology action spaces have the hand-counted sizes") {
    const Ontology o = load_ontology(fixtures::kMiniConfig);
    CHECK(build_action_space(o, Role::user).dim() == 8);
    CHECK(build_action_space(o, Role::system).dim() == 13);
  }

  TEST_CASE("dimensions follow the closed form on other ontologies") {
    for (const std::string& text : {fixtures::kTwoDomainConfig, read_text_file(MADPL_DEFAULT_CONFIG)}) {
      const Ontology o = load_ontology(text);
      CHECK(build_action_space(o, Role::user).dim() == expected_user_dim(o));
      CHECK(build_action_space(o, Role::system).dim() == expected_system_dim(o));
    }
    const Ontology def = load_ontology(read_text_file(MADPL_DEFAULT_CONFIG));
    CHECK(build_action_space(def, Role::user).dim() == 25);
    CHECK(build_action_space(def, Role::system).dim() == 42);
  }

  TEST_CASE("entries are sorted, unique and stable") {
    const Ontology o = load_ontology(read_text_file(MADPL_DEFAULT_CONFIG));
    for (Role r : {Role::user, Role::system}) {
      const ActionSpace a = build_action_space(o, r);
      const ActionSpace b = build_action_space(o, r);
      CHECK(a.entries() == b.entries());
      for (std::size_t i = 1; i < a.dim(); ++i) CHECK(a.entry(i - 1) < a.entry(i));
      for (std::size_t i = 0; i < a.dim(); ++i) CHECK(a.index_of(a.entry(i)) == i);
    }
  }

  TEST_CASE("intent inventories") {
    const Ontology o = load_ontology(fixtures::kMiniConfig);
    const std::set<std::string> user_intents = {"inform", "request", "thank", "bye"};
    const std::set<std::string> sys_intents = {"inform", "request", "recommend", "book", "offerbook",
                                               "nooffer", "reqmore", "bye", "welcome"};
    for (const auto& e : build_action_space(o, Role::user).entries()) CHECK(user_intents.count(e.intent));
    for (const auto& e : build_action_space(o, Role::system).entries()) CHECK(sys_intents.count(e.intent));
  }

  TEST_CASE("encode") {
    const ActionSpace space = build_action_space(load_ontology(fixtures::kMiniConfig), Role::user);
    CHECK(encode_acts({}, space).isZero());
    const Eigen::VectorXd v = encode_acts({space.act(0), space.act(3)}, space);
    Eigen::VectorXd expected(8);
    expected << 1, 0, 0, 1, 0, 0, 0, 0;
    CHECK(v == expected);
    CHECK_THROWS_AS(encode_acts({act("restaurant", "recommend", "name")}, space), UnknownAct);
    CHECK_THROWS_AS(encode_acts({act("taxi", "inform", "car")}, space), UnknownAct);
  }

  TEST_CASE("decode inverts encode on binary vectors") {
    const ActionSpace space = build_action_space(load_ontology(fixtures::kMiniConfig), Role::system);
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<DialogAct> acts;
      for (std::size_t i = 0; i < space.dim(); ++i)
        if (rng.bernoulli(0.3)) acts.push_back(space.act(i));
      const auto decoded = decode_vector(encode_acts(acts, space), space, DecodeMode::threshold);
      CHECK(decoded == acts);
      CHECK(decode_vector(encode_acts(acts, space), space, DecodeMode::sample, &rng) == acts);
    }
  }

  TEST_CASE("all-zero and all-one probabilities") {
    Rng rng(1);
    const Eigen::VectorXd zeros = Eigen::VectorXd::Zero(8);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(8);
    CHECK(decode_indices(zeros, 8, DecodeMode::threshold).empty());
    CHECK(decode_indices(zeros, 8, DecodeMode::sample, &rng).empty());
    CHECK(decode_indices(ones, 8, DecodeMode::threshold).size() == 8);
    CHECK(decode_indices(ones, 8, DecodeMode::sample, &rng).size() == 8);
    CHECK_THROWS_AS(decode_indices(zeros, 7, DecodeMode::threshold), DimensionMismatch);
  }

  TEST_CASE("threshold keeps strictly greater than one half") {
    Eigen::VectorXd p(3);
    p << 0.5, 0.5000001, 0.2;
    CHECK(decode_indices(p, 3, DecodeMode::threshold) == ActIndices{1});
  }

  TEST_CASE("sampling frequency matches the probability") {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(4);
    p(2) = 0.7;
    Rng rng(2024);
    int hits = 0;
    for (int i = 0; i < 10000; ++i) hits += static_cast<int>(decode_indices(p, 4, DecodeMode::sample, &rng).size());
    CHECK(std::abs(hits / 10000.0 - 0.7) <= 0.02);
  }

  TEST_CASE("user lexicalization reads the goal") {
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}, {"area", kDontCare}}, {"phone"},
                                                           {{"people", "4"}, {"time", "18:00"}}));
    const auto out = lexicalize_user({act("restaurant", "inform", "food"), act("restaurant", "inform", "area"),
                                      act("restaurant", "inform", "people"), act("restaurant", "request", "phone"),
                                      act("general", "thank", "none")},
                                     g);
    CHECK(out[0].value == "italian");
    CHECK(out[1].value == kDontCare);
    CHECK(out[2].value == "4");
    CHECK(out[3].value == kRequestValue);
    CHECK(out[4].value == "none");
    CHECK_THROWS_AS(lexicalize_user({act("hotel", "inform", "stars")}, g), MissingValue);
    const UserGoal no_area = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}));
    CHECK_THROWS_AS(lexicalize_user({act("restaurant", "inform", "area")}, no_area), MissingValue);
  }

  TEST_CASE("system lexicalization reads the entity") {
    const World w = fixtures::mini_world();
    const Entity* e = w.db.find("restaurant", "r1");
    const auto out = lexicalize_system({act("restaurant", "inform", "phone"), act("restaurant", "recommend", "name"),
                                        act("restaurant", "book", "none"), act("restaurant", "nooffer", "none")},
                                       e);
    CHECK(out[0].value == "01223 100100");
    CHECK(out[1].value == "venue r1");
    CHECK(out[2].value == "r1");
    CHECK_THROWS_AS(lexicalize_system({act("restaurant", "inform", "phone")}, nullptr), MissingValue);
    CHECK(lexicalize_dont_care({act("restaurant", "inform", "food")})[0].value == kDontCare);
  }

  TEST_CASE("canonical strings round-trip") {
    const DialogAct a = act("restaurant", "inform", "food", "italian");
    CHECK(a.str() == "restaurant-inform-food=italian");
    CHECK(parse_act(a.str()) == a);
    const DialogAct b = act("hotel", "inform", "area", kDontCare);
    CHECK(parse_act(b.str()) == b);
  }
}
