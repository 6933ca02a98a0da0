#include <doctest.h>

#include "fixtures.hpp"
#include "madpl/episode.hpp"
#include "madpl/errors.hpp"
#include "madpl/reward.hpp"
#include "scripted.hpp"

using namespace madpl;
using fixtures::act;
using fixtures::ScriptedSystem;
using fixtures::ScriptedUser;

namespace {

struct Mini {
  World world = fixtures::mini_world();
  StateLayout layout{world.ontology()};
};

Trajectory play(const Mini& m, const UserGoal& g, std::vector<ScriptedUser::Turn> user_turns,
                std::vector<std::vector<DialogAct>> sys_turns, bool stop_on_success = true, int max_turns = 20) {
  ScriptedUser user(m.layout, std::move(user_turns));
  ScriptedSystem system(m.layout, std::move(sys_turns));
  Rng rng(1);
  EpisodeOptions opts;
  opts.stop_on_success = stop_on_success;
  opts.max_turns = max_turns;
  return run_episode(m.world, m.layout, g, user, system, rng, opts);
}

// Sum of the fired component values of one stream, recomputed independently.
double fired_sum(const RewardBreakdown& r) {
  double s = 0.0;
  for (const auto& f : r.fired) s += f.value;
  return s;
}

const DialogAct kInformFood = act("restaurant", "inform", "food", "italian");
const DialogAct kInformArea = act("restaurant", "inform", "area", "north");
const DialogAct kRequestPhone = act("restaurant", "request", "phone", "?");
const DialogAct kThank = act("general", "thank", "none", "none");
const DialogAct kBye = act("general", "bye", "none", "none");

}  // namespace

TEST_SUITE("rewards") {
  TEST_CASE("default constants") {
    const RewardConfig c;
    CHECK(c.empty_act_penalty == -5.0);
    CHECK(c.late_answer_penalty == -1.0);
    CHECK(c.early_inform_penalty == -1.0);
    CHECK(c.efficiency_penalty == -1.0);
    CHECK(c.subgoal_reward == 5.0);
    CHECK(c.success_reward == 20.0);
    CHECK(c.failure_penalty == -5.0);
  }

  TEST_CASE("config overrides and sign checks") {
    const RewardConfig c = RewardConfig::from_json({{"subgoal_reward", 3.0}});
    CHECK(c.subgoal_reward == 3.0);
    CHECK(c.success_reward == 20.0);
    CHECK_THROWS_AS(RewardConfig::from_json({{"empty_act_penalty", 1.0}}), SchemaError);
    CHECK_THROWS_AS(RewardConfig::from_json({{"success_reward", -1.0}}), SchemaError);
    CHECK_THROWS_AS(RewardConfig::from_json({{"success_reward", "big"}}), SchemaError);
  }

  TEST_CASE("system reward triggers") {
    const RewardConfig c;
    CHECK(system_reward({{}, {}, false, false}, c) == -5.0);
    CHECK(system_reward({{act("restaurant", "inform", "address", "x")}, {{"restaurant", "phone"}}, false, false}, c) ==
          -1.0);
    // Two unanswered slots still cost a single penalty.
    CHECK(system_reward({{act("general", "reqmore", "none")}, {{"restaurant", "phone"}, {"restaurant", "address"}}, false,
                         false},
                        c) == -1.0);
    CHECK(system_reward({{act("restaurant", "inform", "phone", "1")}, {{"restaurant", "phone"}}, false, false}, c) == 0.0);
    CHECK(system_reward({{act("general", "bye", "none")}, {}, true, true}, c) == 20.0);
    CHECK(system_reward({{act("general", "bye", "none")}, {}, true, false}, c) == -5.0);
  }

  TEST_CASE("user reward triggers") {
    const RewardConfig c;
    CHECK(user_reward({{}, {}, false, false}, c) == -5.0);
    CHECK(user_reward({{kRequestPhone}, {"restaurant"}, false, false}, c) == -1.0);
    CHECK(user_reward({{kRequestPhone}, {"hotel"}, false, false}, c) == 0.0);
    CHECK(user_reward({{kBye}, {}, true, false}, c) == -5.0);
    CHECK(user_reward({{kBye}, {}, true, true}, c) == 20.0);
  }

  TEST_CASE("global reward triggers") {
    const RewardConfig c;
    CHECK(global_reward({0, false, false}, c) == -1.0);
    CHECK(global_reward({1, false, false}, c) == 4.0);
    CHECK(global_reward({1, true, true}, c) == 24.0);
    CHECK(global_reward({0, true, false}, c) == -6.0);
  }

  TEST_CASE("successful dialog fires the success rewards on its final turn") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}, {"area", "north"}}, {"phone"}));
    const Trajectory t = play(m, g, {{{kInformFood, kInformArea}}, {{kRequestPhone}}},
                              {{act("restaurant", "recommend", "name")}, {act("restaurant", "inform", "phone")}});
    REQUIRE(t.turns.size() == 2);
    const RewardBreakdown& first = t.turns[0].reward;
    CHECK(first.r_S == 0.0);
    CHECK(first.r_U == 0.0);
    CHECK(first.r_G == -1.0);
    const RewardBreakdown& last = t.turns[1].reward;
    CHECK(t.turns[1].done);
    CHECK(last.r_S == 20.0);
    CHECK(last.has(RewardTrigger::system_success));
    CHECK(last.r_U == 20.0);
    CHECK(last.has(RewardTrigger::user_goal_reward));
    CHECK(last.r_G == 24.0);
    CHECK(last.count(RewardTrigger::subgoal) == 1);
    CHECK(last.has(RewardTrigger::global_success));
    CHECK(t.success);
  }

  TEST_CASE("penalty triggers on a scripted dialog") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}));
    const Trajectory t = play(m, g, {{{kRequestPhone}}, {{}}, {{kThank, kBye}, true}},
                              {{act("restaurant", "inform", "address")}, {}, {act("general", "bye", "none")}});
    REQUIRE(t.turns.size() == 3);
    const RewardBreakdown& r0 = t.turns[0].reward;
    CHECK(r0.has(RewardTrigger::late_answer));
    CHECK(r0.r_S == -1.0);
    CHECK(r0.has(RewardTrigger::early_inform));
    CHECK(r0.r_U == -1.0);
    CHECK(r0.r_G == -1.0);
    const RewardBreakdown& r1 = t.turns[1].reward;
    CHECK(r1.r_S == -5.0);
    CHECK(r1.has(RewardTrigger::system_empty_act));
    CHECK(r1.r_U == -5.0);
    CHECK(r1.has(RewardTrigger::user_empty_act));
    const RewardBreakdown& r2 = t.turns[2].reward;
    CHECK(t.turns[2].done);
    CHECK(r2.has(RewardTrigger::system_failure));  // phone never informed
    CHECK(r2.r_S == -5.0);
    CHECK(r2.has(RewardTrigger::user_goal_failure));  // food never informed
    CHECK(r2.r_U == -5.0);
    CHECK(r2.r_G == -6.0);
    CHECK(r2.has(RewardTrigger::global_failure));
  }

  TEST_CASE("system-side success can coexist with global failure") {
    Mini m;
    // The user never asks for the address it needs.
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone", "address"}));
    const Trajectory t = play(m, g, {{{kInformFood, kRequestPhone}}, {{kThank, kBye}, true}},
                              {{act("restaurant", "inform", "phone")}, {act("general", "bye", "none")}});
    REQUIRE(t.turns.size() == 2);
    const RewardBreakdown& last = t.turns[1].reward;
    CHECK(last.r_S == 20.0);
    CHECK(last.has(RewardTrigger::system_success));
    CHECK(last.has(RewardTrigger::global_failure));
    CHECK(last.r_G == -6.0);
    CHECK(last.r_U == -5.0);
    CHECK_FALSE(t.success);
  }

  TEST_CASE("booking mismatch fails the system side") {
    Mini m;
    const UserGoal g = fixtures::goal_of(
        fixtures::subgoal({{"food", "chinese"}, {"area", "south"}}, {"phone"}, {{"people", "2"}, {"time", "12:00"}}));
    // The system books before the area narrows the belief to r3.
    const Trajectory t =
        play(m, g,
             {{{act("restaurant", "inform", "food", "chinese"), act("restaurant", "inform", "people", "2")}},
              {{act("restaurant", "inform", "time", "12:00"), kRequestPhone}},
              {{act("restaurant", "inform", "area", "south")}},
              {{kThank, kBye}, true}},
             {{act("restaurant", "recommend", "name")},
              {act("restaurant", "book", "none"), act("restaurant", "inform", "phone")},
              {act("restaurant", "recommend", "name")},
              {act("general", "bye", "none")}});
    REQUIRE(t.turns.size() == 4);
    CHECK(t.record.booked.at("restaurant") == "r2");
    CHECK(t.turns.back().reward.has(RewardTrigger::system_failure));
    CHECK(t.turns.back().reward.has(RewardTrigger::global_failure));
  }

  TEST_CASE("subgoal reward fires once per domain") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}));
    const Trajectory t = play(m, g, {{{kInformFood, kRequestPhone}}, {{kRequestPhone}}, {{kThank, kBye}, true}},
                              {{act("restaurant", "inform", "phone")},
                               {act("restaurant", "inform", "phone")},
                               {act("general", "bye", "none")}},
                              /*stop_on_success=*/false);
    REQUIRE(t.turns.size() == 3);
    int subgoals = 0;
    for (const auto& tr : t.turns) subgoals += tr.reward.count(RewardTrigger::subgoal);
    CHECK(subgoals == 1);
    CHECK(t.turns[0].reward.count(RewardTrigger::subgoal) == 1);
  }

  TEST_CASE("success rewards only fire on the final turn") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "italian"}}, {"phone"}));
    const Trajectory t = play(m, g, {{{kInformFood}}, {{kRequestPhone}}, {{kThank, kBye}, true}},
                              {{act("restaurant", "recommend", "name")},
                               {act("restaurant", "inform", "phone")},
                               {act("general", "bye", "none")}},
                              /*stop_on_success=*/false);
    for (std::size_t i = 0; i < t.turns.size(); ++i) {
      const auto& r = t.turns[i].reward;
      const bool terminal_fired = r.has(RewardTrigger::system_success) || r.has(RewardTrigger::system_failure) ||
                                  r.has(RewardTrigger::user_goal_reward) ||
                                  r.has(RewardTrigger::user_goal_failure) ||
                                  r.has(RewardTrigger::global_success) || r.has(RewardTrigger::global_failure);
      CHECK(terminal_fired == t.turns[i].done);
    }
  }

  TEST_CASE("each stream equals the sum of its fired components") {
    Mini m;
    const UserGoal g = fixtures::goal_of(fixtures::subgoal({{"food", "chinese"}}, {"phone", "address"}));
    const Trajectory t = play(m, g, {{{kRequestPhone}}, {{}}, {{act("restaurant", "inform", "food", "chinese")}}},
                              {{}, {act("restaurant", "inform", "phone")}, {act("restaurant", "inform", "address")}},
                              false, 3);
    for (const auto& tr : t.turns) {
      CHECK(tr.reward.total() == fired_sum(tr.reward));
      double s = 0.0, u = 0.0, gl = 0.0;
      for (const auto& f : tr.reward.fired) {
        switch (f.trigger) {
          case RewardTrigger::system_empty_act:
          case RewardTrigger::late_answer:
          case RewardTrigger::system_success:
          case RewardTrigger::system_failure: s += f.value; break;
          case RewardTrigger::user_empty_act:
          case RewardTrigger::early_inform:
          case RewardTrigger::user_goal_reward:
          case RewardTrigger::user_goal_failure: u += f.value; break;
          default: gl += f.value;
        }
      }
      CHECK(tr.reward.r_S == s);
      CHECK(tr.reward.r_U == u);
      CHECK(tr.reward.r_G == gl);
    }
  }
}
