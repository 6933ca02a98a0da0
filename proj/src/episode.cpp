#include "madpl/episode.hpp"

namespace madpl {

namespace {

double sum_stream(const std::vector<Transition>& turns, double RewardBreakdown::*stream) {
  double s = 0.0;
  for (const auto& t : turns) s += t.reward.*stream;
  return s;
}

}  // namespace

double Trajectory::return_system() const { return sum_stream(turns, &RewardBreakdown::r_S); }
double Trajectory::return_user() const { return sum_stream(turns, &RewardBreakdown::r_U); }
double Trajectory::return_global() const { return sum_stream(turns, &RewardBreakdown::r_G); }

Trajectory run_episode(const World& world, const StateLayout& layout, const UserGoal& goal, UserAgent& user,
                       SystemAgent& system, Rng& rng, const EpisodeOptions& options) {
  const Database& db = world.db;
  auto [ustate, sstate] = init_states(goal, layout, db);
  DialogTracker tracker(goal, layout, db);
  user.reset(goal);
  system.reset();

  Trajectory traj;
  std::vector<DialogAct> last_system;
  for (int turn = 0; turn < options.max_turns; ++turn) {
    Transition tr;
    tr.s_user = vectorize(ustate, layout);
    UserDecision ud = user.act(ustate, tr.s_user, last_system, rng);
    tr.a_user = ud.taken;
    tr.terminal = ud.terminal;
    ustate = record_user_acts(ustate, ud.acts, layout);
    sstate = update_system_state(sstate, ud.acts, layout, db);

    tr.s_system = vectorize(sstate, layout);
    if (!traj.turns.empty()) traj.turns.back().next_system = tr.s_system;
    tr.a_system = system.act(sstate, tr.s_system, ud.acts, rng);
    std::vector<DialogAct> sys_acts = ground_system_acts(tr.a_system, sstate, layout, db);
    sstate = record_system_acts(sstate, sys_acts, layout);
    ustate = update_user_state(ustate, sys_acts, goal, layout, db);
    tr.next_user = vectorize(ustate, layout);
    tr.next_system = tr.s_system;

    tracker.observe_turn(ud.acts, sys_acts);
    const int completed = tracker.take_newly_completed(ustate);
    const bool task_success = tracker.task_success();
    tr.done = ud.terminal || turn + 1 == options.max_turns || (options.stop_on_success && task_success);

    system_reward({sys_acts, tracker.last_user_requests(), tr.done, tr.done && tracker.system_expressed_success(sstate)},
                  options.rewards, &tr.reward);
    user_reward({ud.acts, tracker.domains_with_uninformed_constraints(), tr.done, tr.done && tracker.user_expressed_all()},
                options.rewards, &tr.reward);
    global_reward({completed, tr.done, task_success}, options.rewards, &tr.reward);

    last_system = std::move(sys_acts);
    const bool done = tr.done;
    traj.turns.push_back(std::move(tr));
    if (done) break;
  }
  traj.record = tracker.record();
  traj.success = tracker.task_success();
  return traj;
}

}  // namespace madpl
