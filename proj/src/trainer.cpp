#include "madpl/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "madpl/errors.hpp"

namespace madpl {

std::string_view algo_name(Algo a) {
  switch (a) {
    case Algo::madpl: return "madpl";
    case Algo::rl_sys: return "rl-sys";
    case Algo::rl_user: return "rl-user";
    case Algo::crl: return "crl";
    case Algo::iterdpl: return "iterdpl";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  for (Algo a : {Algo::madpl, Algo::rl_sys, Algo::rl_user, Algo::crl, Algo::iterdpl}) {
    if (algo_name(a) == name) return a;
  }
  throw SchemaError("algo: unknown algorithm '" + std::string(name) + "'");
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  TrainConfig c;
  auto num = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    if (!j.at(key).is_number()) throw SchemaError(std::string("train.") + key + ": expected number");
    field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  num("gamma", c.gamma);
  num("batch_size", c.batch_size);
  num("lr_system", c.lr_system);
  num("lr_user", c.lr_user);
  num("lr_critic", c.lr_critic);
  num("target_sync", c.target_sync);
  num("max_turns", c.max_turns);
  num("episodes", c.episodes);
  num("iterdpl_period", c.iterdpl_period);
  num("seed", c.seed);
  if (j.contains("rewards")) c.rewards = RewardConfig::from_json(j.at("rewards"));
  if (!(c.gamma >= 0.0 && c.gamma < 1.0)) throw SchemaError("train.gamma: must be in [0, 1)");
  if (c.batch_size < 1) throw SchemaError("train.batch_size: must be positive");
  if (c.lr_system < 0 || c.lr_user < 0 || c.lr_critic < 0) throw SchemaError("train: learning rates must be >= 0");
  if (c.target_sync < 1) throw SchemaError("train.target_sync: must be positive");
  if (c.max_turns < 1) throw SchemaError("train.max_turns: must be >= 1");
  if (c.episodes < 1) throw SchemaError("train.episodes: must be positive");
  if (c.iterdpl_period < 1) throw SchemaError("train.iterdpl_period: must be positive");
  return c;
}

nlohmann::json TrainConfig::to_json() const {
  return {{"gamma", gamma},
          {"batch_size", batch_size},
          {"lr_system", lr_system},
          {"lr_user", lr_user},
          {"lr_critic", lr_critic},
          {"target_sync", target_sync},
          {"max_turns", max_turns},
          {"episodes", episodes},
          {"iterdpl_period", iterdpl_period},
          {"seed", seed},
          {"rewards", rewards.to_json()}};
}

std::string metrics_csv_header() {
  return "iteration,episodes,success,inform_f1,match,avg_turns,mean_r_S,mean_r_U,mean_r_G,L_V";
}

std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
  std::string out = metrics_csv_header() + "\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.iteration, r.episodes,
                  r.success, r.inform_f1, r.match, r.avg_turns, r.mean_r_S, r.mean_r_U, r.mean_r_G, r.L_V);
    out += buf;
  }
  return out;
}

std::vector<MetricsRow> metrics_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != metrics_csv_header())
    throw MalformedCsv("metrics csv: header must be '" + metrics_csv_header() + "'");
  std::vector<MetricsRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw MalformedCsv("metrics csv line " + std::to_string(lineno) + ": expected 10 fields");
    try {
      std::size_t pos = 0;
      auto d = [&](const std::string& s) {
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      };
      auto i = [&](const std::string& s) {
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      };
      MetricsRow r;
      r.iteration = i(f[0]);
      r.episodes = i(f[1]);
      r.success = d(f[2]);
      r.inform_f1 = d(f[3]);
      r.match = d(f[4]);
      r.avg_turns = d(f[5]);
      r.mean_r_S = d(f[6]);
      r.mean_r_U = d(f[7]);
      r.mean_r_G = d(f[8]);
      r.L_V = d(f[9]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw MalformedCsv("metrics csv line " + std::to_string(lineno) + ": non-numeric field");
    }
  }
  return rows;
}

VectorXd compute_policy_update(const DialogPolicy& policy, const MatrixXd& states, const MatrixXd& actions,
                               const VectorXd& role_advantage, const VectorXd& global_advantage) {
  return policy_gradient(policy, states, actions, role_advantage + global_advantage).grad;
}

ValueBatch TransitionBatch::value_batch() const {
  return {s_system, s_user, next_system, next_user, rewards, done};
}

ScalarBatch TransitionBatch::centralized_batch() const {
  ScalarBatch b;
  b.inputs.resize(s_system.rows() + s_user.rows(), size());
  b.inputs << s_system, s_user;
  b.next_inputs.resize(b.inputs.rows(), size());
  b.next_inputs << next_system, next_user;
  b.rewards = rewards.colwise().sum().transpose();
  b.done = done;
  return b;
}

ScalarBatch TransitionBatch::role_batch(Role role) const {
  ScalarBatch b;
  const bool sys = role == Role::system;
  b.inputs = sys ? s_system : s_user;
  b.next_inputs = sys ? next_system : next_user;
  b.rewards = (rewards.row(sys ? kSystemBranch : kUserBranch) + rewards.row(kGlobalBranch)).transpose();
  b.done = done;
  return b;
}

TransitionBatch make_batch(const std::vector<const Transition*>& ts, const StateLayout& layout) {
  const auto n = static_cast<Eigen::Index>(ts.size());
  const auto ud = static_cast<Eigen::Index>(layout.user_dim());
  const auto sd = static_cast<Eigen::Index>(layout.system_dim());
  const std::size_t ua = layout.user_space().dim();
  const std::size_t sa = layout.system_space().dim();
  TransitionBatch b;
  b.s_user.resize(ud, n);
  b.next_user.resize(ud, n);
  b.s_system.resize(sd, n);
  b.next_system.resize(sd, n);
  b.a_user.resize(static_cast<Eigen::Index>(ua + 1), n);
  b.a_system.resize(static_cast<Eigen::Index>(sa), n);
  b.rewards.resize(3, n);
  b.done.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Transition& t = *ts[static_cast<std::size_t>(i)];
    b.s_user.col(i) = t.s_user;
    b.next_user.col(i) = t.next_user;
    b.s_system.col(i) = t.s_system;
    b.next_system.col(i) = t.next_system;
    b.a_user.col(i) = target_vector({t.a_user, t.terminal}, ua, Role::user);
    b.a_system.col(i) = target_vector({t.a_system, false}, sa, Role::system);
    b.rewards(kSystemBranch, i) = t.reward.r_S;
    b.rewards(kUserBranch, i) = t.reward.r_U;
    b.rewards(kGlobalBranch, i) = t.reward.r_G;
    b.done[i] = t.done ? 1.0 : 0.0;
  }
  return b;
}

namespace {

constexpr std::uint64_t kGoalStream = 11;
constexpr std::uint64_t kRolloutStream = 12;
constexpr std::uint64_t kCriticStream = 13;

// Scalar critic with its frozen target and optimizer.
struct ScalarLearner {
  ScalarCritic critic;
  ScalarCritic target;
  Rmsprop opt;
  int updates = 0;

  ScalarLearner(std::size_t input_dim, Rng& rng, const TrainConfig& cfg)
      : critic(input_dim, rng, cfg.critic_hidden),
        target(critic),
        opt(critic.net().param_count(), cfg.lr_critic) {}

  // Returns the loss; advantages come from the updated critic.
  double update(const ScalarBatch& b, const TrainConfig& cfg) {
    const ScalarLoss loss = scalar_loss_and_grad(critic, target, b, cfg.gamma);
    opt.step(critic.net().params(), loss.grad);
    if (++updates % cfg.target_sync == 0) target = critic;
    if (!critic.net().all_finite()) throw DivergenceError("critic parameters became non-finite");
    return loss.total;
  }
};

void actor_step(DialogPolicy& policy, Rmsprop& opt, const MatrixXd& states, const MatrixXd& actions,
                const VectorXd& role_adv, const VectorXd& global_adv, const char* who) {
  const VectorXd ascent = compute_policy_update(policy, states, actions, role_adv, global_adv);
  const VectorXd descent = -ascent;
  opt.step(policy.net().params(), descent);
  if (!policy.net().all_finite()) throw DivergenceError(std::string(who) + " policy parameters became non-finite");
}

}  // namespace

PretrainedPair pretrain_pair(const StateLayout& layout, const Corpus& corpus, int epochs, std::uint64_t seed) {
  Rng init(derive_seed(seed, 21));
  PretrainedPair out{DialogPolicy(Role::system, layout.system_dim(), layout.system_space().dim(), init),
                     DialogPolicy(Role::user, layout.user_dim(), layout.user_space().dim(), init),
                     {},
                     {}};
  PretrainConfig pc;
  pc.epochs = epochs;
  pc.seed = seed;
  pc.beta = 2.5;
  out.system_log = pretrain(out.system, corpus, pc);
  pc.beta = 4.0;
  out.user_log = pretrain(out.user, corpus, pc);
  return out;
}

TrainResult train(Algo algo, const TrainConfig& cfg, const World& world, const StateLayout& layout,
                  DialogPolicy system, DialogPolicy user, const TrainHook& hook) {
  if (system.state_dim() != layout.system_dim() || system.action_dim() != layout.system_space().dim() ||
      user.state_dim() != layout.user_dim() || user.action_dim() != layout.user_space().dim())
    throw DimensionMismatch("train: policies do not match the world's state and action spaces");

  Rng critic_rng(derive_seed(cfg.seed, kCriticStream));
  Rng rollout_rng(derive_seed(cfg.seed, kRolloutStream));
  const std::uint64_t goal_seed = derive_seed(cfg.seed, kGoalStream);

  std::optional<HybridValueNet> hvn;
  std::optional<HybridValueNet> hvn_target;
  std::optional<Rmsprop> hvn_opt;
  std::optional<ScalarLearner> sys_critic, user_critic, joint_critic;
  switch (algo) {
    case Algo::madpl:
      hvn.emplace(layout.system_dim(), layout.user_dim(), critic_rng, cfg.hvn_shape);
      hvn_target = hvn;
      hvn_opt.emplace(hvn->param_count(), cfg.lr_critic);
      break;
    case Algo::rl_sys:
      sys_critic.emplace(layout.system_dim(), critic_rng, cfg);
      break;
    case Algo::rl_user:
      user_critic.emplace(layout.user_dim(), critic_rng, cfg);
      break;
    case Algo::crl:
      joint_critic.emplace(layout.system_dim() + layout.user_dim(), critic_rng, cfg);
      break;
    case Algo::iterdpl:
      sys_critic.emplace(layout.system_dim(), critic_rng, cfg);
      user_critic.emplace(layout.user_dim(), critic_rng, cfg);
      break;
  }

  Rmsprop sys_opt(system.net().param_count(), cfg.lr_system);
  Rmsprop user_opt(user.net().param_count(), cfg.lr_user);
  PolicySystem sys_agent(system, DecodeMode::sample);
  PolicyUser user_agent(user, layout, DecodeMode::sample);
  EpisodeOptions opts;
  opts.max_turns = cfg.max_turns;
  opts.rewards = cfg.rewards;

  TrainResult result;
  int episodes = 0;
  for (int iteration = 1; episodes < cfg.episodes; ++iteration) {
    std::vector<Trajectory> trajs;
    std::size_t n_trans = 0;
    while (n_trans < static_cast<std::size_t>(cfg.batch_size) && episodes < cfg.episodes) {
      const UserGoal goal = sample_goal(world.ontology(), world.db, derive_seed(goal_seed, episodes),
                                        world.config.domain_count_weights);
      trajs.push_back(run_episode(world, layout, goal, user_agent, sys_agent, rollout_rng, opts));
      n_trans += trajs.back().turns.size();
      ++episodes;
    }
    std::vector<const Transition*> ts;
    ts.reserve(n_trans);
    for (const auto& t : trajs) {
      for (const auto& tr : t.turns) ts.push_back(&tr);
    }
    const TransitionBatch batch = make_batch(ts, layout);

    MetricsRow row;
    row.iteration = iteration;
    row.episodes = episodes;
    row.episodes_in_iteration = static_cast<int>(trajs.size());

    const auto B = batch.size();
    const VectorXd zero = VectorXd::Zero(B);
    switch (algo) {
      case Algo::madpl: {
        const ValueBatch vb = batch.value_batch();
        const HvnLoss loss = hvn_loss_and_grad(*hvn, *hvn_target, vb, cfg.gamma);
        VectorXd p = hvn->flat_params();
        hvn_opt->step(p, loss.grad);
        hvn->set_flat_params(p);
        if (!hvn->all_finite()) throw DivergenceError("hybrid value network parameters became non-finite");
        if (iteration % cfg.target_sync == 0) sync_target(*hvn, *hvn_target);
        row.L_V = loss.total;
        const MatrixXd A = advantages(*hvn, vb, cfg.gamma);
        const VectorXd a_sys = A.row(kSystemBranch).transpose();
        const VectorXd a_user = A.row(kUserBranch).transpose();
        const VectorXd a_glob = A.row(kGlobalBranch).transpose();
        actor_step(system, sys_opt, batch.s_system, batch.a_system, a_sys, a_glob, "system");
        actor_step(user, user_opt, batch.s_user, batch.a_user, a_user, a_glob, "user");
        break;
      }
      case Algo::rl_sys: {
        const ScalarBatch sb = batch.role_batch(Role::system);
        row.L_V = sys_critic->update(sb, cfg);
        actor_step(system, sys_opt, batch.s_system, batch.a_system, scalar_advantages(sys_critic->critic, sb, cfg.gamma),
                   zero, "system");
        break;
      }
      case Algo::rl_user: {
        const ScalarBatch sb = batch.role_batch(Role::user);
        row.L_V = user_critic->update(sb, cfg);
        actor_step(user, user_opt, batch.s_user, batch.a_user, scalar_advantages(user_critic->critic, sb, cfg.gamma),
                   zero, "user");
        break;
      }
      case Algo::crl: {
        const ScalarBatch sb = batch.centralized_batch();
        row.L_V = joint_critic->update(sb, cfg);
        const VectorXd adv = scalar_advantages(joint_critic->critic, sb, cfg.gamma);
        actor_step(system, sys_opt, batch.s_system, batch.a_system, adv, zero, "system");
        actor_step(user, user_opt, batch.s_user, batch.a_user, adv, zero, "user");
        break;
      }
      case Algo::iterdpl: {
        const bool system_phase = ((iteration - 1) / cfg.iterdpl_period) % 2 == 0;
        const Role role = system_phase ? Role::system : Role::user;
        ScalarLearner& learner = system_phase ? *sys_critic : *user_critic;
        const ScalarBatch sb = batch.role_batch(role);
        row.L_V = learner.update(sb, cfg);
        const VectorXd adv = scalar_advantages(learner.critic, sb, cfg.gamma);
        if (system_phase) {
          actor_step(system, sys_opt, batch.s_system, batch.a_system, adv, zero, "system");
        } else {
          actor_step(user, user_opt, batch.s_user, batch.a_user, adv, zero, "user");
        }
        break;
      }
    }

    const double n = static_cast<double>(trajs.size());
    for (const auto& t : trajs) {
      row.success += t.success ? 1.0 : 0.0;
      row.inform_f1 += inform_f1(t.record, world.ontology()).f1;
      row.match += match_rate(t.record, t.record.goal, world.db);
      row.avg_turns += static_cast<double>(t.turns.size());
      row.mean_r_S += t.return_system();
      row.mean_r_U += t.return_user();
      row.mean_r_G += t.return_global();
    }
    for (double* f : {&row.success, &row.inform_f1, &row.match, &row.avg_turns, &row.mean_r_S, &row.mean_r_U,
                      &row.mean_r_G})
      *f /= n;
    result.log.push_back(row);
    if (hook) hook(row, system, user);
  }
  result.system = std::move(system);
  result.user = std::move(user);
  result.hvn = std::move(hvn);
  return result;
}

TrainResult train_madpl(const TrainConfig& config, const World& world, const StateLayout& layout,
                        DialogPolicy system, DialogPolicy user, const TrainHook& hook) {
  return train(Algo::madpl, config, world, layout, std::move(system), std::move(user), hook);
}

TrainResult train_baseline(Algo algo, const TrainConfig& config, const World& world, const StateLayout& layout,
                           DialogPolicy system, DialogPolicy user, const TrainHook& hook) {
  if (algo == Algo::madpl) throw SchemaError("train_baseline: madpl is not a baseline");
  return train(algo, config, world, layout, std::move(system), std::move(user), hook);
}

}  // namespace madpl
