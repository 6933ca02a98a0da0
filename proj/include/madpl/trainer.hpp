#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "madpl/episode.hpp"
#include "madpl/hvn.hpp"
#include "madpl/policy.hpp"

namespace madpl {

enum class Algo { madpl, rl_sys, rl_user, crl, iterdpl };

std::string_view algo_name(Algo a);
// Accepts madpl, rl-sys, rl-user, crl, iterdpl. Throws SchemaError.
Algo parse_algo(std::string_view name);

struct TrainConfig {
  double gamma = 0.99;
  int batch_size = 32;
  double lr_system = 1e-4;
  double lr_user = 5e-5;
  double lr_critic = 3e-5;
  int target_sync = 400;
  int max_turns = 20;
  int episodes = 10000;
  int iterdpl_period = 500;
  std::uint64_t seed = 1;
  RewardConfig rewards;
  HvnShape hvn_shape;
  std::vector<int> critic_hidden = {256, 256};

  static TrainConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Both actors cloned from one corpus (system beta 2.5, user beta 4). Weights
// are initialized from derive_seed(seed, 21); batch order uses seed.
struct PretrainedPair {
  DialogPolicy system;
  DialogPolicy user;
  PretrainResult system_log;
  PretrainResult user_log;
};

PretrainedPair pretrain_pair(const StateLayout& layout, const Corpus& corpus, int epochs, std::uint64_t seed);

struct MetricsRow {
  int iteration = 0;
  int episodes = 0;  // cumulative
  double success = 0.0;
  double inform_f1 = 0.0;
  double match = 0.0;
  double avg_turns = 0.0;
  double mean_r_S = 0.0;  // per-episode returns, averaged over the iteration's episodes
  double mean_r_U = 0.0;
  double mean_r_G = 0.0;
  double L_V = 0.0;
  int episodes_in_iteration = 0;
};

std::string metrics_csv_header();
std::string metrics_to_csv(const std::vector<MetricsRow>& rows);
// Throws MalformedCsv.
std::vector<MetricsRow> metrics_from_csv(const std::string& text);

struct TrainResult {
  DialogPolicy system;
  DialogPolicy user;
  std::optional<HybridValueNet> hvn;  // MADPL only
  std::vector<MetricsRow> log;
};

// Per-iteration hook (metrics row and the current actors).
using TrainHook = std::function<void(const MetricsRow&, const DialogPolicy& system, const DialogPolicy& user)>;

// Each iteration rolls out sampled episodes until the batch holds at least
// batch_size transitions, updates the critic(s) on that batch, then the
// actors with the one-step advantages, and flushes the batch.
TrainResult train(Algo algo, const TrainConfig& config, const World& world, const StateLayout& layout,
                  DialogPolicy system, DialogPolicy user, const TrainHook& hook = {});

TrainResult train_madpl(const TrainConfig& config, const World& world, const StateLayout& layout,
                        DialogPolicy system, DialogPolicy user, const TrainHook& hook = {});
TrainResult train_baseline(Algo algo, const TrainConfig& config, const World& world, const StateLayout& layout,
                           DialogPolicy system, DialogPolicy user, const TrainHook& hook = {});

// Ascent direction mean_b (A_role + A_global)_b * grad log pi(a_b | s_b).
VectorXd compute_policy_update(const DialogPolicy& policy, const MatrixXd& states, const MatrixXd& actions,
                               const VectorXd& role_advantage, const VectorXd& global_advantage);

// Batched view of a set of transitions.
struct TransitionBatch {
  MatrixXd s_user, s_system, next_user, next_system;
  MatrixXd a_user, a_system;  // targets (user rows include the terminal bit)
  MatrixXd rewards;           // 3 x B: r_S, r_U, r_G
  VectorXd done;

  Eigen::Index size() const { return s_user.cols(); }
  ValueBatch value_batch() const;
  // Joint input [s^S; s^U] with the summed reward.
  ScalarBatch centralized_batch() const;
  // One role's state with r_role + r_G.
  ScalarBatch role_batch(Role role) const;
};

TransitionBatch make_batch(const std::vector<const Transition*>& transitions, const StateLayout& layout);

}  // namespace madpl
