#pragma once

#include <array>
#include <string>
#include <vector>

#include "madpl/nn.hpp"

namespace madpl {

enum Branch : int { kSystemBranch = 0, kUserBranch = 1, kGlobalBranch = 2 };

struct HvnShape {
  std::vector<int> encoder_hidden = {256, 256};
  int encoding_dim = 64;
  std::vector<int> head_hidden = {64, 64};
};

struct BranchValues {
  double system = 0.0;
  double user = 0.0;
  double global = 0.0;
};

// Critic with role encoders h^S = tanh(f^S(s^S)), h^U = tanh(f^U(s^U)) and
// three heads: V^S(h^S), V^U(h^U), V^G([h^S; h^U]).
class HybridValueNet {
 public:
  HybridValueNet() = default;
  HybridValueNet(std::size_t system_dim, std::size_t user_dim, Rng& rng, const HvnShape& shape = {});
  HybridValueNet(Mlp encoder_s, Mlp encoder_u, Mlp head_s, Mlp head_u, Mlp head_g);

  std::size_t system_dim() const { return static_cast<std::size_t>(encoder_s_.input_dim()); }
  std::size_t user_dim() const { return static_cast<std::size_t>(encoder_u_.input_dim()); }

  // Rows: V^S, V^U, V^G; one column per sample. Throws DimensionMismatch.
  MatrixXd values(const MatrixXd& s_system, const MatrixXd& s_user) const;
  BranchValues forward(const VectorXd& s_system, const VectorXd& s_user) const;

  // Parameters of all five nets concatenated in the order
  // encoder_S, encoder_U, head_S, head_U, head_G.
  VectorXd flat_params() const;
  void set_flat_params(const VectorXd& p);
  Eigen::Index param_count() const;

  // Adds d(sum_b sum_k value_grad(k,b) * V_k(b))/dtheta into grad (flat
  // layout) and returns it.
  VectorXd backward_values(const MatrixXd& s_system, const MatrixXd& s_user, const MatrixXd& value_grad) const;

  bool all_finite() const;

  const std::array<const Mlp*, 5> parts() const {
    return {&encoder_s_, &encoder_u_, &head_s_, &head_u_, &head_g_};
  }
  std::array<Mlp*, 5> parts() { return {&encoder_s_, &encoder_u_, &head_s_, &head_u_, &head_g_}; }

 private:
  Mlp encoder_s_, encoder_u_, head_s_, head_u_, head_g_;
};

// Frozen copy theta^- of the critic, refreshed every `interval` updates.
template <class Net>
struct TargetNet {
  Net net;
  int interval = 400;
};

struct ValueBatch {
  MatrixXd s_system, s_user;            // columns are samples
  MatrixXd next_system, next_user;
  MatrixXd rewards;                     // 3 x B: r^S, r^U, r^G
  VectorXd done;                        // 1 when the transition ends the session

  Eigen::Index size() const { return s_system.cols(); }
};

struct HvnLoss {
  double total = 0.0;
  std::array<double, 3> branch{};  // L^S, L^U, L^G
  VectorXd grad;                   // flat, w.r.t. the live network only
};

// Per branch: y = r + gamma * V_target(s') (gamma term dropped when done);
// L = mean_b sum_k (y_k - V_k(s))^2.
HvnLoss hvn_loss_and_grad(const HybridValueNet& hvn, const HybridValueNet& target, const ValueBatch& batch,
                          double gamma);

void sync_target(const HybridValueNet& hvn, HybridValueNet& target);

// A = r + gamma * V(s') - V(s) per branch with the live network; 3 x B.
MatrixXd advantages(const HybridValueNet& hvn, const ValueBatch& batch, double gamma);

// Single scalar value head over one input (the CRL centralized critic takes
// [s^S; s^U], the single-agent RL critic its own role state).
class ScalarCritic {
 public:
  ScalarCritic() = default;
  ScalarCritic(std::size_t input_dim, Rng& rng, std::vector<int> hidden = {256, 256});
  explicit ScalarCritic(Mlp net) : net_(std::move(net)) {}

  std::size_t input_dim() const { return static_cast<std::size_t>(net_.input_dim()); }
  std::size_t head_count() const { return 1; }
  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

  VectorXd values(const MatrixXd& inputs) const;

 private:
  Mlp net_;
};

struct ScalarBatch {
  MatrixXd inputs, next_inputs;
  VectorXd rewards;
  VectorXd done;
};

struct ScalarLoss {
  double total = 0.0;
  VectorXd grad;
};

ScalarLoss scalar_loss_and_grad(const ScalarCritic& critic, const ScalarCritic& target, const ScalarBatch& batch,
                                double gamma);
VectorXd scalar_advantages(const ScalarCritic& critic, const ScalarBatch& batch, double gamma);

// Checkpoint: one neural checkpoint per branch net plus a manifest.
void save_hvn(const std::string& dir, const HybridValueNet& hvn);
HybridValueNet load_hvn(const std::string& dir);

}  // namespace madpl
