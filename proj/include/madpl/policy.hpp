#pragma once

#include <string>
#include <vector>

#include "madpl/corpus.hpp"
#include "madpl/dialog_act.hpp"
#include "madpl/nn.hpp"

namespace madpl {

inline constexpr double kProbClamp = 1e-7;

struct PolicyAction {
  ActIndices acts;
  bool terminal = false;
};

// Actor over a role's action space: a two-hidden-layer rectifier MLP whose
// outputs are per-act logits. The user policy has one extra output, the
// terminal signal T.
class DialogPolicy {
 public:
  DialogPolicy() = default;
  DialogPolicy(Role role, std::size_t state_dim, std::size_t action_dim, Rng& rng,
               std::vector<int> hidden = {128, 128});
  DialogPolicy(Role role, std::size_t action_dim, Mlp net);

  Role role() const { return role_; }
  std::size_t state_dim() const { return static_cast<std::size_t>(net_.input_dim()); }
  std::size_t action_dim() const { return action_dim_; }
  std::size_t output_dim() const { return static_cast<std::size_t>(net_.output_dim()); }

  Mlp& net() { return net_; }
  const Mlp& net() const { return net_; }

  // Clamped sigmoid probabilities for each output (acts, then T for users).
  VectorXd probs(const VectorXd& state) const;

  // sample: independent Bernoulli per act and for T; greedy: p > 0.5.
  PolicyAction act(const VectorXd& state, DecodeMode mode, Rng* rng = nullptr) const;

 private:
  Role role_ = Role::system;
  std::size_t action_dim_ = 0;
  Mlp net_;
};

VectorXd target_vector(const PolicyAction& a, std::size_t action_dim, Role role);

struct LossAndGrad {
  double value = 0.0;
  VectorXd grad;
};

// beta-weighted logistic loss
//   L = -1/(B*D) sum [beta * y log p + (1 - y) log(1 - p)]
// over a batch of states (columns of X) and multi-hot targets (columns of Y).
LossAndGrad bc_loss_and_grad(const DialogPolicy& policy, const MatrixXd& states, const MatrixXd& targets,
                             double beta);

// log pi(a|s) = sum_i a_i log p_i + (1 - a_i) log(1 - p_i) and its gradient.
LossAndGrad logprob_grad(const DialogPolicy& policy, const VectorXd& state, const VectorXd& action);

// Ascent direction of the policy-gradient objective:
//   mean_b weight_b * grad log pi(a_b | s_b)
// Weights are held constant (no gradient flows into them). Returns the
// weighted mean log-likelihood as the value.
LossAndGrad policy_gradient(const DialogPolicy& policy, const MatrixXd& states, const MatrixXd& actions,
                            const VectorXd& weights);

struct PretrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double lr = 1e-3;
  double beta = 2.5;
  std::uint64_t seed = 0;
  double heldout_fraction = 0.1;
};

struct PretrainResult {
  std::vector<double> heldout_f1;  // per epoch
  std::vector<double> train_loss;  // per epoch, mean over batches
};

// Micro-F1 over act dimensions at threshold 0.5 (terminal output excluded).
double micro_f1(const DialogPolicy& policy, const std::vector<const CorpusRecord*>& records);

// Mini-batch RMSprop on bc_loss with a 90/10 split by dialog id. Throws
// EmptyCorpus when the role has fewer records than one batch.
PretrainResult pretrain(DialogPolicy& policy, const Corpus& corpus, const PretrainConfig& config);

}  // namespace madpl
