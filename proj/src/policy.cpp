#include "madpl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "madpl/errors.hpp"

namespace madpl {

namespace {

// Clamped sigmoid and a mask of entries inside the clamp (where the gradient
// flows).
void clamped_sigmoid(const MatrixXd& logits, MatrixXd& p, MatrixXd& live) {
  p = (1.0 + (-logits.array()).exp()).inverse().matrix();
  live = ((p.array() > kProbClamp) && (p.array() < 1.0 - kProbClamp)).cast<double>().matrix();
  p = p.cwiseMax(kProbClamp).cwiseMin(1.0 - kProbClamp);
}

}  // namespace

DialogPolicy::DialogPolicy(Role role, std::size_t state_dim, std::size_t action_dim, Rng& rng,
                           std::vector<int> hidden)
    : role_(role), action_dim_(action_dim) {
  std::vector<int> dims{static_cast<int>(state_dim)};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(static_cast<int>(action_dim + (role == Role::user ? 1 : 0)));
  net_ = Mlp(dims, Activation::relu, Activation::identity);
  net_.init_uniform(rng);
}

DialogPolicy::DialogPolicy(Role role, std::size_t action_dim, Mlp net)
    : role_(role), action_dim_(action_dim), net_(std::move(net)) {
  if (output_dim() != action_dim + (role == Role::user ? 1 : 0))
    throw DimensionMismatch("policy net output does not match action space");
}

VectorXd DialogPolicy::probs(const VectorXd& state) const {
  MatrixXd p, live;
  clamped_sigmoid(net_.forward(state).output, p, live);
  return p.col(0);
}

PolicyAction DialogPolicy::act(const VectorXd& state, DecodeMode mode, Rng* rng) const {
  const VectorXd p = probs(state);
  PolicyAction out;
  out.acts = decode_indices(p.head(static_cast<Eigen::Index>(action_dim_)), action_dim_, mode, rng);
  if (role_ == Role::user) {
    const double pt = p[static_cast<Eigen::Index>(action_dim_)];
    out.terminal = mode == DecodeMode::threshold ? pt > 0.5 : rng->bernoulli(pt);
  }
  return out;
}

VectorXd target_vector(const PolicyAction& a, std::size_t action_dim, Role role) {
  VectorXd v = VectorXd::Zero(static_cast<Eigen::Index>(action_dim + (role == Role::user ? 1 : 0)));
  for (auto i : a.acts) v[static_cast<Eigen::Index>(i)] = 1.0;
  if (role == Role::user && a.terminal) v[static_cast<Eigen::Index>(action_dim)] = 1.0;
  return v;
}

LossAndGrad bc_loss_and_grad(const DialogPolicy& policy, const MatrixXd& states, const MatrixXd& targets,
                             double beta) {
  if (states.cols() == 0) throw EmptyCorpus("bc loss: empty batch");
  if (targets.rows() != static_cast<Eigen::Index>(policy.output_dim()) || targets.cols() != states.cols())
    throw DimensionMismatch("bc loss: target shape mismatch");
  const auto cache = policy.net().forward(states);
  MatrixXd p, live;
  clamped_sigmoid(cache.output, p, live);
  const double scale = 1.0 / static_cast<double>(targets.size());
  const auto& y = targets.array();
  LossAndGrad out;
  out.value = -scale * (beta * y * p.array().log() + (1.0 - y) * (1.0 - p.array()).log()).sum();
  // d/dz [beta y log p + (1-y) log(1-p)] = beta y (1-p) - (1-y) p
  const MatrixXd dz = (-scale * (beta * y * (1.0 - p.array()) - (1.0 - y) * p.array()) * live.array()).matrix();
  policy.net().backward(cache, dz, out.grad);
  return out;
}

LossAndGrad logprob_grad(const DialogPolicy& policy, const VectorXd& state, const VectorXd& action) {
  LossAndGrad out = policy_gradient(policy, state, action, VectorXd::Ones(1));
  return out;
}

LossAndGrad policy_gradient(const DialogPolicy& policy, const MatrixXd& states, const MatrixXd& actions,
                            const VectorXd& weights) {
  if (actions.rows() != static_cast<Eigen::Index>(policy.output_dim()) || actions.cols() != states.cols() ||
      weights.size() != states.cols())
    throw DimensionMismatch("policy gradient: shape mismatch");
  const auto cache = policy.net().forward(states);
  MatrixXd p, live;
  clamped_sigmoid(cache.output, p, live);
  const auto& a = actions.array();
  const VectorXd logp = (a * p.array().log() + (1.0 - a) * (1.0 - p.array()).log()).colwise().sum().transpose();
  const double inv_b = 1.0 / static_cast<double>(states.cols());
  LossAndGrad out;
  out.value = inv_b * weights.dot(logp);
  // d log pi / dz_i = a_i - p_i
  MatrixXd dz = ((a - p.array()) * live.array()).matrix();
  dz = dz * (inv_b * weights).asDiagonal();
  policy.net().backward(cache, dz, out.grad);
  return out;
}

double micro_f1(const DialogPolicy& policy, const std::vector<const CorpusRecord*>& records) {
  if (records.empty()) return 0.0;
  MatrixXd states(static_cast<Eigen::Index>(policy.state_dim()), static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) states.col(static_cast<Eigen::Index>(i)) = records[i]->state();
  const MatrixXd logits = policy.net().forward(states).output;
  double tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& gold = records[i]->action;
    for (std::size_t k = 0; k < policy.action_dim(); ++k) {
      const bool pred = logits(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) > 0.0;
      const bool truth = std::binary_search(gold.begin(), gold.end(), k);
      tp += pred && truth;
      fp += pred && !truth;
      fn += !pred && truth;
    }
  }
  if (tp + fp + fn == 0) return 1.0;
  return 2.0 * tp / (2.0 * tp + fp + fn);
}

PretrainResult pretrain(DialogPolicy& policy, const Corpus& corpus, const PretrainConfig& config) {
  const auto records = corpus.for_role(policy.role());
  if (records.empty() || records.size() < static_cast<std::size_t>(config.batch_size))
    throw EmptyCorpus("pretrain: corpus has " + std::to_string(records.size()) + " " +
                      std::string(role_name(policy.role())) + " records, batch size is " +
                      std::to_string(config.batch_size));
  for (const auto* r : records) {
    if (r->state_dim != policy.state_dim() || r->action_dim != policy.action_dim())
      throw DimensionMismatch("pretrain: corpus record does not match policy dimensions");
  }

  Rng rng(config.seed);
  std::set<int> ids;
  for (const auto* r : records) ids.insert(r->dialog_id);
  std::vector<int> dialogs(ids.begin(), ids.end());
  rng.shuffle(dialogs);
  const std::size_t n_held =
      dialogs.size() < 2 ? 0 : std::max<std::size_t>(1, static_cast<std::size_t>(config.heldout_fraction * dialogs.size()));
  const std::set<int> held(dialogs.begin(), dialogs.begin() + static_cast<std::ptrdiff_t>(n_held));

  std::vector<const CorpusRecord*> train, heldout;
  for (const auto* r : records) (held.count(r->dialog_id) ? heldout : train).push_back(r);
  if (heldout.empty()) heldout = train;

  Rmsprop opt(policy.net().param_count(), config.lr);
  const auto sdim = static_cast<Eigen::Index>(policy.state_dim());
  const auto odim = static_cast<Eigen::Index>(policy.output_dim());
  PretrainResult result;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(train);
    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t start = 0; start < train.size(); start += config.batch_size) {
      const std::size_t n = std::min<std::size_t>(config.batch_size, train.size() - start);
      MatrixXd x(sdim, static_cast<Eigen::Index>(n));
      MatrixXd y(odim, static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        x.col(static_cast<Eigen::Index>(i)) = train[start + i]->state();
        y.col(static_cast<Eigen::Index>(i)) = train[start + i]->target();
      }
      const auto lg = bc_loss_and_grad(policy, x, y, config.beta);
      opt.step(policy.net().params(), lg.grad);
      loss_sum += lg.value;
      ++batches;
    }
    if (!policy.net().all_finite()) throw DivergenceError("pretrain: non-finite parameters");
    result.train_loss.push_back(loss_sum / batches);
    result.heldout_f1.push_back(micro_f1(policy, heldout));
  }
  return result;
}

}  // namespace madpl
