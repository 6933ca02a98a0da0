#include <doctest.h>

#include <cmath>

#include "madpl/errors.hpp"
#include "madpl/policy.hpp"

using namespace madpl;

namespace {

DialogPolicy small_policy(Role role, std::size_t state_dim, std::size_t action_dim, std::uint64_t seed) {
  const int out = static_cast<int>(action_dim + (role == Role::user ? 1 : 0));
  Mlp net({static_cast<int>(state_dim), 6, 5, out}, Activation::relu, Activation::identity);
  Rng rng(seed);
  for (Eigen::Index i = 0; i < net.param_count(); ++i) net.params()(i) = rng.uniform(-0.5, 0.5);
  return DialogPolicy(role, action_dim, std::move(net));
}

MatrixXd random_binary(Eigen::Index rows, Eigen::Index cols, Rng& rng, double p = 0.4) {
  MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = rng.bernoulli(p) ? 1.0 : 0.0;
  return m;
}

VectorXd fd_of(DialogPolicy policy, const std::function<double(const DialogPolicy&)>& f) {
  const VectorXd p0 = policy.net().params();
  return fd_gradient(
      [&](const VectorXd& p) {
        policy.net().params() = p;
        return f(policy);
      },
      p0);
}

// Reference multi-label cross-entropy computed directly from probabilities.
double reference_bce(const DialogPolicy& policy, const MatrixXd& x, const MatrixXd& y, double beta) {
  double sum = 0.0;
  for (Eigen::Index b = 0; b < x.cols(); ++b) {
    const VectorXd p = policy.probs(x.col(b));
    for (Eigen::Index k = 0; k < p.size(); ++k)
      sum += beta * y(k, b) * std::log(p(k)) + (1.0 - y(k, b)) * std::log(1.0 - p(k));
  }
  return -sum / static_cast<double>(y.size());
}

CorpusRecord record(int dialog, const VectorXd& x, const ActIndices& a, std::size_t action_dim) {
  return make_record(dialog, 0, Role::system, x, a, action_dim, false);
}

}  // namespace

TEST_SUITE("policies") {
  TEST_CASE("output layout") {
    Rng rng(1);
    const DialogPolicy user(Role::user, 10, 7, rng);
    const DialogPolicy sys(Role::system, 12, 9, rng);
    CHECK(user.output_dim() == 8);
    CHECK(sys.output_dim() == 9);
    const VectorXd p = user.probs(VectorXd::Ones(10));
    CHECK((p.array() > 0.0).all());
    CHECK((p.array() < 1.0).all());
    CHECK_THROWS_AS(DialogPolicy(Role::user, 7, Mlp({10, 4, 7}, Activation::relu, Activation::identity)),
                    DimensionMismatch);
  }

  TEST_CASE("large negative biases give the empty act set") {
    DialogPolicy user = small_policy(Role::user, 5, 6, 3);
    user.net().bias(user.net().layer_count() - 1).setConstant(-1e3);
    const PolicyAction a = user.act(VectorXd::Ones(5), DecodeMode::threshold);
    CHECK(a.acts.empty());
    CHECK_FALSE(a.terminal);
  }

  TEST_CASE("large positive biases on two dims select exactly those acts") {
    DialogPolicy sys = small_policy(Role::system, 5, 6, 3);
    auto b = sys.net().bias(sys.net().layer_count() - 1);
    b.setConstant(-1e3);
    b(1) = 1e3;
    b(4) = 1e3;
    CHECK(sys.act(VectorXd::Ones(5), DecodeMode::threshold).acts == ActIndices{1, 4});
  }

  TEST_CASE("sampling is reproducible") {
    const DialogPolicy user = small_policy(Role::user, 5, 6, 3);
    Rng a(77), b(77);
    for (int i = 0; i < 50; ++i) {
      const VectorXd x = VectorXd::Constant(5, 0.1 * i);
      const PolicyAction pa = user.act(x, DecodeMode::sample, &a);
      const PolicyAction pb = user.act(x, DecodeMode::sample, &b);
      CHECK(pa.acts == pb.acts);
      CHECK(pa.terminal == pb.terminal);
    }
  }

  TEST_CASE("bc loss at zero logits is log 2 per dimension") {
    DialogPolicy sys = small_policy(Role::system, 4, 1, 1);
    sys.net().params().setZero();
    MatrixXd y(1, 1);
    y << 1.0;
    const LossAndGrad lg = bc_loss_and_grad(sys, MatrixXd::Ones(4, 1), y, 1.0);
    CHECK(lg.value == doctest::Approx(0.6931).epsilon(1e-4));
    CHECK(lg.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }

  TEST_CASE("bc loss is stationary when targets equal the probabilities") {
    const DialogPolicy sys = small_policy(Role::system, 4, 3, 5);
    const MatrixXd x = MatrixXd::Random(4, 2);
    MatrixXd y(3, 2);
    for (Eigen::Index b = 0; b < 2; ++b) y.col(b) = sys.probs(x.col(b));
    const LossAndGrad lg = bc_loss_and_grad(sys, x, y, 1.0);
    CHECK(lg.grad.cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("bc loss with beta one is multi-label cross-entropy") {
    Rng rng(8);
    const DialogPolicy user = small_policy(Role::user, 6, 4, 9);
    const MatrixXd x = MatrixXd::Random(6, 5);
    const MatrixXd y = random_binary(5, 5, rng);
    for (double beta : {1.0, 2.5, 4.0})
      CHECK(bc_loss_and_grad(user, x, y, beta).value == doctest::Approx(reference_bce(user, x, y, beta)).epsilon(1e-12));
  }

  TEST_CASE("bc gradient matches finite differences") {
    Rng rng(12);
    for (Role role : {Role::system, Role::user}) {
      const DialogPolicy pol = small_policy(role, 6, 5, 21);
      const MatrixXd x = MatrixXd::Random(6, 4);
      const MatrixXd y = random_binary(static_cast<Eigen::Index>(pol.output_dim()), 4, rng);
      for (double beta : {1.0, 2.5, 4.0}) {
        const LossAndGrad lg = bc_loss_and_grad(pol, x, y, beta);
        const VectorXd fd = fd_of(pol, [&](const DialogPolicy& p) { return bc_loss_and_grad(p, x, y, beta).value; });
        CHECK(max_relative_error(lg.grad, fd) < 1e-4);
      }
    }
  }

  TEST_CASE("log-likelihood values") {
    DialogPolicy sys = small_policy(Role::system, 4, 5, 1);
    sys.net().params().setZero();
    VectorXd a(5);
    a << 1, 0, 1, 1, 0;
    CHECK(logprob_grad(sys, VectorXd::Ones(4), a).value == doctest::Approx(5 * std::log(0.5)).epsilon(1e-12));

    auto b = sys.net().bias(sys.net().layer_count() - 1);
    const double logit = std::log(0.99 / 0.01);
    for (Eigen::Index k = 0; k < 5; ++k) b(k) = a(k) > 0 ? logit : -logit;
    CHECK(logprob_grad(sys, VectorXd::Ones(4), a).value == doctest::Approx(5 * std::log(0.99)).epsilon(1e-9));
  }

  TEST_CASE("log-likelihood gradient matches finite differences") {
    Rng rng(31);
    for (Role role : {Role::system, Role::user}) {
      const DialogPolicy pol = small_policy(role, 6, 5, 44);
      const VectorXd x = VectorXd::Random(6);
      const VectorXd a = random_binary(static_cast<Eigen::Index>(pol.output_dim()), 1, rng).col(0);
      const VectorXd fd = fd_of(pol, [&](const DialogPolicy& p) { return logprob_grad(p, x, a).value; });
      CHECK(max_relative_error(logprob_grad(pol, x, a).grad, fd) < 1e-4);
    }
  }

  TEST_CASE("clamping keeps the loss finite") {
    DialogPolicy sys = small_policy(Role::system, 4, 3, 1);
    sys.net().bias(sys.net().layer_count() - 1).setConstant(1e4);
    const LossAndGrad lg = bc_loss_and_grad(sys, MatrixXd::Ones(4, 2), MatrixXd::Zero(3, 2), 2.5);
    CHECK(std::isfinite(lg.value));
    CHECK(lg.grad.allFinite());
    const VectorXd p = sys.probs(VectorXd::Ones(4));
    CHECK(p.maxCoeff() <= 1.0 - kProbClamp);
  }

  TEST_CASE("greedy decisions depend only on the sign of the logits") {
    const DialogPolicy sys = small_policy(Role::system, 5, 6, 13);
    Rng rng(2);
    for (int i = 0; i < 20; ++i) {
      const VectorXd x = VectorXd::Random(5);
      const VectorXd z = sys.net().predict(x);
      ActIndices positive;
      for (Eigen::Index k = 0; k < z.size(); ++k)
        if (z(k) > 0) positive.push_back(static_cast<std::size_t>(k));
      CHECK(sys.act(x, DecodeMode::threshold).acts == positive);
    }
  }

  TEST_CASE("pretraining memorizes a repeated pair") {
    Rng rng(3);
    DialogPolicy sys(Role::system, 6, 4, rng, {16, 16});
    VectorXd x(6);
    x << 1, 0, 1, 0, 0, 1;
    Corpus corpus;
    for (int d = 0; d < 100; ++d) {
      corpus.records.push_back(record(d, x, {0, 2}, 4));
      corpus.dialog_success.push_back(1);
    }
    PretrainConfig cfg;
    cfg.epochs = 50;
    cfg.seed = 4;
    const PretrainResult res = pretrain(sys, corpus, cfg);
    CHECK(res.heldout_f1.size() == 50);
    CHECK(res.heldout_f1.back() == doctest::Approx(1.0));
    CHECK(res.train_loss.back() < res.train_loss.front());
  }

  TEST_CASE("pretraining needs at least one batch") {
    Rng rng(3);
    DialogPolicy sys(Role::system, 6, 4, rng);
    Corpus corpus;
    for (int d = 0; d < 10; ++d) {
      corpus.records.push_back(record(d, VectorXd::Ones(6), {1}, 4));
      corpus.dialog_success.push_back(1);
    }
    CHECK_THROWS_AS(pretrain(sys, corpus, PretrainConfig{}), EmptyCorpus);
  }

  TEST_CASE("defaults") {
    const PretrainConfig cfg;
    CHECK(cfg.batch_size == 32);
    CHECK(cfg.lr == 1e-3);
    CHECK(cfg.heldout_fraction == 0.1);
  }
}
