#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "madpl/rng.hpp"

namespace madpl {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class Activation : std::uint8_t { identity = 0, relu = 1, sigmoid = 2, tanh = 3 };

std::string_view activation_name(Activation a);

// Dense feed-forward net. All parameters live in one flat vector; layer l
// stores W_l (out x in, column-major) followed by b_l. Samples are columns.
class Mlp {
 public:
  struct Cache {
    std::vector<MatrixXd> inputs;  // input to each layer
    std::vector<MatrixXd> pre;     // pre-activation of each layer
    MatrixXd output;
  };

  Mlp() = default;
  Mlp(std::vector<int> dims, Activation hidden, Activation output);

  // Uniform in +-sqrt(6 / (fan_in + fan_out)); biases zero.
  void init_uniform(Rng& rng);

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  const std::vector<int>& dims() const { return dims_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }
  std::size_t layer_count() const { return dims_.size() - 1; }

  VectorXd& params() { return params_; }
  const VectorXd& params() const { return params_; }
  Eigen::Index param_count() const { return params_.size(); }

  Eigen::Map<const MatrixXd> weight(std::size_t layer) const;
  Eigen::Map<const VectorXd> bias(std::size_t layer) const;
  Eigen::Map<MatrixXd> weight(std::size_t layer);
  Eigen::Map<VectorXd> bias(std::size_t layer);

  // Throws DimensionMismatch.
  Cache forward(const MatrixXd& input) const;
  VectorXd predict(const VectorXd& input) const;

  // Adds dL/dparams into param_grad (resized and zeroed when empty) and
  // returns dL/dinput. Throws StaleCache on shape mismatch.
  MatrixXd backward(const Cache& cache, const MatrixXd& output_grad, VectorXd& param_grad) const;

  bool all_finite() const { return params_.allFinite(); }

 private:
  std::vector<int> dims_;
  std::vector<Eigen::Index> offsets_;
  Activation hidden_ = Activation::relu;
  Activation output_ = Activation::identity;
  VectorXd params_;
};

class Rmsprop {
 public:
  static constexpr double kDecay = 0.99;
  static constexpr double kEpsilon = 1e-8;

  Rmsprop() = default;
  Rmsprop(Eigen::Index size, double lr) : lr_(lr), mean_square_(VectorXd::Zero(size)) {}

  // v <- 0.99 v + 0.01 g^2 ; p <- p - lr g / (sqrt(v) + 1e-8)
  void step(VectorXd& params, const VectorXd& grad);

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  const VectorXd& mean_square() const { return mean_square_; }

 private:
  double lr_ = 1e-3;
  VectorXd mean_square_;
};

// Central differences (f(p + h e_i) - f(p - h e_i)) / 2h for every coordinate.
VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& params, double h = 1e-5);

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
double max_relative_error(const VectorXd& a, const VectorXd& b, double floor = 1e-6);

// Binary checkpoint, little-endian:
//   magic "MADPLNN1" | u32 version | u32 layer_count | u32 dims[layer_count+1]
//   | u8 hidden activation | u8 output activation | u64 param_count
//   | f64 params[param_count]
void save_mlp(std::ostream& out, const Mlp& net);
Mlp load_mlp(std::istream& in);
void save_mlp(const std::string& path, const Mlp& net);
Mlp load_mlp(const std::string& path);

}  // namespace madpl
