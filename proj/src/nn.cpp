#include "madpl/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "madpl/errors.hpp"

namespace madpl {

std::string_view activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
  }
  return "?";
}

namespace {

void apply(Activation a, MatrixXd& m) {
  switch (a) {
    case Activation::identity: break;
    case Activation::relu: m = m.cwiseMax(0.0); break;
    case Activation::sigmoid: m = (1.0 + (-m.array()).exp()).inverse().matrix(); break;
    case Activation::tanh: m = m.array().tanh().matrix(); break;
  }
}

// Multiplies grad by the activation derivative, given pre-activation and output.
void apply_derivative(Activation a, const MatrixXd& pre, const MatrixXd& out, MatrixXd& grad) {
  switch (a) {
    case Activation::identity: break;
    case Activation::relu: grad = (pre.array() > 0.0).select(grad, 0.0); break;
    case Activation::sigmoid: grad = (grad.array() * out.array() * (1.0 - out.array())).matrix(); break;
    case Activation::tanh: grad = (grad.array() * (1.0 - out.array().square())).matrix(); break;
  }
}

}  // namespace

Mlp::Mlp(std::vector<int> dims, Activation hidden, Activation output)
    : dims_(std::move(dims)), hidden_(hidden), output_(output) {
  if (dims_.size() < 2) throw DimensionMismatch("mlp needs at least input and output dims");
  Eigen::Index off = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    if (dims_[l] < 1 || dims_[l + 1] < 1) throw DimensionMismatch("mlp layer dims must be positive");
    offsets_.push_back(off);
    off += static_cast<Eigen::Index>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
  }
  params_ = VectorXd::Zero(off);
}

void Mlp::init_uniform(Rng& rng) {
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const double limit = std::sqrt(6.0 / (dims_[l] + dims_[l + 1]));
    auto w = weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-limit, limit);
    }
    bias(l).setZero();
  }
}

Eigen::Map<const MatrixXd> Mlp::weight(std::size_t l) const {
  return {params_.data() + offsets_[l], dims_[l + 1], dims_[l]};
}

Eigen::Map<const VectorXd> Mlp::bias(std::size_t l) const {
  return {params_.data() + offsets_[l] + static_cast<Eigen::Index>(dims_[l]) * dims_[l + 1], dims_[l + 1]};
}

Eigen::Map<MatrixXd> Mlp::weight(std::size_t l) { return {params_.data() + offsets_[l], dims_[l + 1], dims_[l]}; }

Eigen::Map<VectorXd> Mlp::bias(std::size_t l) {
  return {params_.data() + offsets_[l] + static_cast<Eigen::Index>(dims_[l]) * dims_[l + 1], dims_[l + 1]};
}

Mlp::Cache Mlp::forward(const MatrixXd& input) const {
  if (input.rows() != input_dim())
    throw DimensionMismatch("mlp input has " + std::to_string(input.rows()) + " rows, expected " +
                            std::to_string(input_dim()));
  Cache c;
  c.inputs.reserve(layer_count());
  c.pre.reserve(layer_count());
  MatrixXd x = input;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    MatrixXd z = weight(l) * x;
    z.colwise() += bias(l);
    c.inputs.push_back(std::move(x));
    x = z;
    apply(l + 1 == layer_count() ? output_ : hidden_, x);
    c.pre.push_back(std::move(z));
  }
  c.output = std::move(x);
  return c;
}

VectorXd Mlp::predict(const VectorXd& input) const { return forward(input).output.col(0); }

MatrixXd Mlp::backward(const Cache& cache, const MatrixXd& output_grad, VectorXd& param_grad) const {
  if (cache.pre.size() != layer_count() || cache.output.rows() != output_dim() ||
      output_grad.rows() != output_dim() || output_grad.cols() != cache.output.cols() ||
      cache.inputs.front().rows() != input_dim())
    throw StaleCache("cache does not match this network");
  for (std::size_t li = 0; li < layer_count(); ++li) {
    if (cache.inputs[li].rows() != dims_[li] || cache.pre[li].rows() != dims_[li + 1])
      throw StaleCache("cache does not match this network");
  }
  if (param_grad.size() == 0) param_grad = VectorXd::Zero(params_.size());
  if (param_grad.size() != params_.size()) throw DimensionMismatch("param gradient size mismatch");

  MatrixXd g = output_grad;
  for (std::size_t li = layer_count(); li-- > 0;) {
    const MatrixXd& out = li + 1 == layer_count() ? cache.output : cache.inputs[li + 1];
    apply_derivative(li + 1 == layer_count() ? output_ : hidden_, cache.pre[li], out, g);
    const Eigen::Index off = offsets_[li];
    Eigen::Map<MatrixXd> gw(param_grad.data() + off, dims_[li + 1], dims_[li]);
    Eigen::Map<VectorXd> gb(param_grad.data() + off + static_cast<Eigen::Index>(dims_[li]) * dims_[li + 1],
                            dims_[li + 1]);
    gw.noalias() += g * cache.inputs[li].transpose();
    gb += g.rowwise().sum();
    g = weight(li).transpose() * g;
  }
  return g;
}

void Rmsprop::step(VectorXd& params, const VectorXd& grad) {
  if (mean_square_.size() != params.size() || grad.size() != params.size())
    throw DimensionMismatch("rmsprop: shape mismatch");
  mean_square_ = kDecay * mean_square_ + (1.0 - kDecay) * grad.cwiseAbs2();
  params.array() -= lr_ * grad.array() / (mean_square_.array().sqrt() + kEpsilon);
}

VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& params, double h) {
  VectorXd g(params.size());
  VectorXd p = params;
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double orig = p[i];
    p[i] = orig + h;
    const double fp = f(p);
    p[i] = orig - h;
    const double fm = f(p);
    p[i] = orig;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

double max_relative_error(const VectorXd& a, const VectorXd& b, double floor) {
  if (a.size() != b.size()) throw DimensionMismatch("relative error: size mismatch");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

namespace {

constexpr char kMagic[8] = {'M', 'A', 'D', 'P', 'L', 'N', 'N', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void write_le(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw ParseError("checkpoint truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void save_mlp(std::ostream& out, const Mlp& net) {
  out.write(kMagic, sizeof kMagic);
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(net.layer_count()));
  for (int d : net.dims()) write_le<std::uint32_t>(out, static_cast<std::uint32_t>(d));
  write_le<std::uint8_t>(out, static_cast<std::uint8_t>(net.hidden_activation()));
  write_le<std::uint8_t>(out, static_cast<std::uint8_t>(net.output_activation()));
  write_le<std::uint64_t>(out, static_cast<std::uint64_t>(net.param_count()));
  for (Eigen::Index i = 0; i < net.param_count(); ++i) write_le<double>(out, net.params()[i]);
}

Mlp load_mlp(std::istream& in) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw ParseError("checkpoint: bad magic");
  if (read_le<std::uint32_t>(in) != kVersion) throw ParseError("checkpoint: unsupported version");
  const auto layers = read_le<std::uint32_t>(in);
  if (layers == 0 || layers > 64) throw ParseError("checkpoint: bad layer count");
  std::vector<int> dims;
  for (std::uint32_t i = 0; i <= layers; ++i) dims.push_back(static_cast<int>(read_le<std::uint32_t>(in)));
  const auto hidden = read_le<std::uint8_t>(in);
  const auto output = read_le<std::uint8_t>(in);
  if (hidden > 3 || output > 3) throw ParseError("checkpoint: bad activation tag");
  Mlp net(dims, static_cast<Activation>(hidden), static_cast<Activation>(output));
  if (read_le<std::uint64_t>(in) != static_cast<std::uint64_t>(net.param_count()))
    throw ParseError("checkpoint: parameter count does not match dims");
  for (Eigen::Index i = 0; i < net.param_count(); ++i) net.params()[i] = read_le<double>(in);
  return net;
}

void save_mlp(const std::string& path, const Mlp& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifact("cannot write '" + path + "'");
  save_mlp(out, net);
}

Mlp load_mlp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("cannot open '" + path + "'");
  return load_mlp(in);
}

}  // namespace madpl
