#include "madpl/hvn.hpp"

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "madpl/errors.hpp"
#include "madpl/ontology.hpp"

namespace madpl {

namespace {

std::vector<int> chain(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

MatrixXd stack_rows(const MatrixXd& top, const MatrixXd& bottom) {
  MatrixXd m(top.rows() + bottom.rows(), top.cols());
  m << top, bottom;
  return m;
}

}  // namespace

HybridValueNet::HybridValueNet(std::size_t system_dim, std::size_t user_dim, Rng& rng, const HvnShape& shape)
    : encoder_s_(chain(static_cast<int>(system_dim), shape.encoder_hidden, shape.encoding_dim), Activation::relu,
                 Activation::tanh),
      encoder_u_(chain(static_cast<int>(user_dim), shape.encoder_hidden, shape.encoding_dim), Activation::relu,
                 Activation::tanh),
      head_s_(chain(shape.encoding_dim, shape.head_hidden, 1), Activation::relu, Activation::identity),
      head_u_(chain(shape.encoding_dim, shape.head_hidden, 1), Activation::relu, Activation::identity),
      head_g_(chain(2 * shape.encoding_dim, shape.head_hidden, 1), Activation::relu, Activation::identity) {
  for (auto* p : parts()) p->init_uniform(rng);
}

HybridValueNet::HybridValueNet(Mlp encoder_s, Mlp encoder_u, Mlp head_s, Mlp head_u, Mlp head_g)
    : encoder_s_(std::move(encoder_s)),
      encoder_u_(std::move(encoder_u)),
      head_s_(std::move(head_s)),
      head_u_(std::move(head_u)),
      head_g_(std::move(head_g)) {
  if (encoder_s_.output_dim() != encoder_u_.output_dim() || head_s_.input_dim() != encoder_s_.output_dim() ||
      head_u_.input_dim() != encoder_u_.output_dim() ||
      head_g_.input_dim() != encoder_s_.output_dim() + encoder_u_.output_dim() || head_s_.output_dim() != 1 ||
      head_u_.output_dim() != 1 || head_g_.output_dim() != 1)
    throw DimensionMismatch("hybrid value net: branch dimensions do not chain");
}

MatrixXd HybridValueNet::values(const MatrixXd& s_system, const MatrixXd& s_user) const {
  if (s_system.cols() != s_user.cols()) throw DimensionMismatch("hvn: batch sizes differ");
  const MatrixXd hs = encoder_s_.forward(s_system).output;
  const MatrixXd hu = encoder_u_.forward(s_user).output;
  MatrixXd v(3, s_system.cols());
  v.row(kSystemBranch) = head_s_.forward(hs).output;
  v.row(kUserBranch) = head_u_.forward(hu).output;
  v.row(kGlobalBranch) = head_g_.forward(stack_rows(hs, hu)).output;
  return v;
}

BranchValues HybridValueNet::forward(const VectorXd& s_system, const VectorXd& s_user) const {
  const MatrixXd v = values(s_system, s_user);
  return {v(kSystemBranch, 0), v(kUserBranch, 0), v(kGlobalBranch, 0)};
}

Eigen::Index HybridValueNet::param_count() const {
  Eigen::Index n = 0;
  for (const auto* p : parts()) n += p->param_count();
  return n;
}

VectorXd HybridValueNet::flat_params() const {
  VectorXd out(param_count());
  Eigen::Index off = 0;
  for (const auto* p : parts()) {
    out.segment(off, p->param_count()) = p->params();
    off += p->param_count();
  }
  return out;
}

void HybridValueNet::set_flat_params(const VectorXd& flat) {
  if (flat.size() != param_count()) throw DimensionMismatch("hvn: flat parameter size mismatch");
  Eigen::Index off = 0;
  for (auto* p : parts()) {
    p->params() = flat.segment(off, p->param_count());
    off += p->param_count();
  }
}

bool HybridValueNet::all_finite() const {
  for (const auto* p : parts()) {
    if (!p->all_finite()) return false;
  }
  return true;
}

VectorXd HybridValueNet::backward_values(const MatrixXd& s_system, const MatrixXd& s_user,
                                         const MatrixXd& value_grad) const {
  const auto cs = encoder_s_.forward(s_system);
  const auto cu = encoder_u_.forward(s_user);
  const auto chs = head_s_.forward(cs.output);
  const auto chu = head_u_.forward(cu.output);
  const auto chg = head_g_.forward(stack_rows(cs.output, cu.output));

  VectorXd g_es, g_eu, g_hs, g_hu, g_hg;
  MatrixXd dhs = head_s_.backward(chs, value_grad.row(kSystemBranch), g_hs);
  MatrixXd dhu = head_u_.backward(chu, value_grad.row(kUserBranch), g_hu);
  const MatrixXd dcat = head_g_.backward(chg, value_grad.row(kGlobalBranch), g_hg);
  const auto k = cs.output.rows();
  dhs += dcat.topRows(k);
  dhu += dcat.bottomRows(k);
  encoder_s_.backward(cs, dhs, g_es);
  encoder_u_.backward(cu, dhu, g_eu);

  VectorXd out(param_count());
  out << g_es, g_eu, g_hs, g_hu, g_hg;
  return out;
}

namespace {

MatrixXd td_targets(const HybridValueNet& target, const ValueBatch& b, double gamma) {
  const MatrixXd next = target.values(b.next_system, b.next_user);
  const VectorXd live = (1.0 - b.done.array()).matrix();
  return b.rewards + gamma * next * live.asDiagonal();
}

}  // namespace

HvnLoss hvn_loss_and_grad(const HybridValueNet& hvn, const HybridValueNet& target, const ValueBatch& batch,
                          double gamma) {
  if (batch.size() == 0) throw DimensionMismatch("hvn loss: empty batch");
  const MatrixXd y = td_targets(target, batch, gamma);
  const MatrixXd v = hvn.values(batch.s_system, batch.s_user);
  const MatrixXd err = y - v;
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  HvnLoss out;
  for (int k = 0; k < 3; ++k) out.branch[k] = inv_b * err.row(k).squaredNorm();
  out.total = out.branch[0] + out.branch[1] + out.branch[2];
  out.grad = hvn.backward_values(batch.s_system, batch.s_user, -2.0 * inv_b * err);
  return out;
}

void sync_target(const HybridValueNet& hvn, HybridValueNet& target) { target = hvn; }

MatrixXd advantages(const HybridValueNet& hvn, const ValueBatch& batch, double gamma) {
  return td_targets(hvn, batch, gamma) - hvn.values(batch.s_system, batch.s_user);
}

ScalarCritic::ScalarCritic(std::size_t input_dim, Rng& rng, std::vector<int> hidden)
    : net_(chain(static_cast<int>(input_dim), hidden, 1), Activation::relu, Activation::identity) {
  net_.init_uniform(rng);
}

VectorXd ScalarCritic::values(const MatrixXd& inputs) const { return net_.forward(inputs).output.row(0).transpose(); }

namespace {

VectorXd scalar_targets(const ScalarCritic& target, const ScalarBatch& b, double gamma) {
  return b.rewards + gamma * target.values(b.next_inputs).cwiseProduct((1.0 - b.done.array()).matrix());
}

}  // namespace

ScalarLoss scalar_loss_and_grad(const ScalarCritic& critic, const ScalarCritic& target, const ScalarBatch& batch,
                                double gamma) {
  if (batch.inputs.cols() == 0) throw DimensionMismatch("critic loss: empty batch");
  const VectorXd y = scalar_targets(target, batch, gamma);
  const auto cache = critic.net().forward(batch.inputs);
  const VectorXd err = y - cache.output.row(0).transpose();
  const double inv_b = 1.0 / static_cast<double>(err.size());
  ScalarLoss out;
  out.total = inv_b * err.squaredNorm();
  const MatrixXd dv = (-2.0 * inv_b * err).transpose();
  critic.net().backward(cache, dv, out.grad);
  return out;
}

VectorXd scalar_advantages(const ScalarCritic& critic, const ScalarBatch& batch, double gamma) {
  return scalar_targets(critic, batch, gamma) - critic.values(batch.inputs);
}

namespace {
constexpr const char* kBranchFiles[5] = {"encoder_system.bin", "encoder_user.bin", "head_system.bin",
                                          "head_user.bin", "head_global.bin"};
}

void save_hvn(const std::string& dir, const HybridValueNet& hvn) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest = {{"format", "madpl-hvn"}, {"version", 1}, {"branches", nlohmann::json::array()}};
  const char* roles[5] = {"encoder_S", "encoder_U", "V_S", "V_U", "V_G"};
  const auto parts = hvn.parts();
  for (int i = 0; i < 5; ++i) {
    save_mlp(dir + "/" + kBranchFiles[i], *parts[i]);
    manifest["branches"].push_back({{"role", roles[i]}, {"file", kBranchFiles[i]}});
  }
  std::ofstream(dir + "/hvn.json") << manifest.dump(2) << "\n";
}

HybridValueNet load_hvn(const std::string& dir) {
  const auto manifest = nlohmann::json::parse(read_text_file(dir + "/hvn.json"));
  if (manifest.value("format", "") != "madpl-hvn") throw ParseError("hvn manifest: unknown format");
  std::vector<Mlp> nets;
  for (const auto& b : manifest.at("branches")) nets.push_back(load_mlp(dir + "/" + b.at("file").get<std::string>()));
  if (nets.size() != 5) throw ParseError("hvn manifest: expected 5 branches");
  return HybridValueNet(std::move(nets[0]), std::move(nets[1]), std::move(nets[2]), std::move(nets[3]),
                        std::move(nets[4]));
}

}  // namespace madpl
