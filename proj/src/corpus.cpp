#include "madpl/corpus.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "madpl/errors.hpp"
#include "madpl/ontology.hpp"

namespace madpl {

Eigen::VectorXd CorpusRecord::state() const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(state_dim));
  for (auto i : state_on) v[i] = 1.0;
  return v;
}

Eigen::VectorXd CorpusRecord::target() const {
  const std::size_t n = action_dim + (role == Role::user ? 1 : 0);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (auto i : action) v[static_cast<Eigen::Index>(i)] = 1.0;
  if (role == Role::user && terminal) v[static_cast<Eigen::Index>(action_dim)] = 1.0;
  return v;
}

std::vector<const CorpusRecord*> Corpus::for_role(Role role) const {
  std::vector<const CorpusRecord*> out;
  for (const auto& r : records) {
    if (r.role == role) out.push_back(&r);
  }
  return out;
}

CorpusRecord make_record(int dialog_id, int turn, Role role, const Eigen::VectorXd& state, const ActIndices& action,
                         std::size_t action_dim, bool terminal) {
  CorpusRecord r;
  r.dialog_id = dialog_id;
  r.turn = turn;
  r.role = role;
  r.state_dim = static_cast<std::size_t>(state.size());
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    if (state[i] != 0.0) {
      if (state[i] != 1.0) throw DimensionMismatch("corpus states must be binary");
      r.state_on.push_back(static_cast<std::uint32_t>(i));
    }
  }
  r.action = action;
  r.action_dim = action_dim;
  r.terminal = terminal;
  return r;
}

namespace {

void append_binary_csv(std::string& out, const std::vector<std::uint32_t>& on, std::size_t dim) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (i) out += ',';
    const bool set = k < on.size() && on[k] == i;
    if (set) ++k;
    out += set ? '1' : '0';
  }
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(std::string_view s, std::size_t line) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError("corpus line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
  return v;
}

std::vector<std::uint32_t> parse_binary_csv(std::string_view s, std::size_t& dim, std::size_t line) {
  std::vector<std::uint32_t> on;
  const auto cells = split(s, ',');
  dim = cells.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] == "1") {
      on.push_back(static_cast<std::uint32_t>(i));
    } else if (cells[i] != "0") {
      throw ParseError("corpus line " + std::to_string(line) + ": non-binary entry '" + std::string(cells[i]) + "'");
    }
  }
  return on;
}

}  // namespace

std::string corpus_to_text(const Corpus& corpus) {
  std::string out;
  for (const auto& r : corpus.records) {
    out += std::to_string(r.dialog_id);
    out += '\t';
    out += std::to_string(r.turn);
    out += '\t';
    out += role_name(r.role);
    out += '\t';
    append_binary_csv(out, r.state_on, r.state_dim);
    out += '\t';
    std::vector<std::uint32_t> act(r.action.begin(), r.action.end());
    append_binary_csv(out, act, r.action_dim);
    out += '\t';
    out += r.terminal ? '1' : '0';
    out += '\n';
  }
  for (std::size_t d = 0; d < corpus.dialog_success.size(); ++d) {
    out += "# success " + std::to_string(d) + " " + (corpus.dialog_success[d] ? "1" : "0") + "\n";
  }
  return out;
}

Corpus corpus_from_text(const std::string& text) {
  Corpus c;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto parts = split(line, ' ');
      if (parts.size() == 4 && parts[1] == "success") {
        const int d = parse_int(parts[2], n);
        if (d < 0) throw ParseError("corpus line " + std::to_string(n) + ": negative dialog id");
        if (c.dialog_success.size() <= static_cast<std::size_t>(d)) c.dialog_success.resize(d + 1, 0);
        c.dialog_success[d] = parts[3] == "1";
      }
      continue;
    }
    const auto f = split(line, '\t');
    if (f.size() != 6) throw ParseError("corpus line " + std::to_string(n) + ": expected 6 fields");
    CorpusRecord r;
    r.dialog_id = parse_int(f[0], n);
    r.turn = parse_int(f[1], n);
    r.role = parse_role(f[2]);
    r.state_on = parse_binary_csv(f[3], r.state_dim, n);
    const auto act = parse_binary_csv(f[4], r.action_dim, n);
    r.action.assign(act.begin(), act.end());
    if (f[5] != "0" && f[5] != "1") throw ParseError("corpus line " + std::to_string(n) + ": bad terminal bit");
    r.terminal = f[5] == "1";
    c.records.push_back(std::move(r));
  }
  return c;
}

void write_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingArtifact("cannot write '" + path + "'");
  out << corpus_to_text(corpus);
}

Corpus read_corpus(const std::string& path) { return corpus_from_text(read_text_file(path)); }

}  // namespace madpl
