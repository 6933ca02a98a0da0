#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "madpl/dialog_act.hpp"

namespace madpl {

// One supervised example. State features are binary, so only the indices of
// the set entries are kept.
struct CorpusRecord {
  int dialog_id = 0;
  int turn = 0;
  Role role = Role::system;
  std::vector<std::uint32_t> state_on;
  std::size_t state_dim = 0;
  ActIndices action;
  std::size_t action_dim = 0;
  bool terminal = false;

  Eigen::VectorXd state() const;
  // Action multi-hot; for the user role the terminal bit is appended.
  Eigen::VectorXd target() const;
};

struct Corpus {
  std::vector<CorpusRecord> records;
  std::vector<std::uint8_t> dialog_success;  // indexed by dialog id

  std::vector<const CorpusRecord*> for_role(Role role) const;
  std::size_t dialog_count() const { return dialog_success.size(); }
};

CorpusRecord make_record(int dialog_id, int turn, Role role, const Eigen::VectorXd& state, const ActIndices& action,
                         std::size_t action_dim, bool terminal);

// Line format, tab separated:
//   dialog_id  turn  role  state_vector(csv)  action_multihot(csv)  terminal_bit
// A trailing "# success <dialog_id> <0|1>" line per dialog records the outcome.
std::string corpus_to_text(const Corpus& corpus);
Corpus corpus_from_text(const std::string& text);

void write_corpus(const std::string& path, const Corpus& corpus);
Corpus read_corpus(const std::string& path);

}  // namespace madpl
