#pragma once

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "madpl/ontology.hpp"
#include "madpl/rng.hpp"

namespace madpl {

enum class Role { system, user };

std::string_view role_name(Role role);
Role parse_role(std::string_view name);

inline const std::string kGeneralDomain = "general";
inline const std::string kNoSlot = "none";
inline const std::string kRequestValue = "?";
inline const std::string kPlaceholder = "*";

// Delexicalized act identity: (domain, intent, slot).
struct ActTriple {
  std::string domain;
  std::string intent;
  std::string slot;

  auto operator<=>(const ActTriple&) const = default;
  std::string str() const;
};

struct DialogAct {
  std::string domain;
  std::string intent;
  std::string slot = kNoSlot;
  std::string value = kPlaceholder;

  ActTriple triple() const { return {domain, intent, slot}; }
  auto operator<=>(const DialogAct&) const = default;
  // Canonical form "domain-intent-slot=value".
  std::string str() const;
};

DialogAct parse_act(std::string_view canonical);

// Indices into an ActionSpace, ascending and unique.
using ActIndices = std::vector<std::size_t>;

class ActionSpace {
 public:
  ActionSpace() = default;
  ActionSpace(Role role, std::vector<ActTriple> entries);

  Role role() const { return role_; }
  std::size_t dim() const { return entries_.size(); }
  const std::vector<ActTriple>& entries() const { return entries_; }
  const ActTriple& entry(std::size_t i) const { return entries_.at(i); }

  // Throws UnknownAct.
  std::size_t index_of(const ActTriple& t) const;
  bool contains(const ActTriple& t) const { return index_.count(t) > 0; }

  DialogAct act(std::size_t i) const;
  std::vector<DialogAct> acts(const ActIndices& idx) const;
  ActIndices indices(const std::vector<DialogAct>& acts) const;

 private:
  Role role_ = Role::system;
  std::vector<ActTriple> entries_;
  std::map<ActTriple, std::size_t> index_;
};

ActionSpace build_action_space(const Ontology& ontology, Role role);

Eigen::VectorXd encode_acts(const std::vector<DialogAct>& acts, const ActionSpace& space);
Eigen::VectorXd encode_indices(const ActIndices& idx, std::size_t dim);

enum class DecodeMode { sample, threshold };

// Probabilities in [0,1] -> selected entries. Sample mode draws independent
// Bernoullis from rng; threshold mode keeps p > 0.5. Throws DimensionMismatch.
ActIndices decode_indices(const Eigen::Ref<const Eigen::VectorXd>& probs, std::size_t dim, DecodeMode mode,
                          Rng* rng = nullptr);
std::vector<DialogAct> decode_vector(const Eigen::Ref<const Eigen::VectorXd>& probs, const ActionSpace& space,
                                     DecodeMode mode, Rng* rng = nullptr);

// Fills placeholder values of user acts from the goal: informs read the
// constraint (possibly "dont care") or book value, requests get "?".
// Throws MissingValue when the goal does not hold the slot.
std::vector<DialogAct> lexicalize_user(const std::vector<DialogAct>& acts, const UserGoal& goal);

// Fills system acts from the selected entity. Informs and recommends read its
// attributes, book carries the entity id as the reference. Throws
// MissingValue when an act needs an entity and none (or no such attribute)
// is available.
std::vector<DialogAct> lexicalize_system(const std::vector<DialogAct>& acts, const Entity* entity);

// Overload for acts that only need the reserved token.
std::vector<DialogAct> lexicalize_dont_care(const std::vector<DialogAct>& acts);

std::string acts_to_string(const std::vector<DialogAct>& acts);

}  // namespace madpl
