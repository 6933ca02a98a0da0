#include "madpl/dialog_act.hpp"

#include <algorithm>

#include "madpl/errors.hpp"

namespace madpl {

std::string_view role_name(Role role) { return role == Role::system ? "system" : "user"; }

Role parse_role(std::string_view name) {
  if (name == "system" || name == "sys") return Role::system;
  if (name == "user" || name == "usr") return Role::user;
  throw ParseError("unknown role '" + std::string(name) + "'");
}

std::string ActTriple::str() const { return domain + "-" + intent + "-" + slot; }

std::string DialogAct::str() const { return domain + "-" + intent + "-" + slot + "=" + value; }

DialogAct parse_act(std::string_view canonical) {
  const auto eq = canonical.find('=');
  const auto head = canonical.substr(0, eq);
  const auto d1 = head.find('-');
  const auto d2 = d1 == std::string_view::npos ? d1 : head.find('-', d1 + 1);
  if (eq == std::string_view::npos || d2 == std::string_view::npos)
    throw ParseError("malformed act '" + std::string(canonical) + "'");
  return DialogAct{std::string(head.substr(0, d1)), std::string(head.substr(d1 + 1, d2 - d1 - 1)),
                   std::string(head.substr(d2 + 1)), std::string(canonical.substr(eq + 1))};
}

ActionSpace::ActionSpace(Role role, std::vector<ActTriple> entries) : role_(role), entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i], i).second) throw SchemaError("action space: duplicate entry " + entries_[i].str());
  }
}

std::size_t ActionSpace::index_of(const ActTriple& t) const {
  auto it = index_.find(t);
  if (it == index_.end())
    throw UnknownAct("act " + t.str() + " not in " + std::string(role_name(role_)) + " action space");
  return it->second;
}

DialogAct ActionSpace::act(std::size_t i) const {
  const auto& t = entries_.at(i);
  return DialogAct{t.domain, t.intent, t.slot, t.intent == "request" ? kRequestValue : kPlaceholder};
}

std::vector<DialogAct> ActionSpace::acts(const ActIndices& idx) const {
  std::vector<DialogAct> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(act(i));
  return out;
}

ActIndices ActionSpace::indices(const std::vector<DialogAct>& acts) const {
  ActIndices out;
  for (const auto& a : acts) out.push_back(index_of(a.triple()));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ActionSpace build_action_space(const Ontology& ontology, Role role) {
  std::vector<ActTriple> e;
  for (const auto& d : ontology.domains()) {
    for (const auto& s : d.informable) e.push_back({d.name, "inform", s.name});
    if (role == Role::user) {
      for (const auto& s : d.book_slots) e.push_back({d.name, "inform", s});
      for (const auto& s : d.requestable) e.push_back({d.name, "request", s});
    } else {
      for (const auto& s : d.requestable) e.push_back({d.name, "inform", s});
      for (const auto& s : d.informable) e.push_back({d.name, "request", s.name});
      e.push_back({d.name, "recommend", kNameSlot});
      e.push_back({d.name, "book", kNoSlot});
      e.push_back({d.name, "offerbook", kNoSlot});
      e.push_back({d.name, "nooffer", kNoSlot});
    }
  }
  if (role == Role::user) {
    e.push_back({kGeneralDomain, "thank", kNoSlot});
    e.push_back({kGeneralDomain, "bye", kNoSlot});
  } else {
    e.push_back({kGeneralDomain, "reqmore", kNoSlot});
    e.push_back({kGeneralDomain, "bye", kNoSlot});
    e.push_back({kGeneralDomain, "welcome", kNoSlot});
  }
  std::sort(e.begin(), e.end());
  return ActionSpace(role, std::move(e));
}

Eigen::VectorXd encode_indices(const ActIndices& idx, std::size_t dim) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (auto i : idx) {
    if (i >= dim) throw DimensionMismatch("act index out of range");
    v[static_cast<Eigen::Index>(i)] = 1.0;
  }
  return v;
}

Eigen::VectorXd encode_acts(const std::vector<DialogAct>& acts, const ActionSpace& space) {
  return encode_indices(space.indices(acts), space.dim());
}

ActIndices decode_indices(const Eigen::Ref<const Eigen::VectorXd>& probs, std::size_t dim, DecodeMode mode,
                          Rng* rng) {
  if (static_cast<std::size_t>(probs.size()) != dim)
    throw DimensionMismatch("decode: got " + std::to_string(probs.size()) + " probabilities for dim " +
                            std::to_string(dim));
  ActIndices out;
  for (std::size_t i = 0; i < dim; ++i) {
    const double p = probs[static_cast<Eigen::Index>(i)];
    const bool on = mode == DecodeMode::threshold ? p > 0.5 : rng->bernoulli(p);
    if (on) out.push_back(i);
  }
  return out;
}

std::vector<DialogAct> decode_vector(const Eigen::Ref<const Eigen::VectorXd>& probs, const ActionSpace& space,
                                     DecodeMode mode, Rng* rng) {
  return space.acts(decode_indices(probs, space.dim(), mode, rng));
}

std::vector<DialogAct> lexicalize_user(const std::vector<DialogAct>& acts, const UserGoal& goal) {
  std::vector<DialogAct> out;
  for (auto a : acts) {
    if (a.intent == "request") {
      a.value = kRequestValue;
    } else if (a.intent == "inform") {
      const SubGoal* sg = goal.find(a.domain);
      if (!sg) throw MissingValue("goal has no domain '" + a.domain + "'");
      if (auto it = sg->constraints.find(a.slot); it != sg->constraints.end()) {
        a.value = it->second;
      } else if (auto jt = sg->book.find(a.slot); jt != sg->book.end()) {
        a.value = jt->second;
      } else {
        throw MissingValue("goal for '" + a.domain + "' has no value for '" + a.slot + "'");
      }
    } else {
      a.value = kNoSlot;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<DialogAct> lexicalize_system(const std::vector<DialogAct>& acts, const Entity* entity) {
  std::vector<DialogAct> out;
  for (auto a : acts) {
    if (a.intent == "request") {
      a.value = kRequestValue;
    } else if (a.intent == "inform" || a.intent == "recommend") {
      if (!entity) throw MissingValue("no entity to read '" + a.slot + "' from");
      a.value = entity->attr(a.slot);
    } else if (a.intent == "book") {
      if (!entity) throw MissingValue("no entity to book");
      a.value = entity->id;
    } else {
      a.value = kNoSlot;
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<DialogAct> lexicalize_dont_care(const std::vector<DialogAct>& acts) {
  std::vector<DialogAct> out;
  for (auto a : acts) {
    a.value = a.intent == "request" ? kRequestValue : kDontCare;
    out.push_back(std::move(a));
  }
  return out;
}

std::string acts_to_string(const std::vector<DialogAct>& acts) {
  std::string s;
  for (const auto& a : acts) {
    if (!s.empty()) s += ' ';
    s += a.str();
  }
  return s;
}

}  // namespace madpl
