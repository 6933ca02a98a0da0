#include "madpl/state.hpp"

#include <sstream>

#include "madpl/errors.hpp"

namespace madpl {

namespace {
constexpr std::size_t kBuckets = 4;
}

StateLayout::StateLayout(const Ontology& ontology)
    : ontology_(ontology),
      user_space_(build_action_space(ontology, Role::user)),
      system_space_(build_action_space(ontology, Role::system)) {
  const auto& doms = ontology_.domains();
  for (std::size_t d = 0; d < doms.size(); ++d) {
    for (const auto& s : doms[d].informable) informable_.push_back({d, s.name, s.values.size()});
    for (const auto& s : doms[d].requestable) requestable_.push_back({d, s, 0});
    for (const auto& s : doms[d].book_slots) book_slots_.push_back({d, s, 0});
    if (doms[d].bookable) bookable_.push_back(d);
  }
  std::size_t belief = 0;
  for (const auto& s : informable_) belief += s.value_count + 1;
  system_dim_ = user_space_.dim() + system_space_.dim() + belief + requestable_.size() + kBuckets * doms.size() +
                2 * bookable_.size();
  user_dim_ = system_space_.dim() + user_space_.dim() + informable_.size() + book_slots_.size() +
              requestable_.size() + bookable_.size() + informable_.size();
}

std::size_t StateLayout::find_slot(const std::vector<Slot>& slots, std::string_view domain, std::string_view slot,
                                   const char* kind) const {
  const std::size_t d = ontology_.domain_index(domain);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].domain == d && slots[i].name == slot) return i;
  }
  throw UnknownSlot("domain '" + std::string(domain) + "' has no " + kind + " slot '" + std::string(slot) + "'");
}

std::size_t StateLayout::informable_index(std::string_view domain, std::string_view slot) const {
  return find_slot(informable_, domain, slot, "informable");
}

std::size_t StateLayout::requestable_index(std::string_view domain, std::string_view slot) const {
  return find_slot(requestable_, domain, slot, "requestable");
}

std::size_t StateLayout::book_slot_index(std::string_view domain, std::string_view slot) const {
  return find_slot(book_slots_, domain, slot, "book");
}

std::size_t StateLayout::bookable_index(std::size_t domain) const {
  for (std::size_t i = 0; i < bookable_.size(); ++i) {
    if (bookable_[i] == domain) return i;
  }
  return static_cast<std::size_t>(-1);
}

std::string StateLayout::describe() const {
  std::ostringstream out;
  std::size_t pos = 0;
  auto seg = [&](const std::string& name, std::size_t n) {
    out << pos << "\t" << pos + n << "\t" << name << "\n";
    pos += n;
  };
  const auto& doms = ontology_.domains();
  out << "# system state vector, dim " << system_dim_ << "\n# begin\tend\tsegment\n";
  for (std::size_t i = 0; i < user_space_.dim(); ++i) seg("user_act_now:" + user_space_.entry(i).str(), 1);
  for (std::size_t i = 0; i < system_space_.dim(); ++i) seg("sys_act_prev:" + system_space_.entry(i).str(), 1);
  for (const auto& s : informable_) {
    const auto& values = doms[s.domain].find_informable(s.name)->values;
    for (const auto& v : values) seg("belief:" + doms[s.domain].name + "-" + s.name + "=" + v, 1);
    seg("belief_filled:" + doms[s.domain].name + "-" + s.name, 1);
  }
  for (const auto& s : requestable_) seg("requested:" + doms[s.domain].name + "-" + s.name, 1);
  const char* buckets[kBuckets] = {"0", "1", "2-3", ">=4"};
  for (const auto& d : doms) {
    for (auto b : buckets) seg("db_count:" + d.name + "=" + b, 1);
  }
  for (auto d : bookable_) {
    seg("book_slots_supplied:" + doms[d].name, 1);
    seg("booked:" + doms[d].name, 1);
  }
  pos = 0;
  out << "\n# user state vector, dim " << user_dim_ << "\n# begin\tend\tsegment\n";
  for (std::size_t i = 0; i < system_space_.dim(); ++i) seg("sys_act_prev:" + system_space_.entry(i).str(), 1);
  for (std::size_t i = 0; i < user_space_.dim(); ++i) seg("user_act_prev:" + user_space_.entry(i).str(), 1);
  for (const auto& s : informable_) seg("constraint_pending:" + doms[s.domain].name + "-" + s.name, 1);
  for (const auto& s : book_slots_) seg("book_slot_pending:" + doms[s.domain].name + "-" + s.name, 1);
  for (const auto& s : requestable_) seg("request_pending:" + doms[s.domain].name + "-" + s.name, 1);
  for (auto d : bookable_) seg("booking_pending:" + doms[d].name, 1);
  for (const auto& s : informable_) seg("inconsistent:" + doms[s.domain].name + "-" + s.name, 1);
  return out.str();
}

std::size_t db_count_bucket(std::size_t count) {
  if (count == 0) return 0;
  if (count == 1) return 1;
  if (count <= 3) return 2;
  return 3;
}

Constraints SystemState::belief_constraints(const StateLayout& layout, std::size_t domain) const {
  Constraints c;
  const auto& slots = layout.informable();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].domain == domain && !belief[i].empty()) c[slots[i].name] = belief[i];
  }
  return c;
}

bool SystemState::all_book_slots_supplied(const StateLayout& layout, std::size_t domain) const {
  bool any = false;
  const auto& slots = layout.book_slots();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].domain != domain) continue;
    any = true;
    if (!book_supplied[i]) return false;
  }
  return any;
}

std::size_t UserState::pending_count() const {
  std::size_t n = 0;
  for (auto f : constraint_pending) n += f;
  for (auto f : book_slot_pending) n += f;
  for (auto f : request_pending) n += f;
  for (auto f : booking_pending) n += f;
  return n;
}

std::pair<UserState, SystemState> init_states(const UserGoal& goal, const StateLayout& layout, const Database& db) {
  const auto& onto = layout.ontology();
  UserState u;
  u.constraint_pending.assign(layout.informable().size(), 0);
  u.book_slot_pending.assign(layout.book_slots().size(), 0);
  u.request_pending.assign(layout.requestable().size(), 0);
  u.booking_pending.assign(onto.domain_count(), 0);
  u.inconsistent.assign(layout.informable().size(), 0);
  for (const auto& sg : goal.subgoals) {
    for (const auto& [slot, value] : sg.constraints) u.constraint_pending[layout.informable_index(sg.domain, slot)] = 1;
    for (const auto& [slot, value] : sg.book) u.book_slot_pending[layout.book_slot_index(sg.domain, slot)] = 1;
    for (const auto& slot : sg.requests) u.request_pending[layout.requestable_index(sg.domain, slot)] = 1;
    if (sg.needs_booking()) u.booking_pending[onto.domain_index(sg.domain)] = 1;
  }

  SystemState s;
  s.belief.assign(layout.informable().size(), "");
  s.requested.assign(layout.requestable().size(), 0);
  s.book_supplied.assign(layout.book_slots().size(), 0);
  s.booked.assign(onto.domain_count(), "");
  s.db_count.resize(onto.domain_count());
  for (std::size_t d = 0; d < onto.domain_count(); ++d) s.db_count[d] = db.entities(onto.domains()[d].name).size();
  return {std::move(u), std::move(s)};
}

SystemState update_system_state(const SystemState& prev, const std::vector<DialogAct>& user_acts,
                                const StateLayout& layout, const Database& db) {
  const auto& onto = layout.ontology();
  SystemState s = prev;
  s.user_acts_now = layout.user_space().indices(user_acts);
  std::vector<bool> mentioned(onto.domain_count(), false);
  for (const auto& a : user_acts) {
    if (a.domain == kGeneralDomain) continue;
    const std::size_t d = onto.domain_index(a.domain);
    mentioned[d] = true;
    const auto& schema = onto.domains()[d];
    if (a.intent == "inform") {
      if (schema.find_informable(a.slot)) {
        s.belief[layout.informable_index(a.domain, a.slot)] = a.value;
      } else {
        s.book_supplied[layout.book_slot_index(a.domain, a.slot)] = 1;
      }
    } else if (a.intent == "request") {
      s.requested[layout.requestable_index(a.domain, a.slot)] = 1;
    }
  }
  for (std::size_t d = 0; d < onto.domain_count(); ++d) {
    if (mentioned[d]) s.db_count[d] = db.count(onto.domains()[d].name, s.belief_constraints(layout, d));
  }
  return s;
}

SystemState record_system_acts(const SystemState& prev, const std::vector<DialogAct>& system_acts,
                               const StateLayout& layout) {
  const auto& onto = layout.ontology();
  SystemState s = prev;
  s.sys_acts_prev = layout.system_space().indices(system_acts);
  for (const auto& a : system_acts) {
    if (a.domain == kGeneralDomain) continue;
    const std::size_t d = onto.domain_index(a.domain);
    if (a.intent == "inform" && onto.domains()[d].is_requestable(a.slot)) {
      s.requested[layout.requestable_index(a.domain, a.slot)] = 0;
    } else if (a.intent == "book") {
      s.booked[d] = a.value;
    }
  }
  return s;
}

UserState update_user_state(const UserState& prev, const std::vector<DialogAct>& system_acts, const UserGoal& goal,
                            const StateLayout& layout, const Database& db) {
  const auto& onto = layout.ontology();
  UserState u = prev;
  u.sys_acts_prev = layout.system_space().indices(system_acts);
  for (const auto& a : system_acts) {
    if (a.domain == kGeneralDomain) continue;
    const std::size_t d = onto.domain_index(a.domain);
    const auto& schema = onto.domains()[d];
    const SubGoal* sg = goal.find(a.domain);
    if (a.intent == "inform") {
      if (schema.is_requestable(a.slot)) {
        u.request_pending[layout.requestable_index(a.domain, a.slot)] = 0;
      } else if (schema.find_informable(a.slot)) {
        const std::size_t i = layout.informable_index(a.domain, a.slot);
        if (sg) {
          auto it = sg->constraints.find(a.slot);
          if (it != sg->constraints.end()) {
            u.inconsistent[i] = (it->second != kDontCare && it->second != a.value) ? 1 : 0;
          }
        }
      } else {
        throw UnknownSlot("domain '" + a.domain + "' has no slot '" + a.slot + "'");
      }
    } else if (a.intent == "book" && sg && sg->needs_booking()) {
      const Entity* e = db.find(a.domain, a.value);
      if (e) {
        bool match = true;
        for (const auto& [slot, value] : sg->constraints) {
          if (value != kDontCare && e->attr(slot) != value) match = false;
        }
        if (match) u.booking_pending[d] = 0;
      }
    }
  }
  return u;
}

UserState record_user_acts(const UserState& prev, const std::vector<DialogAct>& user_acts, const StateLayout& layout) {
  const auto& onto = layout.ontology();
  UserState u = prev;
  u.user_acts_prev = layout.user_space().indices(user_acts);
  for (const auto& a : user_acts) {
    if (a.domain == kGeneralDomain || a.intent != "inform") continue;
    const auto& schema = onto.domain(a.domain);
    if (schema.find_informable(a.slot)) {
      u.constraint_pending[layout.informable_index(a.domain, a.slot)] = 0;
    } else {
      u.book_slot_pending[layout.book_slot_index(a.domain, a.slot)] = 0;
    }
  }
  return u;
}

namespace {

void put_indices(Eigen::VectorXd& v, std::size_t& pos, const ActIndices& idx, std::size_t dim) {
  for (auto i : idx) v[static_cast<Eigen::Index>(pos + i)] = 1.0;
  pos += dim;
}

void put_flags(Eigen::VectorXd& v, std::size_t& pos, const std::vector<std::uint8_t>& flags) {
  for (std::size_t i = 0; i < flags.size(); ++i) v[static_cast<Eigen::Index>(pos + i)] = flags[i] ? 1.0 : 0.0;
  pos += flags.size();
}

}  // namespace

Eigen::VectorXd vectorize(const SystemState& s, const StateLayout& layout) {
  const auto& onto = layout.ontology();
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.system_dim()));
  std::size_t pos = 0;
  put_indices(v, pos, s.user_acts_now, layout.user_space().dim());
  put_indices(v, pos, s.sys_acts_prev, layout.system_space().dim());
  const auto& inf = layout.informable();
  for (std::size_t i = 0; i < inf.size(); ++i) {
    const auto& values = onto.domains()[inf[i].domain].find_informable(inf[i].name)->values;
    if (!s.belief[i].empty()) {
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k] == s.belief[i]) v[static_cast<Eigen::Index>(pos + k)] = 1.0;
      }
      v[static_cast<Eigen::Index>(pos + values.size())] = 1.0;
    }
    pos += values.size() + 1;
  }
  put_flags(v, pos, s.requested);
  for (std::size_t d = 0; d < onto.domain_count(); ++d) {
    v[static_cast<Eigen::Index>(pos + db_count_bucket(s.db_count[d]))] = 1.0;
    pos += kBuckets;
  }
  for (auto d : layout.bookable_domains()) {
    v[static_cast<Eigen::Index>(pos)] = s.all_book_slots_supplied(layout, d) ? 1.0 : 0.0;
    v[static_cast<Eigen::Index>(pos + 1)] = s.booked[d].empty() ? 0.0 : 1.0;
    pos += 2;
  }
  return v;
}

Eigen::VectorXd vectorize(const UserState& u, const StateLayout& layout) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layout.user_dim()));
  std::size_t pos = 0;
  put_indices(v, pos, u.sys_acts_prev, layout.system_space().dim());
  put_indices(v, pos, u.user_acts_prev, layout.user_space().dim());
  put_flags(v, pos, u.constraint_pending);
  put_flags(v, pos, u.book_slot_pending);
  put_flags(v, pos, u.request_pending);
  for (auto d : layout.bookable_domains()) v[static_cast<Eigen::Index>(pos++)] = u.booking_pending[d] ? 1.0 : 0.0;
  put_flags(v, pos, u.inconsistent);
  return v;
}

std::string vector_to_csv(const Eigen::Ref<const Eigen::VectorXd>& v) {
  std::string out;
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    const double x = v[i];
    if (x == 0.0) {
      out += '0';
    } else if (x == 1.0) {
      out += '1';
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
    }
  }
  return out;
}

}  // namespace madpl
