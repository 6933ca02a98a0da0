#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "madpl/dialog_act.hpp"
#include "madpl/ontology.hpp"

namespace madpl {

// Global enumeration of the ontology's slots, the two action spaces and the
// feature-vector layouts built on them.
//
// System vector: [a_t^U | a_{t-1}^S | belief (per informable slot: value
// one-hot + filled bit) | requested flags (per requestable) | db-count bucket
// one-hot (4 per domain) | booking (per bookable domain: book slots supplied,
// booked)].
//
// User vector: [a_{t-1}^S | a_{t-1}^U | pending constraint (per informable) |
// pending book slot (per book slot) | pending request (per requestable) |
// pending booking (per bookable domain) | inconsistency (per informable)].
class StateLayout {
 public:
  struct Slot {
    std::size_t domain;
    std::string name;
    std::size_t value_count = 0;  // informable only
  };

  explicit StateLayout(const Ontology& ontology);

  const Ontology& ontology() const { return ontology_; }
  const ActionSpace& user_space() const { return user_space_; }
  const ActionSpace& system_space() const { return system_space_; }
  const ActionSpace& space(Role r) const { return r == Role::user ? user_space_ : system_space_; }

  const std::vector<Slot>& informable() const { return informable_; }
  const std::vector<Slot>& requestable() const { return requestable_; }
  const std::vector<Slot>& book_slots() const { return book_slots_; }
  const std::vector<std::size_t>& bookable_domains() const { return bookable_; }

  // Throw UnknownDomain / UnknownSlot.
  std::size_t informable_index(std::string_view domain, std::string_view slot) const;
  std::size_t requestable_index(std::string_view domain, std::string_view slot) const;
  std::size_t book_slot_index(std::string_view domain, std::string_view slot) const;
  // Position among bookable domains, or npos.
  std::size_t bookable_index(std::size_t domain) const;

  std::size_t system_dim() const { return system_dim_; }
  std::size_t user_dim() const { return user_dim_; }
  std::size_t dim(Role r) const { return r == Role::user ? user_dim_ : system_dim_; }

  // Human-readable segment table (state-layout.txt).
  std::string describe() const;

 private:
  std::size_t find_slot(const std::vector<Slot>& slots, std::string_view domain, std::string_view slot,
                        const char* kind) const;

  Ontology ontology_;
  ActionSpace user_space_;
  ActionSpace system_space_;
  std::vector<Slot> informable_;
  std::vector<Slot> requestable_;
  std::vector<Slot> book_slots_;
  std::vector<std::size_t> bookable_;
  std::size_t system_dim_ = 0;
  std::size_t user_dim_ = 0;
};

// Bucket of a query-result count: 0, 1, 2-3, >=4.
std::size_t db_count_bucket(std::size_t count);

struct SystemState {
  ActIndices user_acts_now;
  ActIndices sys_acts_prev;
  std::vector<std::string> belief;        // per informable slot, "" when not informed
  std::vector<std::uint8_t> requested;    // per requestable slot
  std::vector<std::size_t> db_count;      // per domain
  std::vector<std::uint8_t> book_supplied;  // per book slot
  std::vector<std::string> booked;        // per domain, entity id or ""

  Constraints belief_constraints(const StateLayout& layout, std::size_t domain) const;
  bool all_book_slots_supplied(const StateLayout& layout, std::size_t domain) const;
  bool operator==(const SystemState&) const = default;
};

struct UserState {
  ActIndices sys_acts_prev;
  ActIndices user_acts_prev;
  std::vector<std::uint8_t> constraint_pending;  // per informable slot
  std::vector<std::uint8_t> book_slot_pending;   // per book slot
  std::vector<std::uint8_t> request_pending;     // per requestable slot
  std::vector<std::uint8_t> booking_pending;     // per domain
  std::vector<std::uint8_t> inconsistent;        // per informable slot

  // Number of set goal flags (constraint, book slot, request, booking).
  std::size_t pending_count() const;
  bool operator==(const UserState&) const = default;
};

std::pair<UserState, SystemState> init_states(const UserGoal& goal, const StateLayout& layout, const Database& db);

// Applies grounded user acts: informs overwrite belief values (book-slot
// informs mark the slot supplied), requests set flags, db counts are
// recomputed for every mentioned domain.
SystemState update_system_state(const SystemState& prev, const std::vector<DialogAct>& user_acts,
                                const StateLayout& layout, const Database& db);

// Records the system's own grounded acts: they become a_{t-1}^S for the next
// turn, informed slots drop their requested flag, book acts record the entity.
SystemState record_system_acts(const SystemState& prev, const std::vector<DialogAct>& system_acts,
                               const StateLayout& layout);

// Applies grounded system acts to the user's trackers.
UserState update_user_state(const UserState& prev, const std::vector<DialogAct>& system_acts, const UserGoal& goal,
                            const StateLayout& layout, const Database& db);

// Records the user's own grounded acts: informs clear their pending flags and
// the acts become a_{t-1}^U.
UserState record_user_acts(const UserState& prev, const std::vector<DialogAct>& user_acts, const StateLayout& layout);

Eigen::VectorXd vectorize(const SystemState& state, const StateLayout& layout);
Eigen::VectorXd vectorize(const UserState& state, const StateLayout& layout);

std::string vector_to_csv(const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace madpl
