#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace madpl {

inline const std::string kDontCare = "dont care";
inline const std::string kNameSlot = "name";

struct InformableSlot {
  std::string name;
  std::vector<std::string> values;
};

struct DomainSchema {
  std::string name;
  std::vector<InformableSlot> informable;
  std::vector<std::string> requestable;
  std::vector<std::string> book_slots;
  bool bookable = false;
  // Values a user goal may assign to each book slot. Slots absent here draw
  // from kDefaultBookValues.
  std::map<std::string, std::vector<std::string>> book_values;

  const InformableSlot* find_informable(std::string_view slot) const;
  bool is_requestable(std::string_view slot) const;
  bool is_book_slot(std::string_view slot) const;
};

inline const std::vector<std::string> kDefaultBookValues = {"1", "2", "3", "4", "5", "6", "7", "8"};

// Schema of the synthetic world. Immutable after load_ontology.
class Ontology {
 public:
  Ontology() = default;
  explicit Ontology(std::vector<DomainSchema> domains);

  const std::vector<DomainSchema>& domains() const { return domains_; }
  std::size_t domain_count() const { return domains_.size(); }

  // Throws UnknownDomain.
  std::size_t domain_index(std::string_view name) const;
  const DomainSchema& domain(std::string_view name) const { return domains_[domain_index(name)]; }
  bool has_domain(std::string_view name) const;

  nlohmann::ordered_json to_json() const;

 private:
  std::vector<DomainSchema> domains_;
};

struct WorldConfig {
  Ontology ontology;
  int entities_per_domain = 30;
  std::uint64_t seed = 7;
  std::array<double, 3> domain_count_weights = {0.33, 0.55, 0.12};
};

// Parses the JSON world config. Throws ParseError on malformed text and
// SchemaError on invariant violations; both name the offending field.
WorldConfig load_world_config(const std::string& config_text);
Ontology load_ontology(const std::string& config_text);
std::string read_text_file(const std::string& path);

struct Entity {
  std::string id;
  std::map<std::string, std::string> attributes;

  const std::string& attr(const std::string& slot) const;
};

using Constraints = std::map<std::string, std::string>;

class Database {
 public:
  Database() = default;
  Database(const Ontology& ontology, std::map<std::string, std::vector<Entity>> entities);

  const std::vector<Entity>& entities(std::string_view domain) const;
  const Entity* find(std::string_view domain, std::string_view id) const;

  // All entities whose attributes equal every non-"dont care" constraint,
  // in entity-id order. Throws UnknownDomain / UnknownSlot.
  std::vector<const Entity*> query(std::string_view domain, const Constraints& constraints) const;
  std::size_t count(std::string_view domain, const Constraints& constraints) const;
  const Entity* first_match(std::string_view domain, const Constraints& constraints) const;

  const Ontology& ontology() const { return ontology_; }
  nlohmann::json to_json() const;

 private:
  Ontology ontology_;
  std::map<std::string, std::vector<Entity>, std::less<>> entities_;
};

Database generate_database(const Ontology& ontology, std::uint64_t seed, int entities_per_domain);

struct SubGoal {
  std::string domain;
  Constraints constraints;
  std::set<std::string> requests;
  std::map<std::string, std::string> book;  // empty when no booking required

  bool needs_booking() const { return !book.empty(); }
};

struct UserGoal {
  std::vector<SubGoal> subgoals;  // goal order

  const SubGoal* find(std::string_view domain) const;
  std::vector<std::string> domain_names() const;

  nlohmann::json to_json() const;
  static UserGoal from_json(const nlohmann::json& j);
};

// Samples a satisfiable goal. Throws SamplingExhausted after 1000 rejected
// constraint sets for one domain.
UserGoal sample_goal(const Ontology& ontology, const Database& db, std::uint64_t seed,
                     const std::array<double, 3>& domain_count_weights);

std::vector<UserGoal> sample_goal_set(const Ontology& ontology, const Database& db, std::uint64_t seed,
                                      std::size_t count, const std::array<double, 3>& domain_count_weights);

// One JSON object per line.
std::string goals_to_jsonl(const std::vector<UserGoal>& goals);
std::vector<UserGoal> goals_from_jsonl(const std::string& text);

// Everything an episode needs about the environment.
struct World {
  WorldConfig config;
  Database db;

  const Ontology& ontology() const { return config.ontology; }
};

World make_world(WorldConfig config);

}  // namespace madpl
