#include "madpl/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "madpl/errors.hpp"
#include "madpl/rng.hpp"

namespace madpl {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

const InformableSlot* DomainSchema::find_informable(std::string_view slot) const {
  for (const auto& s : informable) {
    if (s.name == slot) return &s;
  }
  return nullptr;
}

bool DomainSchema::is_requestable(std::string_view slot) const {
  return std::find(requestable.begin(), requestable.end(), slot) != requestable.end();
}

bool DomainSchema::is_book_slot(std::string_view slot) const {
  return std::find(book_slots.begin(), book_slots.end(), slot) != book_slots.end();
}

namespace {

void validate(const std::vector<DomainSchema>& domains) {
  if (domains.empty()) throw SchemaError("domains: at least one domain required");
  std::set<std::string> names;
  for (std::size_t d = 0; d < domains.size(); ++d) {
    const auto& dom = domains[d];
    const std::string where = "domains[" + std::to_string(d) + "]";
    if (dom.name.empty()) throw SchemaError(where + ".name: empty");
    if (dom.name == "general") throw SchemaError(where + ".name: 'general' is reserved");
    if (!names.insert(dom.name).second) throw SchemaError(where + ".name: duplicate domain '" + dom.name + "'");
    std::set<std::string> slots;
    for (const auto& s : dom.informable) {
      if (!slots.insert(s.name).second)
        throw SchemaError(where + ".informable: duplicate slot '" + s.name + "'");
      if (s.values.size() < 2)
        throw SchemaError(where + ".informable." + s.name + ": needs at least 2 values");
      std::set<std::string> vals(s.values.begin(), s.values.end());
      if (vals.size() != s.values.size())
        throw SchemaError(where + ".informable." + s.name + ": duplicate value");
      if (vals.count(kDontCare))
        throw SchemaError(where + ".informable." + s.name + ": '" + kDontCare + "' is reserved");
    }
    for (const auto& s : dom.requestable) {
      if (!slots.insert(s).second)
        throw SchemaError(where + ".requestable: slot '" + s + "' duplicated or also informable");
    }
    if (slots.count(kNameSlot)) throw SchemaError(where + ": slot 'name' is reserved");
    std::set<std::string> book;
    for (const auto& s : dom.book_slots) {
      if (!book.insert(s).second) throw SchemaError(where + ".book_slots: duplicate slot '" + s + "'");
      if (slots.count(s)) throw SchemaError(where + ".book_slots: '" + s + "' clashes with another slot");
    }
    if (dom.bookable && dom.book_slots.empty())
      throw SchemaError(where + ".book_slots: bookable domain needs book slots");
    for (const auto& [slot, vals] : dom.book_values) {
      if (!book.count(slot)) throw SchemaError(where + ".book_values." + slot + ": not a book slot");
      if (vals.empty()) throw SchemaError(where + ".book_values." + slot + ": empty value list");
    }
  }
}

template <class T>
T get_field(const ojson& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw SchemaError(where + "." + key + ": missing");
  try {
    return j.at(key).get<T>();
  } catch (const ojson::exception&) {
    throw SchemaError(where + "." + key + ": wrong type");
  }
}

DomainSchema parse_domain(const ojson& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected object");
  DomainSchema d;
  d.name = get_field<std::string>(j, "name", where);
  if (!j.contains("informable") || !j.at("informable").is_object())
    throw SchemaError(where + ".informable: expected object slot -> values");
  for (auto it = j.at("informable").begin(); it != j.at("informable").end(); ++it) {
    if (!it.value().is_array()) throw SchemaError(where + ".informable." + it.key() + ": expected list");
    InformableSlot s{it.key(), {}};
    for (const auto& v : it.value()) {
      if (!v.is_string()) throw SchemaError(where + ".informable." + it.key() + ": values must be strings");
      s.values.push_back(v.get<std::string>());
    }
    d.informable.push_back(std::move(s));
  }
  d.requestable = get_field<std::vector<std::string>>(j, "requestable", where);
  d.book_slots = j.contains("book_slots") ? get_field<std::vector<std::string>>(j, "book_slots", where)
                                          : std::vector<std::string>{};
  d.bookable = j.contains("bookable") ? get_field<bool>(j, "bookable", where) : false;
  if (j.contains("book_values"))
    d.book_values = get_field<std::map<std::string, std::vector<std::string>>>(j, "book_values", where);
  return d;
}

}  // namespace

Ontology::Ontology(std::vector<DomainSchema> domains) : domains_(std::move(domains)) { validate(domains_); }

std::size_t Ontology::domain_index(std::string_view name) const {
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    if (domains_[i].name == name) return i;
  }
  throw UnknownDomain("unknown domain '" + std::string(name) + "'");
}

bool Ontology::has_domain(std::string_view name) const {
  return std::any_of(domains_.begin(), domains_.end(), [&](const auto& d) { return d.name == name; });
}

ojson Ontology::to_json() const {
  ojson doms = ojson::array();
  for (const auto& d : domains_) {
    ojson inf = ojson::object();
    for (const auto& s : d.informable) inf[s.name] = s.values;
    ojson jd = {{"name", d.name},
               {"informable", inf},
               {"requestable", d.requestable},
               {"book_slots", d.book_slots},
               {"bookable", d.bookable}};
    if (!d.book_values.empty()) jd["book_values"] = d.book_values;
    doms.push_back(jd);
  }
  return ojson{{"domains", doms}};
}

WorldConfig load_world_config(const std::string& config_text) {
  // ordered_json keeps the slot order of the file.
  ojson j;
  try {
    j = ojson::parse(config_text);
  } catch (const ojson::parse_error& e) {
    throw ParseError(std::string("world config: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("config: expected top-level object");
  if (!j.contains("domains") || !j.at("domains").is_array()) throw SchemaError("domains: expected list");

  std::vector<DomainSchema> domains;
  const auto& jd = j.at("domains");
  for (std::size_t i = 0; i < jd.size(); ++i) {
    domains.push_back(parse_domain(jd[i], "domains[" + std::to_string(i) + "]"));
  }

  WorldConfig cfg;
  cfg.ontology = Ontology(std::move(domains));
  if (j.contains("entities_per_domain")) {
    cfg.entities_per_domain = get_field<int>(j, "entities_per_domain", "config");
    if (cfg.entities_per_domain < 1) throw SchemaError("entities_per_domain: must be >= 1");
  }
  if (j.contains("seed")) cfg.seed = get_field<std::uint64_t>(j, "seed", "config");
  if (j.contains("domain_count_weights")) {
    auto w = get_field<std::vector<double>>(j, "domain_count_weights", "config");
    if (w.size() != 3) throw SchemaError("domain_count_weights: expected 3 entries");
    double sum = 0;
    for (double x : w) {
      if (x < 0) throw SchemaError("domain_count_weights: negative weight");
      sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw SchemaError("domain_count_weights: must sum to 1");
    cfg.domain_count_weights = {w[0], w[1], w[2]};
  }
  return cfg;
}

Ontology load_ontology(const std::string& config_text) { return load_world_config(config_text).ontology; }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingArtifact("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string& Entity::attr(const std::string& slot) const {
  auto it = attributes.find(slot);
  if (it == attributes.end()) throw MissingValue("entity " + id + " has no attribute '" + slot + "'");
  return it->second;
}

Database::Database(const Ontology& ontology, std::map<std::string, std::vector<Entity>> entities)
    : ontology_(ontology) {
  for (auto& [dom, list] : entities) {
    ontology_.domain_index(dom);
    std::sort(list.begin(), list.end(), [](const Entity& a, const Entity& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < list.size(); ++i) {
      if (list[i].id == list[i - 1].id) throw SchemaError("database: duplicate entity id '" + list[i].id + "'");
    }
    entities_.emplace(dom, std::move(list));
  }
}

const std::vector<Entity>& Database::entities(std::string_view domain) const {
  auto it = entities_.find(domain);
  if (it == entities_.end()) {
    ontology_.domain_index(domain);
    static const std::vector<Entity> empty;
    return empty;
  }
  return it->second;
}

const Entity* Database::find(std::string_view domain, std::string_view id) const {
  for (const auto& e : entities(domain)) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

std::vector<const Entity*> Database::query(std::string_view domain, const Constraints& constraints) const {
  const auto& schema = ontology_.domain(domain);
  for (const auto& [slot, value] : constraints) {
    if (!schema.find_informable(slot))
      throw UnknownSlot("domain '" + std::string(domain) + "' has no informable slot '" + slot + "'");
  }
  std::vector<const Entity*> out;
  for (const auto& e : entities(domain)) {
    bool ok = true;
    for (const auto& [slot, value] : constraints) {
      if (value == kDontCare) continue;
      auto it = e.attributes.find(slot);
      if (it == e.attributes.end() || it->second != value) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(&e);
  }
  return out;
}

std::size_t Database::count(std::string_view domain, const Constraints& constraints) const {
  return query(domain, constraints).size();
}

const Entity* Database::first_match(std::string_view domain, const Constraints& constraints) const {
  auto r = query(domain, constraints);
  return r.empty() ? nullptr : r.front();
}

json Database::to_json() const {
  json out = json::object();
  for (const auto& [dom, list] : entities_) {
    json arr = json::array();
    for (const auto& e : list) arr.push_back({{"id", e.id}, {"attributes", e.attributes}});
    out[dom] = arr;
  }
  return out;
}

namespace {

std::string synth_value(const std::string& slot, Rng& rng) {
  auto digits = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.index(10)));
    return s;
  };
  if (slot == "phone") return "01223" + digits(6);
  if (slot == "postcode") return "cb" + std::to_string(1 + rng.index(9)) + std::to_string(rng.index(10)) + "ab";
  if (slot == "address") return std::to_string(1 + rng.index(99)) + " " + std::string(1, 'a' + rng.index(26)) + " street";
  return slot + "-" + digits(4);
}

}  // namespace

Database generate_database(const Ontology& ontology, std::uint64_t seed, int entities_per_domain) {
  if (entities_per_domain < 1) throw SchemaError("entities_per_domain: must be >= 1");
  Rng rng(seed);
  std::map<std::string, std::vector<Entity>> all;
  for (const auto& dom : ontology.domains()) {
    auto& list = all[dom.name];
    for (int i = 0; i < entities_per_domain; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%03d", i);
      Entity e;
      e.id = dom.name + "-" + buf;
      e.attributes[kNameSlot] = dom.name + " " + buf;
      for (const auto& s : dom.informable) e.attributes[s.name] = s.values[rng.index(s.values.size())];
      for (const auto& s : dom.requestable) e.attributes[s] = synth_value(s, rng);
      list.push_back(std::move(e));
    }
  }
  return Database(ontology, std::move(all));
}

const SubGoal* UserGoal::find(std::string_view domain) const {
  for (const auto& g : subgoals) {
    if (g.domain == domain) return &g;
  }
  return nullptr;
}

std::vector<std::string> UserGoal::domain_names() const {
  std::vector<std::string> out;
  for (const auto& g : subgoals) out.push_back(g.domain);
  return out;
}

json UserGoal::to_json() const {
  json arr = json::array();
  for (const auto& g : subgoals) {
    arr.push_back({{"domain", g.domain},
                   {"constraints", g.constraints},
                   {"requests", g.requests},
                   {"book", g.book}});
  }
  return json{{"subgoals", arr}};
}

UserGoal UserGoal::from_json(const json& j) {
  UserGoal g;
  try {
    for (const auto& s : j.at("subgoals")) {
      SubGoal sg;
      sg.domain = s.at("domain").get<std::string>();
      sg.constraints = s.at("constraints").get<Constraints>();
      sg.requests = s.at("requests").get<std::set<std::string>>();
      sg.book = s.at("book").get<std::map<std::string, std::string>>();
      g.subgoals.push_back(std::move(sg));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("goal record: ") + e.what());
  }
  return g;
}

namespace {

constexpr int kMaxRejections = 1000;
constexpr double kDontCareProb = 0.1;
constexpr double kBookingProb = 0.5;

template <class T>
std::vector<T> pick_subset(const std::vector<T>& items, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), 0);
  rng.shuffle(idx);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  for (auto i : idx) out.push_back(items[i]);
  return out;
}

}  // namespace

UserGoal sample_goal(const Ontology& ontology, const Database& db, std::uint64_t seed,
                     const std::array<double, 3>& domain_count_weights) {
  const double wsum = domain_count_weights[0] + domain_count_weights[1] + domain_count_weights[2];
  if (std::abs(wsum - 1.0) > 1e-9) throw SchemaError("domain_count_weights: must sum to 1");
  Rng rng(seed);

  const double u = rng.uniform();
  std::size_t n_domains = 3;
  if (u < domain_count_weights[0]) {
    n_domains = 1;
  } else if (u < domain_count_weights[0] + domain_count_weights[1]) {
    n_domains = 2;
  }
  n_domains = std::min(n_domains, ontology.domain_count());

  std::vector<std::size_t> order(ontology.domain_count());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  order.resize(n_domains);

  UserGoal goal;
  for (std::size_t d : order) {
    const auto& dom = ontology.domains()[d];
    SubGoal sg;
    sg.domain = dom.name;

    bool found = false;
    for (int attempt = 0; attempt < kMaxRejections && !found; ++attempt) {
      Constraints c;
      if (!dom.informable.empty()) {
        const std::size_t k = 1 + rng.index(dom.informable.size());
        for (const auto& slot : pick_subset(dom.informable, k, rng)) {
          c[slot.name] = rng.bernoulli(kDontCareProb) ? kDontCare : slot.values[rng.index(slot.values.size())];
        }
      }
      if (db.count(dom.name, c) > 0) {
        sg.constraints = std::move(c);
        found = true;
      }
    }
    if (!found) throw SamplingExhausted("no satisfiable constraint set for domain '" + dom.name + "'");

    if (!dom.requestable.empty()) {
      const std::size_t k = 1 + rng.index(dom.requestable.size());
      for (const auto& s : pick_subset(dom.requestable, k, rng)) sg.requests.insert(s);
    }
    if (dom.bookable && rng.bernoulli(kBookingProb)) {
      for (const auto& s : dom.book_slots) {
        auto it = dom.book_values.find(s);
        const auto& vals = it == dom.book_values.end() ? kDefaultBookValues : it->second;
        sg.book[s] = vals[rng.index(vals.size())];
      }
    }
    goal.subgoals.push_back(std::move(sg));
  }
  return goal;
}

std::vector<UserGoal> sample_goal_set(const Ontology& ontology, const Database& db, std::uint64_t seed,
                                      std::size_t count, const std::array<double, 3>& domain_count_weights) {
  std::vector<UserGoal> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(sample_goal(ontology, db, derive_seed(seed, i), domain_count_weights));
  }
  return out;
}

std::string goals_to_jsonl(const std::vector<UserGoal>& goals) {
  std::string out;
  for (const auto& g : goals) {
    out += g.to_json().dump();
    out += '\n';
  }
  return out;
}

std::vector<UserGoal> goals_from_jsonl(const std::string& text) {
  std::vector<UserGoal> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(UserGoal::from_json(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("goal line: ") + e.what());
    }
  }
  return out;
}

World make_world(WorldConfig config) {
  World w;
  w.db = generate_database(config.ontology, config.seed, config.entities_per_domain);
  w.config = std::move(config);
  return w;
}

}  // namespace madpl
