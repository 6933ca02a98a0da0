#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "madpl/errors.hpp"
#include "madpl/evaluation.hpp"
#include "madpl/report.hpp"
#include "madpl/rule_agents.hpp"
#include "madpl/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace madpl;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitMissing = 3;
constexpr int kExitCsv = 4;

std::string lab_root() {
  const char* env = std::getenv("MADPL_LAB_DIR");
  return env && *env ? env : "lab";
}

std::string lab_path(const std::string& name) { return (fs::path(lab_root()) / name).string(); }

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string git_describe() {
  std::string out;
  if (FILE* p = popen("git describe --always --dirty 2>/dev/null", "r")) {
    char buf[128];
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    pclose(p);
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out.empty() ? "unknown" : out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

fs::path require(const fs::path& path) {
  if (!fs::exists(path)) throw MissingArtifact("missing artifact '" + path.string() + "'");
  return path;
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_text_file(require(path).string()));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// Collects what a command did; written last as <out>/manifest.json.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;  // fully resolved, replayable
  json config = json::object();
  json seeds = json::object();
  std::vector<std::string> outputs;
  std::string started = utc_now();

  void write(const fs::path& dir) const {
    json j;
    j["command"] = command;
    j["argv"] = argv;
    j["config"] = config;
    j["seeds"] = seeds;
    j["git_describe"] = git_describe();
    j["started_at"] = started;
    j["finished_at"] = utc_now();
    j["outputs"] = outputs;
    write_file(dir / "manifest.json", j.dump(2) + "\n");
  }
};

fs::path prepare_out(const std::string& out) {
  fs::create_directories(out);
  return fs::path(out);
}

void check_workers(int workers) {
  if (workers != 1) throw SchemaError("workers: only single-worker execution is supported");
}

struct LoadedWorld {
  World world;
  std::unique_ptr<StateLayout> layout;
};

LoadedWorld load_world_dir(const fs::path& dir) {
  LoadedWorld w{make_world(load_world_config(read_text_file(require(dir / "world.json").string()))), nullptr};
  w.layout = std::make_unique<StateLayout>(w.world.ontology());
  return w;
}

std::vector<UserGoal> load_goals(const fs::path& path) {
  return goals_from_jsonl(read_text_file(require(path).string()));
}

DialogPolicy load_policy(const fs::path& dir, Role role, const StateLayout& layout) {
  const fs::path path = require(dir / (role == Role::user ? "user.bin" : "system.bin"));
  DialogPolicy p(role, layout.space(role).dim(), load_mlp(path.string()));
  if (p.state_dim() != layout.dim(role))
    throw DimensionMismatch(path.string() + ": state size does not match the world");
  return p;
}

void save_policies(const fs::path& dir, const DialogPolicy& system, const DialogPolicy& user) {
  fs::create_directories(dir);
  save_mlp((dir / "system.bin").string(), system.net());
  save_mlp((dir / "user.bin").string(), user.net());
}

// ---- gen-world ----

struct GenWorldArgs {
  std::string config = MADPL_DEFAULT_CONFIG;
  std::int64_t seed = -1;
  int goals = 200;
  std::string out;
};

void cmd_gen_world(const GenWorldArgs& a) {
  const std::string out_s = a.out.empty() ? lab_path("world") : a.out;
  if (!fs::exists(a.config)) throw SchemaError("config: file '" + a.config + "' not found");
  json cfg;
  try {
    cfg = json::parse(read_text_file(a.config));
  } catch (const json::parse_error& e) {
    throw ParseError(a.config + ": " + e.what());
  }
  if (a.seed >= 0) cfg["seed"] = a.seed;
  if (a.goals < 1) throw SchemaError("goals: must be positive");
  WorldConfig wc = load_world_config(cfg.dump());
  const World world = make_world(wc);
  const fs::path out = prepare_out(out_s);

  write_file(out / "world.json", cfg.dump(2) + "\n");
  write_file(out / "ontology.json", world.ontology().to_json().dump(2) + "\n");
  write_file(out / "db.json", world.db.to_json().dump(2) + "\n");
  const auto goals = sample_goal_set(world.ontology(), world.db, derive_seed(wc.seed, 1),
                                     static_cast<std::size_t>(a.goals), wc.domain_count_weights);
  write_file(out / "goals_eval.jsonl", goals_to_jsonl(goals));
  const StateLayout layout(world.ontology());
  write_file(out / "dims.json", json{{"user_state", layout.user_dim()},
                                     {"system_state", layout.system_dim()},
                                     {"user_acts", layout.user_space().dim()},
                                     {"system_acts", layout.system_space().dim()}}
                                    .dump(2) + "\n");
  write_file(out / "state-layout.txt", layout.describe());

  Manifest m;
  m.command = "gen-world";
  m.argv = {"gen-world", "--config", fs::absolute(a.config).string(), "--seed", std::to_string(wc.seed), "--goals",
            std::to_string(a.goals), "--out", out_s};
  m.config = cfg;
  m.seeds = {{"world", wc.seed}, {"eval_goals", derive_seed(wc.seed, 1)}};
  m.outputs = {"world.json", "ontology.json", "db.json", "goals_eval.jsonl", "dims.json", "state-layout.txt"};
  m.write(out);
  std::cout << "world: " << layout.user_dim() << " user / " << layout.system_dim() << " system state features, "
            << a.goals << " evaluation goals -> " << out_s << "\n";
}

// ---- gen-corpus ----

struct GenCorpusArgs {
  std::string world;
  int dialogs = 500;
  std::uint64_t seed = 1000;
  int max_turns = 20;
  std::string out;
};

void cmd_gen_corpus(const GenCorpusArgs& a) {
  const std::string world_s = a.world.empty() ? lab_path("world") : a.world;
  const std::string out_s = a.out.empty() ? lab_path("corpus") : a.out;
  if (a.dialogs < 1) throw SchemaError("dialogs: must be positive");
  const LoadedWorld w = load_world_dir(world_s);
  const Corpus corpus = generate_corpus(w.world, *w.layout, a.dialogs, a.seed, a.max_turns);
  const fs::path out = prepare_out(out_s);
  write_corpus((out / "corpus.tsv").string(), corpus);

  int ok = 0;
  for (auto s : corpus.dialog_success) ok += s;
  Manifest m;
  m.command = "gen-corpus";
  m.argv = {"gen-corpus", "--world", world_s, "--dialogs", std::to_string(a.dialogs), "--seed", std::to_string(a.seed),
            "--max-turns", std::to_string(a.max_turns), "--out", out_s};
  m.config = {{"world", world_s}, {"dialogs", a.dialogs}, {"max_turns", a.max_turns}};
  m.seeds = {{"corpus", a.seed}};
  m.outputs = {"corpus.tsv"};
  m.write(out);
  std::cout << "corpus: " << a.dialogs << " dialogs, " << corpus.records.size() << " records, rule success "
            << static_cast<double>(ok) / a.dialogs << " -> " << out_s << "\n";
}

// ---- pretrain ----

struct PretrainArgs {
  std::string world;
  std::string corpus;
  int epochs = 20;
  std::uint64_t seed = 1;
  std::string out;
};

void cmd_pretrain(const PretrainArgs& a) {
  const std::string world_s = a.world.empty() ? lab_path("world") : a.world;
  const std::string corpus_s = a.corpus.empty() ? lab_path("corpus") : a.corpus;
  const std::string out_s = a.out.empty() ? lab_path("sl") : a.out;
  if (a.epochs < 1) throw SchemaError("epochs: must be positive");
  const LoadedWorld w = load_world_dir(world_s);
  const Corpus corpus = read_corpus(require(fs::path(corpus_s) / "corpus.tsv").string());
  const PretrainedPair sl = pretrain_pair(*w.layout, corpus, a.epochs, a.seed);
  const fs::path out = prepare_out(out_s);
  save_policies(out, sl.system, sl.user);

  std::string log = "epoch,system_loss,system_f1,user_loss,user_f1\n";
  char buf[160];
  for (int e = 0; e < a.epochs; ++e) {
    std::snprintf(buf, sizeof buf, "%d,%.6f,%.6f,%.6f,%.6f\n", e + 1, sl.system_log.train_loss[e],
                  sl.system_log.heldout_f1[e], sl.user_log.train_loss[e], sl.user_log.heldout_f1[e]);
    log += buf;
  }
  write_file(out / "pretrain.csv", log);

  Manifest m;
  m.command = "pretrain";
  m.argv = {"pretrain", "--world", world_s, "--corpus", corpus_s, "--epochs", std::to_string(a.epochs), "--seed",
            std::to_string(a.seed), "--out", out_s};
  m.config = {{"epochs", a.epochs}, {"batch_size", 32}, {"lr", 1e-3}, {"beta_system", 2.5}, {"beta_user", 4.0}};
  m.seeds = {{"pretrain", a.seed}, {"init", derive_seed(a.seed, 21)}};
  m.outputs = {"system.bin", "user.bin", "pretrain.csv"};
  m.write(out);
  std::cout << "pretrain: held-out micro-F1 system " << sl.system_log.heldout_f1.back() << ", user "
            << sl.user_log.heldout_f1.back() << " -> " << out_s << "\n";
}

// ---- train ----

struct TrainArgs {
  std::string algo = "madpl";
  std::string world;
  std::string init;
  std::string config;
  int episodes = -1;
  std::int64_t seed = -1;
  int checkpoint_every = 200;
  int workers = 1;
  std::string out;
};

void cmd_train(const TrainArgs& a) {
  check_workers(a.workers);
  const Algo algo = parse_algo(a.algo);
  TrainConfig cfg = a.config.empty() ? TrainConfig{} : TrainConfig::from_json(read_json(a.config));
  if (a.episodes >= 0) cfg.episodes = a.episodes;
  if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
  if (cfg.episodes < 1) throw SchemaError("episodes: must be positive");
  if (a.checkpoint_every < 1) throw SchemaError("checkpoint-every: must be positive");

  const std::string world_s = a.world.empty() ? lab_path("world") : a.world;
  const std::string init_s = a.init.empty() ? lab_path("sl") : a.init;
  const std::string out_s =
      a.out.empty() ? lab_path("train-" + a.algo + "-s" + std::to_string(cfg.seed)) : a.out;
  const LoadedWorld w = load_world_dir(world_s);
  DialogPolicy system = load_policy(init_s, Role::system, *w.layout);
  DialogPolicy user = load_policy(init_s, Role::user, *w.layout);
  const fs::path out = prepare_out(out_s);

  std::vector<std::string> checkpoints;
  const auto hook = [&](const MetricsRow& row, const DialogPolicy& s, const DialogPolicy& u) {
    if (row.iteration % a.checkpoint_every == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "iter-%06d", row.iteration);
      save_policies(out / "checkpoints" / name, s, u);
      checkpoints.push_back(std::string("checkpoints/") + name);
    }
    if (row.iteration % 100 == 0)
      std::cout << "iteration " << row.iteration << "  episodes " << row.episodes << "  success " << row.success
                << "  L_V " << row.L_V << std::endl;
  };
  const TrainResult res = train(algo, cfg, w.world, *w.layout, std::move(system), std::move(user), hook);

  write_file(out / "metrics.csv", metrics_to_csv(res.log));
  save_policies(out, res.system, res.user);
  Manifest m;
  m.outputs = {"metrics.csv", "system.bin", "user.bin"};
  if (res.hvn) {
    save_hvn((out / "critic").string(), *res.hvn);
    m.outputs.push_back("critic/");
  }
  m.outputs.insert(m.outputs.end(), checkpoints.begin(), checkpoints.end());

  // The resolved config is passed back on replay so every setting is pinned.
  const fs::path cfg_path = out / "train_config.json";
  write_file(cfg_path, cfg.to_json().dump(2) + "\n");
  m.outputs.push_back("train_config.json");
  m.command = "train";
  m.argv = {"train", "--algo", std::string(algo_name(algo)), "--world", world_s, "--init", init_s,
            "--config", cfg_path.string(), "--checkpoint-every", std::to_string(a.checkpoint_every),
            "--out", out_s};
  m.config = cfg.to_json();
  m.config["algo"] = algo_name(algo);
  m.config["init"] = init_s;
  m.config["world"] = world_s;
  m.seeds = {{"train", cfg.seed},
             {"goals", derive_seed(cfg.seed, 11)},
             {"rollout", derive_seed(cfg.seed, 12)},
             {"critic", derive_seed(cfg.seed, 13)}};
  m.write(out);
  std::cout << algo_name(algo) << ": " << res.log.size() << " iterations, " << res.log.back().episodes
            << " episodes -> " << out_s << "\n";
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string pair = "trained:trained";
  std::string world;
  std::string trained;
  std::string sl;
  std::string goals;
  std::uint64_t seed = 77;
  int max_turns = 20;
  int workers = 1;
  std::string out;
};

void cmd_evaluate(const EvaluateArgs& a) {
  check_workers(a.workers);
  const auto colon = a.pair.find(':');
  if (colon == std::string::npos) throw SchemaError("pair: expected <user>:<system>, got '" + a.pair + "'");
  const std::string user_tok = a.pair.substr(0, colon);
  const std::string sys_tok = a.pair.substr(colon + 1);

  const std::string world_s = a.world.empty() ? lab_path("world") : a.world;
  const std::string trained_s = a.trained.empty() ? lab_path("train-madpl-s1") : a.trained;
  const std::string sl_s = a.sl.empty() ? lab_path("sl") : a.sl;
  const std::string goals_s = a.goals.empty() ? (fs::path(world_s) / "goals_eval.jsonl").string() : a.goals;
  std::string out_name = a.pair;
  for (char& c : out_name)
    if (c == ':') c = '_';
  const std::string out_s = a.out.empty() ? lab_path("eval-" + out_name) : a.out;

  const LoadedWorld w = load_world_dir(world_s);
  const auto goals = load_goals(goals_s);
  const auto policy_dir = [&](const std::string& tok) -> std::string {
    if (tok == "trained") return trained_s;
    if (tok == "sl") return sl_s;
    throw SchemaError("pair: unknown agent '" + tok + "'");
  };

  std::vector<DialogPolicy> held;
  held.reserve(2);
  std::unique_ptr<UserAgent> user;
  if (user_tok == "rule-user" || user_tok == "rule") {
    user = std::make_unique<AgendaUser>(*w.layout, w.world.db);
  } else {
    held.push_back(load_policy(policy_dir(user_tok), Role::user, *w.layout));
    user = std::make_unique<PolicyUser>(held.back(), *w.layout, DecodeMode::threshold);
  }
  std::unique_ptr<SystemAgent> system;
  if (sys_tok == "rule-sys" || sys_tok == "rule") {
    system = std::make_unique<RuleSystem>(*w.layout, w.world.db);
  } else {
    held.push_back(load_policy(policy_dir(sys_tok), Role::system, *w.layout));
    system = std::make_unique<PolicySystem>(held.back(), DecodeMode::threshold);
  }

  const EvalReport report = evaluate(w.world, *w.layout, *user, *system, goals, a.seed, a.max_turns);
  const fs::path out = prepare_out(out_s);
  write_file(out / "per_goal.csv", report.to_csv());
  write_file(out / "slices.csv", report.slices_csv());
  const std::string table = summary_table({{a.pair, report.overall}});
  write_file(out / "summary.txt", table);

  Manifest m;
  m.command = "evaluate";
  m.argv = {"evaluate", "--pair", a.pair, "--world", world_s, "--trained", trained_s, "--sl", sl_s,
            "--goals", goals_s, "--seed", std::to_string(a.seed), "--max-turns", std::to_string(a.max_turns),
            "--out", out_s};
  m.config = {{"pair", a.pair}, {"user", user_tok}, {"system", sys_tok}, {"goals", goals_s},
              {"goal_count", goals.size()}, {"max_turns", a.max_turns}};
  if (user_tok == "trained" || sys_tok == "trained") m.config["trained"] = trained_s;
  if (user_tok == "sl" || sys_tok == "sl") m.config["sl"] = sl_s;
  m.seeds = {{"evaluate", a.seed}};
  m.outputs = {"per_goal.csv", "slices.csv", "summary.txt"};
  m.write(out);
  std::cout << table;
}

// ---- report ----

struct ReportArgs {
  std::vector<std::string> runs;
  int bin = 100;
  int window = 500;
  std::string out;
};

void cmd_report(const ReportArgs& a) {
  if (a.runs.empty()) throw SchemaError("runs: at least one run directory is required");
  const std::string out_s = a.out.empty() ? lab_path("report") : a.out;
  std::map<std::string, RunGroup> groups;
  std::vector<std::string> order;
  for (const auto& dir : a.runs) {
    const fs::path d(dir);
    const auto rows = metrics_from_csv(read_text_file(require(d / "metrics.csv").string()));
    if (rows.empty()) throw MalformedCsv((d / "metrics.csv").string() + ": no rows");
    std::string label = d.filename().string();
    if (fs::exists(d / "manifest.json")) {
      const json man = read_json(d / "manifest.json");
      if (man.contains("config") && man["config"].contains("algo")) label = man["config"]["algo"].get<std::string>();
    }
    if (!groups.count(label)) order.push_back(label);
    groups[label].label = label;
    groups[label].runs.push_back(rows);
  }

  std::vector<std::pair<std::string, std::string>> curves;
  std::vector<RunGroup> table_groups;
  for (const auto& label : order) {
    curves.emplace_back("curves_" + label + ".csv", merge_curves_csv(groups[label].runs, a.bin));
    table_groups.push_back(groups[label]);
  }
  const std::string table = comparison_table(table_groups, a.window);

  const fs::path out = prepare_out(out_s);
  Manifest m;
  for (const auto& [name, text] : curves) {
    write_file(out / name, text);
    m.outputs.push_back(name);
  }
  write_file(out / "table.txt", table);
  m.outputs.push_back("table.txt");
  m.command = "report";
  m.argv = {"report", "--bin", std::to_string(a.bin), "--window", std::to_string(a.window), "--out", out_s, "--runs"};
  m.argv.insert(m.argv.end(), a.runs.begin(), a.runs.end());
  m.config = {{"runs", a.runs}, {"bin", a.bin}, {"window", a.window}};
  m.write(out);
  std::cout << table;
}

int run(int argc, char** argv);

// ---- replay ----

struct ReplayArgs {
  std::string manifest;
  std::string out;
};

int cmd_replay(const ReplayArgs& a) {
  const json man = read_json(a.manifest);
  if (!man.contains("argv") || !man["argv"].is_array()) throw SchemaError(a.manifest + ": argv: missing");
  std::vector<std::string> args{"madpl"};
  for (const auto& x : man["argv"]) args.push_back(x.get<std::string>());
  if (!a.out.empty()) {
    bool replaced = false;
    for (std::size_t i = 1; i + 1 < args.size(); ++i) {
      if (args[i] == "--out") {
        args[i + 1] = a.out;
        replaced = true;
      }
    }
    if (!replaced) throw SchemaError(a.manifest + ": argv: no --out to redirect");
  }
  std::vector<char*> ptrs;
  for (auto& s : args) ptrs.push_back(s.data());
  return run(static_cast<int>(ptrs.size()), ptrs.data());
}

int run(int argc, char** argv) {
  CLI::App app{"Multi-agent dialog policy learning lab"};
  app.require_subcommand(1);

  GenWorldArgs gw;
  auto* c_world = app.add_subcommand("gen-world", "Generate ontology, database and evaluation goals");
  c_world->add_option("--config", gw.config, "World config JSON")->capture_default_str();
  c_world->add_option("--seed", gw.seed, "Override the config seed");
  c_world->add_option("--goals", gw.goals, "Size of the fixed evaluation goal set")->capture_default_str();
  c_world->add_option("--out", gw.out, "Output directory (default $MADPL_LAB_DIR/world)");

  GenCorpusArgs gc;
  auto* c_corpus = app.add_subcommand("gen-corpus", "Generate a rule-agent dialog corpus");
  c_corpus->add_option("--world", gc.world, "World directory");
  c_corpus->add_option("--dialogs", gc.dialogs)->capture_default_str();
  c_corpus->add_option("--seed", gc.seed)->capture_default_str();
  c_corpus->add_option("--max-turns", gc.max_turns)->capture_default_str();
  c_corpus->add_option("--out", gc.out, "Output directory (default $MADPL_LAB_DIR/corpus)");

  PretrainArgs pt;
  auto* c_pre = app.add_subcommand("pretrain", "Behavior-clone both policies from a corpus");
  c_pre->add_option("--world", pt.world, "World directory");
  c_pre->add_option("--corpus", pt.corpus, "Corpus directory");
  c_pre->add_option("--epochs", pt.epochs)->capture_default_str();
  c_pre->add_option("--seed", pt.seed)->capture_default_str();
  c_pre->add_option("--out", pt.out, "Output directory (default $MADPL_LAB_DIR/sl)");

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train dialog policies with reinforcement learning");
  c_train->add_option("--algo", tr.algo)
      ->check(CLI::IsMember({"madpl", "rl-sys", "rl-user", "crl", "iterdpl"}))
      ->capture_default_str();
  c_train->add_option("--world", tr.world, "World directory");
  c_train->add_option("--init", tr.init, "Directory holding system.bin and user.bin (default $MADPL_LAB_DIR/sl)");
  c_train->add_option("--config", tr.config, "Training config JSON");
  c_train->add_option("--episodes", tr.episodes, "Override the episode budget");
  c_train->add_option("--seed", tr.seed, "Override the training seed");
  c_train->add_option("--checkpoint-every", tr.checkpoint_every, "Iterations between checkpoints")
      ->capture_default_str();
  c_train->add_option("--workers", tr.workers)->capture_default_str();
  c_train->add_option("--out", tr.out, "Output directory (default $MADPL_LAB_DIR/train-<algo>-s<seed>)");

  EvaluateArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "Evaluate a user/system pair on the fixed goal set");
  c_eval->add_option("--pair", ev.pair, "<user>:<system>, each one of trained, sl, rule-user / rule-sys")
      ->capture_default_str();
  c_eval->add_option("--world", ev.world, "World directory");
  c_eval->add_option("--trained", ev.trained, "Trained policy directory");
  c_eval->add_option("--sl", ev.sl, "Pretrained policy directory");
  c_eval->add_option("--goals", ev.goals, "Goal set (default <world>/goals_eval.jsonl)");
  c_eval->add_option("--seed", ev.seed)->capture_default_str();
  c_eval->add_option("--max-turns", ev.max_turns)->capture_default_str();
  c_eval->add_option("--workers", ev.workers)->capture_default_str();
  c_eval->add_option("--out", ev.out, "Output directory (default $MADPL_LAB_DIR/eval-<pair>)");

  ReportArgs rp;
  auto* c_report = app.add_subcommand("report", "Merge training runs into curves and a comparison table");
  c_report->add_option("--runs", rp.runs, "Training run directories")->required();
  c_report->add_option("--bin", rp.bin, "Curve bin width in episodes")->capture_default_str();
  c_report->add_option("--window", rp.window, "Final window for the table, in episodes")->capture_default_str();
  c_report->add_option("--out", rp.out, "Output directory (default $MADPL_LAB_DIR/report)");

  ReplayArgs rr;
  auto* c_replay = app.add_subcommand("replay", "Re-run a command from its manifest");
  c_replay->add_option("--manifest", rr.manifest)->required();
  c_replay->add_option("--out", rr.out, "Write to this directory instead of the recorded one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*c_world) cmd_gen_world(gw);
  else if (*c_corpus) cmd_gen_corpus(gc);
  else if (*c_pre) cmd_pretrain(pt);
  else if (*c_train) cmd_train(tr);
  else if (*c_eval) cmd_evaluate(ev);
  else if (*c_report) cmd_report(rp);
  else if (*c_replay) return cmd_replay(rr);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const MissingArtifact& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMissing;
  } catch (const MalformedCsv& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCsv;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DimensionMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
