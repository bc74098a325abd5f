// jtab: command-line front end.
//
// Exit codes: 0 valid, 1 invalid, 2 resource limit, 3 configuration error.
// Nothing is written to standard output on exit 3.

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "jtab/cutelim.hpp"
#include "jtab/io.hpp"
#include "jtab/oracle.hpp"
#include "jtab/prover.hpp"

namespace {

using namespace jtab;

constexpr int kValid = 0;
constexpr int kInvalid = 1;
constexpr int kResource = 2;
constexpr int kConfig = 3;

struct Config {
  std::string logic = "J";
  std::string cs_path;
  std::string format = "text";
  std::size_t max_nodes = 2'000'000;
  double max_seconds = 10.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t count = 1;
  std::size_t jobs = 1;
  std::string goal_file;
  std::string goal;
  std::string input;
};

struct ConfigFailure {
  std::string message;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigFailure{"cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LogicSpec load_logic(const Config& c) {
  try {
    return LogicSpec::parse(c.logic);
  } catch (const std::exception& e) {
    throw ConfigFailure{e.what()};
  }
}

ConstantSpecification load_spec(const Config& c, const LogicSpec& logic) {
  if (c.cs_path.empty()) return {};
  try {
    return load_cs(slurp(c.cs_path), logic);
  } catch (const ConfigError& e) {
    throw ConfigFailure{e.what()};
  } catch (const SyntaxError& e) {
    throw ConfigFailure{std::string("constant specification: ") + e.what()};
  }
}

Limits load_limits(const Config& c) {
  if (c.max_nodes == 0 || !(c.max_seconds > 0)) throw ConfigFailure{"budgets must be positive"};
  return {c.max_nodes, c.max_seconds};
}

void check_format(const Config& c) {
  if (c.format != "text" && c.format != "json" && c.format != "dot") {
    throw ConfigFailure{"unknown format " + c.format};
  }
}

Formula parse_goal_text(const std::string& text, const LogicSpec& logic) {
  try {
    Formula f = parse_formula(text);
    check_signature(f, logic);
    return f;
  } catch (const SyntaxError& e) {
    throw ConfigFailure{std::string("goal: ") + e.what()};
  } catch (const SignatureError& e) {
    throw ConfigFailure{std::string("goal: ") + e.what()};
  }
}

std::vector<Formula> load_goals(const Config& c, const LogicSpec& logic) {
  std::vector<Formula> goals;
  if (!c.goal.empty()) goals.push_back(parse_goal_text(c.goal, logic));
  if (!c.goal_file.empty()) {
    std::istringstream in(slurp(c.goal_file));
    for (std::string line; std::getline(in, line);) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      goals.push_back(parse_goal_text(line, logic));
    }
  }
  if (goals.empty() && c.seed_set) {
    for (std::size_t k = 0; k < c.count; ++k) goals.push_back(random_goal(c.seed + k, 12, logic));
  }
  if (goals.empty()) throw ConfigFailure{"no goal given"};
  return goals;
}

int exit_for(const Verdict& v) {
  switch (v.kind) {
    case VerdictKind::Valid: return kValid;
    case VerdictKind::Invalid: return kInvalid;
    case VerdictKind::ResourceOut: return kResource;
  }
  return kResource;
}

json verdict_json(const Formula& goal, const Verdict& v, const ConstantSpecification& cs) {
  json j{{"goal", render_formula(goal)}, {"verdict", to_string(v.kind)}, {"nodes_explored", v.nodes_explored}};
  if (v.valid()) j["proof"] = proof_to_json(*v.proof, cs);
  if (v.invalid()) {
    j["branch"] = branch_to_json(v.open_branch);
    if (v.model) {
      j["model"] = model_to_json(*v.model.model);
    } else {
      j["model"] = nullptr;
      j["model_status"] = "model undetermined: " + v.model.failure;
    }
  }
  if (v.kind == VerdictKind::ResourceOut) j["limit"] = v.limit;
  return j;
}

void print_verdict(const Config& c, const Formula& goal, const Verdict& v, const ConstantSpecification& cs) {
  if (c.format == "json") {
    std::cout << verdict_json(goal, v, cs).dump(2) << "\n";
    return;
  }
  if (c.format == "dot") {
    if (v.valid()) std::cout << proof_to_dot(*v.proof, cs);
    return;
  }
  std::cout << to_string(v.kind) << ": " << render_formula(goal) << "\n";
  if (v.valid()) std::cout << proof_to_text(*v.proof, cs);
  if (v.invalid()) {
    std::cout << "open branch:\n";
    for (const auto& sf : v.open_branch) std::cout << "  " << render_signed(sf) << "\n";
    if (v.model) {
      std::cout << "model: " << model_to_json(*v.model.model).dump() << "\n";
    } else {
      std::cout << "model undetermined: " << v.model.failure << "\n";
    }
  }
  if (v.kind == VerdictKind::ResourceOut) std::cout << "limit: " << v.limit << "\n";
}

std::vector<Verdict> run_all(const std::vector<Formula>& goals, const LogicSpec& logic,
                             const ConstantSpecification& cs, const Limits& limits, std::size_t jobs) {
  std::vector<Verdict> out(goals.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k; (k = next++) < goals.size();) out[k] = prove(goals[k], logic, cs, limits);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::max<std::size_t>(1, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

enum class ProveMode { Full, Quiet, Model };

int cmd_prove(const Config& c, ProveMode mode) {
  check_format(c);
  LogicSpec logic = load_logic(c);
  ConstantSpecification cs = load_spec(c, logic);
  Limits limits = load_limits(c);
  auto goals = load_goals(c, logic);
  auto verdicts = run_all(goals, logic, cs, limits, c.jobs);
  int code = kValid;
  for (const auto& v : verdicts) code = std::max(code, exit_for(v));
  if (mode == ProveMode::Quiet) return code;
  if (goals.size() > 1) {
    for (std::size_t k = 0; k < goals.size(); ++k) {
      std::cout << to_string(verdicts[k].kind) << "\t" << render_formula(goals[k]) << "\n";
    }
    return code;
  }
  const Verdict& v = verdicts[0];
  if (mode == ProveMode::Model) {
    if (v.invalid() && v.model) {
      std::cout << model_to_json(*v.model.model).dump(2) << "\n";
    } else if (v.invalid()) {
      std::cout << "model undetermined: " << v.model.failure << "\n";
    } else {
      std::cout << to_string(v.kind) << "\n";
    }
    return code;
  }
  print_verdict(c, goals[0], v, cs);
  return code;
}

int cmd_validate_cs(const Config& c) {
  LogicSpec logic = load_logic(c);
  if (c.cs_path.empty()) throw ConfigFailure{"--cs is required"};
  ConstantSpecification cs;
  try {
    cs = parse_cs(slurp(c.cs_path));
  } catch (const SyntaxError& e) {
    throw ConfigFailure{std::string("constant specification: ") + e.what()};
  }
  auto report = validate_cs(cs, logic);
  if (!report.empty()) {
    std::string msg = "invalid constant specification:";
    for (const auto& v : report) msg += "\n  " + render_formula(v.entry) + ": " + v.reason;
    throw ConfigFailure{msg};
  }
  std::cout << "ok: " << cs.entries().size() << " entries valid for " << logic.name() << "\n";
  return kValid;
}

HilbertProof load_hilbert(const Config& c) {
  if (c.input.empty()) throw ConfigFailure{"a Hilbert proof file is required"};
  try {
    return parse_hilbert(slurp(c.input));
  } catch (const InvalidProof& e) {
    throw ConfigFailure{e.what()};
  }
}

Tableau compile(const Config& c, const HilbertProof& hp, const LogicSpec& logic, const ConstantSpecification& cs) {
  if (hp.lines.empty()) throw ConfigFailure{"empty Hilbert proof"};
  try {
    return hilbert_to_tableau(hp, hp.lines.size() - 1, logic, cs);
  } catch (const InvalidProof& e) {
    throw ConfigFailure{e.what()};
  }
}

void print_tableau(const Config& c, const Tableau& t, const ConstantSpecification& cs) {
  if (c.format == "json") {
    std::cout << proof_to_json(t, cs).dump(2) << "\n";
  } else if (c.format == "dot") {
    std::cout << proof_to_dot(t, cs);
  } else {
    std::cout << proof_to_text(t, cs);
  }
}

int cmd_compile(const Config& c) {
  check_format(c);
  LogicSpec logic = load_logic(c);
  ConstantSpecification cs = load_spec(c, logic);
  Tableau t = compile(c, load_hilbert(c), logic, cs);
  print_tableau(c, t, cs);
  return kValid;
}

int cmd_cutelim(const Config& c) {
  LogicSpec logic = load_logic(c);
  ConstantSpecification cs = load_spec(c, logic);
  HilbertProof hp = load_hilbert(c);
  Tableau t = compile(c, hp, logic, cs);
  CutElimResult r;
  try {
    r = eliminate_cuts(t, logic, cs);
  } catch (const std::exception& e) {
    std::cerr << "cut elimination failed: " << e.what() << "\n";
    return kResource;
  }
  for (const auto& e : r.trace) std::cout << render_trace_line(e) << "\n";
  std::cout << proof_to_json(r.tableau, cs).dump(2) << "\n";
  auto ok = check_proof(r.tableau, hp.lines.back().formula, logic, cs);
  if (!ok) {
    std::cerr << "result rejected by the checker: " << ok.reason << "\n";
    return kResource;
  }
  return kValid;
}

int cmd_audit(const Config& c) {
  LogicSpec logic = load_logic(c);
  ConstantSpecification cs = load_spec(c, logic);
  if (c.input.empty()) throw ConfigFailure{"a proof JSON file is required"};
  Tableau t;
  try {
    json j = json::parse(slurp(c.input));
    if (j.contains("proof")) j = j["proof"];
    t = proof_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigFailure{std::string("proof JSON: ") + e.what()};
  } catch (const FormatError& e) {
    throw ConfigFailure{e.what()};
  }
  const Formula goal = t.root.formula.body;
  auto audit = audit_subformula_property(t, goal, cs);
  auto check = check_proof(t, goal, logic, cs);
  std::cout << "subformula property: " << (audit ? "accept" : "reject: " + audit.reason) << "\n";
  std::cout << "proof check: " << (check ? "accept" : "reject: " + check.reason) << "\n";
  return audit && check ? kValid : kInvalid;
}

int cmd_project(const Config& c) {
  LogicSpec logic = load_logic(c);
  ModalLogic ml;
  try {
    ml = modal_counterpart(logic);
  } catch (const UnsupportedLogic& e) {
    throw ConfigFailure{e.what()};
  }
  auto goals = load_goals(c, logic);
  int code = kValid;
  for (const auto& g : goals) {
    ModalFormula m = forgetful_projection(g);
    bool valid = modal_prove(m, ml);
    if (!valid) code = kInvalid;
    std::cout << render_modal(m) << "\t" << to_string(ml) << "\t" << (valid ? "valid" : "invalid") << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analytic tableau prover for justification logics"};
  app.require_subcommand(1);
  Config cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--logic", cfg.logic, "J with suffixes in order T, D, 4, B, 5 (LP = JT4)");
    sub->add_option("--cs", cfg.cs_path, "constant specification file");
    sub->add_option("--format", cfg.format, "text | json | dot");
    sub->add_option("--max-nodes", cfg.max_nodes, "node budget");
    sub->add_option("--max-seconds", cfg.max_seconds, "time budget");
  };
  auto goal_opts = [&](CLI::App* sub) {
    sub->add_option("goal", cfg.goal, "goal formula");
    sub->add_option("--goal-file", cfg.goal_file, "file with one goal per line");
    sub->add_option("--seed", cfg.seed, "generate random goals from this seed")->each([&](const std::string&) {
      cfg.seed_set = true;
    });
    sub->add_option("--count", cfg.count, "number of random goals");
    sub->add_option("--jobs", cfg.jobs, "worker threads for several goals");
  };

  auto* prove = app.add_subcommand("prove", "decide a goal and print the proof or countermodel");
  auto* decide = app.add_subcommand("decide", "decide a goal; exit code only");
  auto* counter = app.add_subcommand("countermodel", "print a countermodel for an invalid goal");
  auto* vcs = app.add_subcommand("validate-cs", "check a constant specification");
  auto* comp = app.add_subcommand("compile-hilbert", "translate a Hilbert proof into a tableau with cuts");
  auto* cut = app.add_subcommand("cutelim", "compile a Hilbert proof and eliminate its cuts");
  auto* aud = app.add_subcommand("audit", "check a proof JSON file");
  auto* proj = app.add_subcommand("project", "forgetful projection and modal validity check");
  for (auto* s : {prove, decide, counter, proj}) {
    common(s);
    goal_opts(s);
  }
  for (auto* s : {vcs, comp, cut, aud}) common(s);
  for (auto* s : {comp, cut, aud}) s->add_option("file", cfg.input, "input file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kConfig;
  }

  try {
    if (*prove) return cmd_prove(cfg, ProveMode::Full);
    if (*decide) return cmd_prove(cfg, ProveMode::Quiet);
    if (*counter) return cmd_prove(cfg, ProveMode::Model);
    if (*vcs) return cmd_validate_cs(cfg);
    if (*comp) return cmd_compile(cfg);
    if (*cut) return cmd_cutelim(cfg);
    if (*aud) return cmd_audit(cfg);
    if (*proj) return cmd_project(cfg);
  } catch (const ConfigFailure& e) {
    std::cerr << "error: " << e.message << "\n";
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
