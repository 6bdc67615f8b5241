// jseq: prover and countermodel builder for justification and
// modal-justification logics, with proof/model checkers over the JSON formats.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "jseq/calculus.hpp"
#include "jseq/logic.hpp"
#include "jseq/models.hpp"
#include "jseq/parse.hpp"
#include "jseq/search.hpp"

namespace {

constexpr int kExitDerivable = 0;
constexpr int kExitNotDerivable = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;

struct RunConfig {
  std::string logic;  // empty: default J (or the model's own logic)
  std::string cs_path;
  long fuel = -1;  // -1: budget default (or JSEQ_FUEL)
  bool serial_once = false;
  bool fk_mode = false;
  std::string output = "text";
  bool budget_report = false;
};

void add_common_flags(CLI::App* cmd, RunConfig& run) {
  cmd->add_option("--logic", run.logic, "logic preset (J, JT, LP, S4, KJ, S4LP, ...)");
  cmd->add_option("--cs", run.cs_path, "constant specification file");
  cmd->add_option("--fuel", run.fuel, "maximum number of backward rule applications");
  cmd->add_flag("--serial-once", run.serial_once,
                "apply (Ser) only to labels without a successor");
  cmd->add_flag("--fk", run.fk_mode, "replace (Ser) by the E(t,false) initial sequent");
  cmd->add_option("--output", run.output, "output format: text, json or latex")
      ->check(CLI::IsMember({"text", "json", "latex"}));
  cmd->add_flag("--budget-report", run.budget_report, "print the computed search budgets");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

jseq::LogicConfig make_config(const RunConfig& run) {
  auto cfg = jseq::logic_preset(run.logic.empty() ? "J" : run.logic);
  if (!cfg) throw std::runtime_error("unknown logic '" + run.logic + "'");
  if (run.fk_mode) cfg->seriality_mode = jseq::SerialityMode::AxiomEBot;
  if (auto err = cfg->validate()) throw std::runtime_error("invalid configuration: " + *err);
  return *cfg;
}

jseq::ConstantSpec load_cs(const RunConfig& run, const jseq::LogicConfig& cfg) {
  jseq::ConstantSpec cs;
  if (!run.cs_path.empty()) cs = jseq::parse_cs_file(read_file(run.cs_path));
  auto report = jseq::validate_cs(cfg, cs);
  if (!report.ok()) {
    std::string msg = "invalid constant specification:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw std::runtime_error(msg);
  }
  return cs;
}

// a bare formula A becomes  => w |= A  with fresh label w
jseq::Sequent parse_goal(const std::string& text) {
  if (text.find("=>") != std::string::npos) return jseq::parse_sequent(text);
  jseq::Sequent s;
  s.insert_succ(jseq::SequentItem::labeled("w", jseq::parse_formula(text)));
  return s;
}

jseq::SearchOptions make_options(const RunConfig& run) {
  jseq::SearchOptions opts;
  opts.serial_once = run.serial_once;
  if (run.fuel >= 0) {
    opts.fuel = run.fuel;
  } else if (const char* env = std::getenv("JSEQ_FUEL")) {
    opts.fuel = std::strtol(env, nullptr, 10);
  }
  return opts;
}

nlohmann::ordered_json budgets_json(const jseq::SearchBudget& b) {
  nlohmann::ordered_json j;
  j["l"] = b.l;
  j["r"] = b.r;
  j["e"] = b.e;
  j["n_colon"] = b.n_colon;
  j["p_colon"] = b.p_colon;
  j["n_box"] = b.n_box;
  j["p_box"] = b.p_box;
  j["n_plus"] = b.n_plus;
  j["n_dot"] = b.n_dot;
  j["n_bang"] = b.n_bang;
  j["cs_size"] = b.cs_size;
  j["enforce_r_caps"] = b.enforce_r_caps;
  nlohmann::ordered_json caps = nlohmann::ordered_json::object();
  for (const auto& [rule, cap] : b.rule_caps) caps[rule] = cap;
  j["rule_caps"] = caps;
  nlohmann::ordered_json rc = nlohmann::ordered_json::object();
  for (const auto& [f, cap] : b.rcolon_counters) rc[jseq::to_string(f)] = cap.cap;
  j["rcolon_caps"] = rc;
  nlohmann::ordered_json rb = nlohmann::ordered_json::object();
  for (const auto& [f, cap] : b.rbox_counters) rb[jseq::to_string(f)] = cap.cap;
  j["rbox_caps"] = rb;
  return j;
}

nlohmann::ordered_json stats_json(const jseq::SearchStats& s) {
  nlohmann::ordered_json j;
  j["fuel_used"] = s.fuel_used;
  j["branches"] = s.branches;
  j["stage_passes"] = s.stage_passes;
  nlohmann::ordered_json apps = nlohmann::ordered_json::object();
  for (const auto& [rule, count] : s.stage_applications) apps[rule] = count;
  j["stage_applications"] = apps;
  return j;
}

int cmd_prove(const std::string& goal_text, const RunConfig& run) {
  jseq::LogicConfig cfg = make_config(run);
  jseq::ConstantSpec cs = load_cs(run, cfg);
  jseq::Sequent goal = parse_goal(goal_text);
  jseq::SearchResult result = jseq::search(cfg, cs, goal, make_options(run));

  if (run.output == "json") {
    nlohmann::ordered_json j;
    switch (result.status) {
      case jseq::SearchStatus::Derivable:
        j["status"] = "derivable";
        j["derivation"] = nlohmann::ordered_json::parse(derivation_to_json(*result.derivation));
        break;
      case jseq::SearchStatus::NotDerivable:
        j["status"] = "not_derivable";
        j["model"] = nlohmann::ordered_json::parse(model_to_json(*result.model));
        break;
      case jseq::SearchStatus::Unknown:
        j["status"] = "unknown";
        j["reason"] = result.unknown_reason;
        break;
    }
    j["budgets"] = budgets_json(result.budget);
    j["stats"] = stats_json(result.stats);
    std::cout << j.dump(2) << "\n";
  } else {
    switch (result.status) {
      case jseq::SearchStatus::Derivable:
        if (run.output == "latex") {
          std::cout << derivation_to_latex(*result.derivation);
        } else {
          std::cout << "derivable (height " << result.derivation->height() << ")\n"
                    << derivation_to_text(*result.derivation);
        }
        break;
      case jseq::SearchStatus::NotDerivable:
        std::cout << "not derivable; countermodel:\n" << model_to_json(*result.model) << "\n";
        break;
      case jseq::SearchStatus::Unknown:
        std::cout << "unknown (" << result.unknown_reason << ")\n";
        break;
    }
    if (run.budget_report) {
      std::cout << "budgets: " << budgets_json(result.budget).dump(2) << "\n"
                << "stats: " << stats_json(result.stats).dump(2) << "\n";
    }
  }
  switch (result.status) {
    case jseq::SearchStatus::Derivable:
      return kExitDerivable;
    case jseq::SearchStatus::NotDerivable:
      return kExitNotDerivable;
    default:
      return kExitUnknown;
  }
}

int cmd_check_proof(const std::string& path, const RunConfig& run) {
  jseq::LogicConfig cfg = make_config(run);
  jseq::ConstantSpec cs = load_cs(run, cfg);
  jseq::Derivation d = jseq::derivation_from_json(read_file(path));
  auto result = jseq::check_derivation(cfg, cs, d);
  if (result.ok) {
    std::cout << "valid derivation of  " << to_string(d.sequent) << "\n";
    return kExitDerivable;
  }
  std::cerr << "invalid derivation at node " << result.node_path << ": " << result.error << "\n";
  return kExitNotDerivable;
}

int cmd_check_model(const std::string& model_path, const std::string& goal_text,
                    const RunConfig& run) {
  std::string text = read_file(model_path);
  jseq::FittingModel m = jseq::model_from_json(text);
  if (!run.logic.empty()) {
    m.logic = make_config(run);
  } else if (run.fk_mode) {
    m.logic.seriality_mode = jseq::SerialityMode::AxiomEBot;
  }
  jseq::ConstantSpec cs = load_cs(run, m.logic);
  jseq::Sequent goal = parse_goal(goal_text);
  jseq::EvidenceUniverse universe = jseq::default_audit_universe(m, goal);
  auto report = jseq::check_conditions(m, universe, cs);
  bool valid = jseq::validates_sequent(m, jseq::identity_interpretation(goal), goal);
  if (report.pass() && !valid) {
    std::cout << "countermodel confirmed: conditions hold and the goal is not valid\n";
    return kExitDerivable;
  }
  if (!report.pass()) std::cerr << "violated conditions:\n" << report.to_string();
  if (valid) std::cerr << "the goal sequent is valid in this model\n";
  return kExitNotDerivable;
}

int cmd_parse(const std::string& text, bool as_json) {
  if (text.find("=>") != std::string::npos) {
    jseq::Sequent s = jseq::parse_sequent(text);
    if (as_json) {
      nlohmann::ordered_json j;
      j["sequent"] = to_string(s);
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << to_string(s) << "\n";
    }
    return 0;
  }
  jseq::FormulaPtr f = jseq::parse_formula(text);
  if (as_json) {
    nlohmann::ordered_json j;
    j["formula"] = to_string(f);
    j["projection"] = to_string(jseq::forgetful_projection(f));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << to_string(f) << "\n";
  }
  return 0;
}

int cmd_corpus(const std::string& path, const RunConfig& run, int jobs) {
  jseq::LogicConfig cfg = make_config(run);
  jseq::ConstantSpec cs = load_cs(run, cfg);
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (!blank) lines.push_back(line);
  }

  std::vector<std::string> statuses(lines.size());
  std::atomic<std::size_t> next{0};
  std::atomic<long> unknowns{0}, errors{0};
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= lines.size()) return;
      try {
        jseq::Sequent goal = parse_goal(lines[i]);
        auto result = jseq::search(cfg, cs, goal, make_options(run));
        switch (result.status) {
          case jseq::SearchStatus::Derivable:
            statuses[i] = "derivable";
            break;
          case jseq::SearchStatus::NotDerivable:
            statuses[i] = "not_derivable";
            break;
          case jseq::SearchStatus::Unknown:
            statuses[i] = "unknown(" + result.unknown_reason + ")";
            unknowns++;
            break;
        }
      } catch (const std::exception& e) {
        statuses[i] = std::string("error: ") + e.what();
        errors++;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < lines.size(); ++i)
    std::cout << statuses[i] << "\t" << lines[i] << "\n";
  std::cout << lines.size() << " goals, " << unknowns.load() << " unknown, " << errors.load()
            << " errors\n";
  if (errors.load() > 0) return kExitUsage;
  return unknowns.load() > 0 ? kExitNotDerivable : kExitDerivable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"labeled-sequent prover and countermodel builder for justification logics"};
  app.require_subcommand(1);

  RunConfig run;
  std::string goal, path, model_path;
  bool parse_json = false;
  int jobs = 1;

  auto* prove = app.add_subcommand("prove", "backward proof search for a sequent or formula");
  prove->add_option("goal", goal, "formula or sequent")->required();
  add_common_flags(prove, run);

  auto* check_proof = app.add_subcommand("check-proof", "verify a derivation JSON file");
  check_proof->add_option("file", path, "derivation JSON")->required();
  add_common_flags(check_proof, run);

  auto* check_model = app.add_subcommand("check-model", "verify a countermodel JSON file");
  check_model->add_option("model", model_path, "model JSON")->required();
  check_model->add_option("goal", goal, "formula or sequent")->required();
  add_common_flags(check_model, run);

  auto* parse = app.add_subcommand("parse", "parse and reprint a formula or sequent");
  parse->add_option("text", goal, "formula or sequent")->required();
  parse->add_flag("--json", parse_json, "emit JSON");

  auto* corpus = app.add_subcommand("corpus", "run every sequent in a file");
  corpus->add_option("file", path, "one sequent per line, '#' comments")->required();
  corpus->add_option("--jobs", jobs, "worker threads");
  add_common_flags(corpus, run);

  CLI11_PARSE(app, argc, argv);

  try {
    if (prove->parsed()) return cmd_prove(goal, run);
    if (check_proof->parsed()) return cmd_check_proof(path, run);
    if (check_model->parsed()) return cmd_check_model(model_path, goal, run);
    if (parse->parsed()) return cmd_parse(goal, parse_json);
    if (corpus->parsed()) return cmd_corpus(path, run, jobs);
  } catch (const jseq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
