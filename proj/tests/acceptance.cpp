// Acceptance suite: runs every criterion end to end and prints one pass/fail
// line per criterion. Expects the CLI binary path as argv[1].

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gen.hpp"
#include "jseq/calculus.hpp"
#include "jseq/logic.hpp"
#include "jseq/models.hpp"
#include "jseq/parse.hpp"
#include "jseq/search.hpp"
#include "oracle.hpp"

using namespace jseq;
using Clock = std::chrono::steady_clock;

namespace {

std::string g_cli;

struct CliResult {
  int exit_code = -1;
  std::string out;
  double seconds = 0.0;
};

CliResult run_cli(const std::string& args) {
  CliResult r;
  std::string cmd = g_cli + " " + args + " 2>/dev/null";
  auto start = Clock::now();
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  int status = pclose(pipe);
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

struct Criterion {
  int number;
  std::string name;
  std::function<bool(std::string&)> body;
};

double elapsed(const Clock::time_point& start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// criterion 1: axiom-derivability matrix
// ---------------------------------------------------------------------------

struct AxiomRow {
  std::string scheme;
  std::string formula;
  // rules whose joint presence makes the instance derivable
  std::vector<RuleId> required;
  bool needs_modal = false;
  bool needs_just = false;
};

const std::vector<AxiomRow>& axiom_rows() {
  static const std::vector<AxiomRow> rows = {
      {"Taut", "P -> Q -> P", {}, false, false},
      {"Sum-l", "x:P -> x+y:P", {}, false, true},
      {"Sum-r", "x:P -> y+x:P", {}, false, true},
      {"jK", "x:(P -> Q) -> y:P -> x*y:Q", {}, false, true},
      {"jT", "x:P -> P", {RuleId::Ref}, false, true},
      {"jD", "x:false -> false", {RuleId::Ser}, false, true},
      {"j4", "x:P -> !x:x:P", {RuleId::EBang, RuleId::Mon, RuleId::Trans}, false, true},
      {"jB", "~P -> ??x:~x:P", {RuleId::EBarQ, RuleId::Sym}, false, true},
      {"j5", "~x:P -> ?x:~x:P", {RuleId::SE, RuleId::EQ}, false, true},
      {"K", "[](P -> Q) -> []P -> []Q", {}, true, false},
      {"T", "[]P -> P", {RuleId::Ref}, true, false},
      {"D", "[]false -> false", {RuleId::Ser}, true, false},
      {"4", "[]P -> [][]P", {RuleId::Trans}, true, false},
      {"5", "~[]P -> []~[]P", {RuleId::Eucl}, true, false},
      {"connection", "x:P -> []P", {}, true, true},
      {"nIntro", "~x:P -> []~x:P", {RuleId::AntiMon, RuleId::SE}, true, true},
  };
  return rows;
}

// expected derivability of a row in a preset (the correspondence rows plus
// the facts jT => jD, T => D, and 5/B through Ref+Eucl in S5)
bool expected_derivable(const AxiomRow& row, const LogicConfig& cfg) {
  RuleSet rules = rules_for_logic(cfg);
  if (row.needs_modal && !cfg.modal_enabled) return false;
  if (row.needs_just && !cfg.justification_enabled) return false;
  if (row.scheme == "jD" || row.scheme == "D")
    return rules.count(RuleId::Ser) || rules.count(RuleId::Ref) ||
           rules.count(RuleId::AxEBot);
  if (row.scheme == "connection")
    return cfg.modal_enabled && cfg.justification_enabled;
  if (row.scheme == "nIntro" && !cfg.s4lpn_extras) return false;
  for (RuleId r : row.required)
    if (!rules.count(r)) return false;
  return true;
}

bool criterion1(std::string& detail) {
  const std::vector<std::string> presets = {"J",  "JT",  "JD",  "J4",   "JD4",  "LP",  "JT45",
                                            "J5", "JB",  "K",   "T",    "D",    "K4",  "S4",
                                            "S5", "KJ",  "TJT", "DJD",  "D4JD4", "K4J4",
                                            "S4LP", "S4LPN"};
  int cells = 0, failures = 0;
  std::ostringstream log;
  for (const auto& name : presets) {
    LogicConfig cfg = *logic_preset(name);
    bool serial_rule = rules_for_logic(cfg).count(RuleId::Ser) != 0;
    for (const auto& row : axiom_rows()) {
      if (row.needs_modal && !cfg.modal_enabled) continue;  // not in the language
      if (row.needs_just && !cfg.justification_enabled) continue;
      bool expect = expected_derivable(row, cfg);
      // underivable goals in (Ser) systems diverge; a small fuel bound
      // makes the expected failure quick (exit 2)
      std::string flags;
      if (serial_rule && !expect) flags = " --fuel 400";
      CliResult r = run_cli("prove \"" + row.formula + "\" --logic " + name + flags);
      cells++;
      bool ok = expect ? (r.exit_code == 0 && r.seconds < 1.0)
                       : (r.exit_code == 1 || r.exit_code == 2);
      if (!ok) {
        failures++;
        log << " [" << name << " / " << row.scheme << ": exit " << r.exit_code << " in "
            << r.seconds << "s, expected " << (expect ? "0" : "1|2") << "]";
      }
    }
  }
  detail = std::to_string(cells) + " matrix cells" + log.str();
  return failures == 0;
}

// ---------------------------------------------------------------------------
// criterion 2: paper regression derivations
// ---------------------------------------------------------------------------

bool criterion2(std::string& detail) {
  struct Row {
    const char* logic;
    const char* sequent;
  };
  const Row rows[] = {
      {"J5", "w E(t,A), w R v => v |= A"},
      {"J5", "w |= ~t:A => w E(?t, ~t:A)"},
      {"J4", "w |= x:P => w |= (x+y):P"},
      {"JT", "w |= x:P => w |= P"},
  };
  std::ostringstream log;
  bool ok = true;
  for (const auto& row : rows) {
    LogicConfig cfg = *logic_preset(row.logic);
    SearchResult r = search(cfg, {}, parse_sequent(row.sequent), SearchOptions{});
    if (r.status != SearchStatus::Derivable) {
      ok = false;
      log << " [" << row.logic << " " << row.sequent << ": not derivable]";
      continue;
    }
    auto check = check_derivation(cfg, {}, *r.derivation);
    if (!check.ok) {
      ok = false;
      log << " [" << row.logic << " " << row.sequent << ": checker says " << check.error << "]";
    }
    // prove -> check-proof round trip through the CLI
    CliResult prove = run_cli("prove \"" + std::string(row.sequent) + "\" --logic " +
                              row.logic + " --output json");
    if (prove.exit_code != 0) {
      ok = false;
      log << " [cli prove failed on " << row.sequent << "]";
      continue;
    }
    auto j = nlohmann::json::parse(prove.out);
    std::string path = "/tmp/jseq_accept_deriv.json";
    std::ofstream(path) << j["derivation"].dump();
    CliResult check_cli = run_cli("check-proof " + path + " --logic " + row.logic);
    if (check_cli.exit_code != 0) {
      ok = false;
      log << " [check-proof rejected " << row.sequent << "]";
    }
  }
  detail = "4 regression derivations, prove->check-proof round trips" + log.str();
  return ok;
}

// ---------------------------------------------------------------------------
// criterion 3: the single-world countermodel, exactly as stated
// ---------------------------------------------------------------------------

bool criterion3(std::string& detail) {
  CliResult r = run_cli("prove \"x:(y:A->A)->z:A\" --logic J4 --output json");
  if (r.exit_code != 1) {
    detail = "expected exit 1, got " + std::to_string(r.exit_code);
    return false;
  }
  if (r.seconds >= 1.0) {
    detail = "took " + std::to_string(r.seconds) + "s";
    return false;
  }
  auto j = nlohmann::json::parse(r.out);
  auto model = j["model"];
  bool shape_ok = model["worlds"] == nlohmann::json::array({"w"}) &&
                  model["rel"].empty() && model["evidence"].size() == 1 &&
                  model["evidence"][0]["term"] == "x" &&
                  model["evidence"][0]["formula"] == "y:A -> A" &&
                  model["evidence"][0]["worlds"] == nlohmann::json::array({"w"}) &&
                  model["valuation"].empty();
  if (!shape_ok) {
    detail = "model differs from the stated single-world model: " + model.dump();
    return false;
  }
  FittingModel m = model_from_json(model.dump());
  Sequent root = parse_sequent("=> w |= x:(y:A -> A) -> z:A");
  if (!check_conditions(m, default_audit_universe(m, root)).pass()) {
    detail = "frame conditions fail";
    return false;
  }
  if (validates_sequent(m, identity_interpretation(root), root)) {
    detail = "model validates the goal";
    return false;
  }
  // prove -> check-model round trip through the CLI
  std::string path = "/tmp/jseq_accept_model.json";
  std::ofstream(path) << model.dump();
  CliResult check_cli =
      run_cli("check-model " + path + " \"x:(y:A->A)->z:A\" --logic J4");
  if (check_cli.exit_code != 0) {
    detail = "check-model rejected the countermodel";
    return false;
  }
  detail = "exact single-world model in " + std::to_string(r.seconds) + "s";
  return true;
}

// ---------------------------------------------------------------------------
// criteria 4 and 5: termination corpus and prover/model-checker exclusivity
// ---------------------------------------------------------------------------

struct CorpusItem {
  std::string logic;
  Sequent root;
  ConstantSpec cs;
  SearchStatus status;
};

std::vector<CorpusItem> g_corpus;  // filled by criterion 4

const std::vector<std::string>& corpus_logics() {
  static const std::vector<std::string> names = {"J",  "JT",  "LP",  "K",   "T",
                                                 "S4", "KJ",  "TJT", "S4LP"};
  return names;
}

bool criterion4(std::string& detail) {
  auto start = Clock::now();
  gen::Gen g(0xACCE55);
  long derivable = 0, not_derivable = 0, unknown = 0;
  for (const auto& name : corpus_logics()) {
    LogicConfig cfg = *logic_preset(name);
    for (int i = 0; i < 500; ++i) {
      ConstantSpec cs = cfg.justification_enabled ? g.small_cs(cfg) : ConstantSpec{};
      if (!validate_cs(cfg, cs).ok()) cs = ConstantSpec{};
      Sequent root = g.sequent(cfg, 3, 2);
      SearchResult r = search(cfg, cs, root, SearchOptions{});
      switch (r.status) {
        case SearchStatus::Derivable:
          derivable++;
          break;
        case SearchStatus::NotDerivable:
          not_derivable++;
          break;
        case SearchStatus::Unknown:
          unknown++;
          break;
      }
      g_corpus.push_back({name, root, cs, r.status});
    }
  }
  double secs = elapsed(start);
  detail = std::to_string(derivable) + " derivable / " + std::to_string(not_derivable) +
           " countermodels / " + std::to_string(unknown) + " unknown in " +
           std::to_string(secs) + "s";
  return unknown == 0 && secs < 60.0;
}

// hand-built valid models per logic for the soundness spot check
std::vector<FittingModel> stored_models(const std::string& logic) {
  LogicConfig cfg = *logic_preset(logic);
  std::vector<FittingModel> out;
  auto add = [&](std::vector<std::string> worlds,
                 std::set<std::pair<std::string, std::string>> rel,
                 std::vector<std::tuple<const char*, const char*, const char*>> base,
                 std::map<std::string, WorldSet> val) {
    FittingModel m;
    m.logic = cfg;
    m.worlds = std::move(worlds);
    std::sort(m.worlds.begin(), m.worlds.end());
    m.rel = std::move(rel);
    for (auto& [t, f, w] : base) m.base[{parse_term(t), parse_formula(f)}].insert(w);
    m.valuation = std::move(val);
    out.push_back(std::move(m));
  };
  bool refl = cfg.has(JAxiom::jT) || cfg.has(MAxiom::T);
  if (refl) {
    add({"a"}, {{"a", "a"}}, {{"x", "P", "a"}}, {{"P", {"a"}}});
    add({"a", "b"}, {{"a", "a"}, {"b", "b"}, {"a", "b"}}, {{"y", "Q", "b"}},
        {{"Q", {"a", "b"}}});
  } else {
    add({"a"}, {}, {{"x", "P", "a"}}, {{"P", {"a"}}});
    add({"a", "b"}, {{"a", "b"}}, {{"x", "P", "a"}}, {{"P", {"b"}}, {"Q", {"a"}}});
  }
  if (cfg.has(JAxiom::j4) || cfg.has(MAxiom::Four)) {
    add({"a", "b", "c"},
        refl ? std::set<std::pair<std::string, std::string>>{{"a", "a"}, {"b", "b"}, {"c", "c"},
                                                             {"a", "b"}, {"b", "c"}, {"a", "c"}}
             : std::set<std::pair<std::string, std::string>>{{"a", "b"}, {"b", "c"}, {"a", "c"}},
        {{"x", "P -> Q", "a"}}, {{"P", {"a", "b", "c"}}, {"Q", {"a", "b", "c"}}});
  }
  // every stored model must satisfy its frame conditions
  std::vector<FittingModel> valid;
  for (auto& m : out)
    if (check_conditions(m, audit_universe_from_base(m)).pass()) valid.push_back(std::move(m));
  return valid;
}

void all_interpretations(const std::vector<Label>& labels, const std::vector<std::string>& worlds,
                         std::vector<Interpretation>& out) {
  out.clear();
  std::size_t n = labels.size();
  if (n == 0) {
    out.push_back({});
    return;
  }
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    Interpretation interp;
    for (std::size_t i = 0; i < n; ++i) interp[labels[i]] = worlds[idx[i]];
    out.push_back(interp);
    std::size_t k = 0;
    while (k < n && ++idx[k] == worlds.size()) idx[k++] = 0;
    if (k == n) break;
  }
}

bool criterion5(std::string& detail) {
  long checked_sound = 0, checked_models = 0, violations = 0;
  std::map<std::string, std::vector<FittingModel>> fixtures;
  for (const auto& name : corpus_logics()) fixtures[name] = stored_models(name);
  for (const auto& item : g_corpus) {
    if (item.status == SearchStatus::Derivable) {
      // soundness: no stored valid model invalidates a derivable sequent
      auto labels = item.root.labels();
      if (labels.size() > 3 || !item.cs.empty()) continue;
      for (const auto& m : fixtures[item.logic]) {
        std::vector<Interpretation> interps;
        all_interpretations(labels, m.worlds, interps);
        for (const auto& interp : interps) {
          checked_sound++;
          if (!validates_sequent(m, interp, item.root)) violations++;
        }
      }
    } else if (item.status == SearchStatus::NotDerivable) {
      // re-run deterministically and verify the countermodel invalidates
      LogicConfig cfg = *logic_preset(item.logic);
      SearchResult r = search(cfg, item.cs, item.root, SearchOptions{});
      checked_models++;
      if (r.status != SearchStatus::NotDerivable ||
          validates_sequent(*r.model, identity_interpretation(item.root), item.root))
        violations++;
    }
  }
  detail = std::to_string(checked_sound) + " soundness checks, " +
           std::to_string(checked_models) + " countermodel verifications, " +
           std::to_string(violations) + " violations";
  return violations == 0 && checked_sound > 0 && checked_models > 0;
}

// ---------------------------------------------------------------------------
// criterion 6: structural admissibility (weakening, invertibility, cut)
// ---------------------------------------------------------------------------

bool criterion6(std::string& detail) {
  long weakening = 0, invertibility = 0, cuts = 0, failures = 0;
  gen::Gen g(0xC0FFEE);
  std::ostringstream log;

  std::vector<const CorpusItem*> derivable;
  for (const auto& item : g_corpus)
    if (item.status == SearchStatus::Derivable) derivable.push_back(&item);

  for (const auto* item : derivable) {
    LogicConfig cfg = *logic_preset(item->logic);
    // (a) weakening: a fresh antecedent item keeps derivability
    Sequent weakened = item->root;
    weakened.insert_ante(SequentItem::labeled("u", Formula::prop("Z")));
    SearchResult r = search(cfg, item->cs, weakened, SearchOptions{});
    weakening++;
    if (r.status != SearchStatus::Derivable) {
      failures++;
      if (failures < 5)
        log << " [weakening failed: " << item->logic << " " << to_string(weakened) << "]";
    }
    // (b) invertibility: premises of any backward instance at the root stay
    // derivable
    AnalyticityUniverse u = make_universe(item->root, item->cs);
    auto counter = std::make_shared<int>(0);
    auto fresh = [counter] { return "q" + std::to_string(++*counter); };
    for (RuleId rule : stage_order(cfg)) {
      for (const auto& inst :
           backward_instances(cfg, item->cs, rule, item->root, u, fresh)) {
        for (const auto& premise : inst.premises) {
          SearchResult pr = search(cfg, item->cs, premise, SearchOptions{});
          invertibility++;
          if (pr.status != SearchStatus::Derivable) {
            failures++;
            if (failures < 5)
              log << " [invertibility failed: " << item->logic << " " << to_string(rule)
                  << " " << to_string(premise) << "]";
          }
        }
      }
    }
  }

  // (c) cut: 100 sampled derivable pairs
  LogicConfig jt = *logic_preset("JT");
  int attempts = 0;
  while (cuts < 100 && attempts < 6000) {
    attempts++;
    FormulaPtr phi = g.formula(jt, 2);
    Sequent left = g.sequent(jt, 2, 2);
    Sequent right = g.sequent(jt, 2, 2);
    SequentItem cut_item = SequentItem::labeled("w", phi);
    left.insert_succ(cut_item);
    right.insert_ante(cut_item);
    if (search(jt, {}, left, SearchOptions{}).status != SearchStatus::Derivable) continue;
    if (search(jt, {}, right, SearchOptions{}).status != SearchStatus::Derivable) continue;
    Sequent conclusion;
    Sequent l = left, rr = right;
    l.erase_succ(cut_item);
    rr.erase_ante(cut_item);
    for (const auto& it : l.ante) conclusion.insert_ante(it);
    for (const auto& it : rr.ante) conclusion.insert_ante(it);
    for (const auto& it : l.succ) conclusion.insert_succ(it);
    for (const auto& it : rr.succ) conclusion.insert_succ(it);
    cuts++;
    if (search(jt, {}, conclusion, SearchOptions{}).status != SearchStatus::Derivable) {
      failures++;
      if (failures < 5) log << " [cut failed: " << to_string(conclusion) << "]";
    }
  }

  detail = std::to_string(weakening) + " weakenings, " + std::to_string(invertibility) +
           " inversions, " + std::to_string(cuts) + " cuts, " + std::to_string(failures) +
           " counterexamples" + log.str();
  return failures == 0 && cuts == 100;
}

// ---------------------------------------------------------------------------
// criterion 7: evidence-closure laws against the brute-force oracle
// ---------------------------------------------------------------------------

bool criterion7(std::string& detail) {
  gen::Gen g(0xE71DE);
  long compared = 0, mismatches = 0, law_violations = 0, e67_checked = 0;
  for (const char* name : {"J", "J4", "JB"}) {
    LogicConfig cfg = *logic_preset(name);
    for (int i = 0; i < 200; ++i) {
      FittingModel m = g.model(cfg, 1 + g.pick(3), 3);
      EvidenceUniverse u = audit_universe_from_base(m);
      for (int k = 0; k < 3; ++k) u.pairs.insert({g.term(cfg, 2), g.formula(cfg, 2)});
      // the closure laws (E1, E2; E3, E4 under j4; E5 under jB) via the audit
      auto report = check_conditions(m, u);
      if (!report.pass()) law_violations++;
      // bit-identical membership against the staged oracle
      oracle::Oracle oracle(m, u, false);
      for (const auto& [t, f] : u.pairs)
        for (const auto& w : m.worlds) {
          compared++;
          if (closure_membership(m, w, t, f) != oracle.member(w, t, f)) mismatches++;
        }
    }
  }
  // Def of the inductively generated function on Euclidean j5 frames whose
  // base satisfies the strong-evidence hypothesis: E6 and E7 hold
  LogicConfig j5 = *logic_preset("J5");
  for (int i = 0; i < 600 && e67_checked < 60; ++i) {
    FittingModel m = gen::Gen(0x5EED + i).model(j5, 1 + i % 3, 2);
    EvidenceUniverse u = audit_universe_from_base(m);
    u.pairs.insert({parse_term("?x"), parse_formula("~x:P")});
    bool hypothesis = true;
    for (const auto& [pair, worlds] : m.base)
      for (const auto& w : worlds)
        if (!forces(m, w, Formula::just(pair.first, pair.second), ClosureKind::Inductive))
          hypothesis = false;
    if (!hypothesis) continue;
    e67_checked++;
    auto report = check_conditions(m, u);
    for (const auto& v : report.violations)
      if (v.condition == "E6" || v.condition == "E7") law_violations++;
  }
  detail = std::to_string(compared) + " oracle comparisons, " + std::to_string(mismatches) +
           " mismatches, " + std::to_string(law_violations) + " law violations, " +
           std::to_string(e67_checked) + " j5 frames";
  return mismatches == 0 && law_violations == 0 && e67_checked >= 40;
}

// ---------------------------------------------------------------------------
// criterion 8: pruning search-produced derivations
// ---------------------------------------------------------------------------

bool criterion8(std::string& detail) {
  long pruned = 0, failures = 0;
  for (const auto& item : g_corpus) {
    if (item.status != SearchStatus::Derivable) continue;
    LogicConfig cfg = *logic_preset(item.logic);
    if (!cfg.justification_enabled || cfg.modal_enabled) continue;  // JL- systems only
    SearchResult r = search(cfg, item.cs, item.root, SearchOptions{});
    if (r.status != SearchStatus::Derivable) {
      failures++;
      continue;
    }
    Derivation d = prune_superfluous(*r.derivation);
    pruned++;
    bool same_end = to_string(d.sequent) == to_string(item.root);
    bool checks = check_derivation(cfg, item.cs, d).ok;
    if (!has_subterm_property(d) || !same_end || !checks) failures++;
  }
  detail = std::to_string(pruned) + " derivations pruned, " + std::to_string(failures) +
           " failures";
  return failures == 0 && pruned > 0;
}

// ---------------------------------------------------------------------------
// criterion 9: analyticity audit and the paper's negative examples
// ---------------------------------------------------------------------------

Derivation j5_counterexample() {
  // (Er+), (SE), (L:) derivation of  w R v, w E(t,P) => v |= P  in G3J5,
  // which breaks the labeled-subformula property via w |= (t+s):P
  Derivation ax;
  ax.sequent = parse_sequent(
      "v |= P, w |= (t+s):P, w E(t+s, P), w R v, w E(t, P) => v |= P");
  ax.rule = RuleId::Ax;
  ax.principal = {SequentItem::labeled("v", Formula::prop("P")),
                  SequentItem::labeled("v", Formula::prop("P"))};

  Derivation lcolon;
  lcolon.sequent =
      parse_sequent("w |= (t+s):P, w E(t+s, P), w R v, w E(t, P) => v |= P");
  lcolon.rule = RuleId::LColon;
  lcolon.principal = {SequentItem::labeled("w", parse_formula("(t+s):P")),
                      SequentItem::rel("w", "v")};
  lcolon.premises = {ax};

  Derivation se;
  se.sequent = parse_sequent("w E(t+s, P), w R v, w E(t, P) => v |= P");
  se.rule = RuleId::SE;
  se.principal = {SequentItem::ev("w", parse_term("t+s"), Formula::prop("P"))};
  se.premises = {lcolon};

  Derivation erplus;
  erplus.sequent = parse_sequent("w R v, w E(t, P) => v |= P");
  erplus.rule = RuleId::ErPlus;
  erplus.principal = {SequentItem::ev("w", Term::var("t"), Formula::prop("P"))};
  erplus.premises = {se};
  return erplus;
}

Derivation jb_counterexample() {
  // (E??) derivation of  w R v => v |= P, w E(??t, ~t:s:P)  in G3JB, which
  // breaks the labeled-subformula property via w |= s:P
  Derivation ax;
  ax.sequent = parse_sequent("v |= P, w |= s:P, w R v => v |= P, w E(??t, ~t:s:P)");
  ax.rule = RuleId::Ax;
  ax.principal = {SequentItem::labeled("v", Formula::prop("P")),
                  SequentItem::labeled("v", Formula::prop("P"))};

  Derivation lcolon;
  lcolon.sequent = parse_sequent("w |= s:P, w R v => v |= P, w E(??t, ~t:s:P)");
  lcolon.rule = RuleId::LColon;
  lcolon.principal = {SequentItem::labeled("w", parse_formula("s:P")),
                      SequentItem::rel("w", "v")};
  lcolon.premises = {ax};

  Derivation axe;
  axe.sequent =
      parse_sequent("w E(??t, ~t:s:P), w R v => v |= P, w E(??t, ~t:s:P)");
  axe.rule = RuleId::AxE;
  axe.principal = {SequentItem::ev("w", parse_term("??t"), parse_formula("~t:s:P")),
                   SequentItem::ev("w", parse_term("??t"), parse_formula("~t:s:P"))};

  Derivation ebarq;
  ebarq.sequent = parse_sequent("w R v => v |= P, w E(??t, ~t:s:P)");
  ebarq.rule = RuleId::EBarQ;
  ebarq.premises = {lcolon, axe};
  return ebarq;
}

bool labeled_subformula_property(const Derivation& d) {
  FormulaSet root_subs;
  for (const auto* side : {&d.sequent.ante, &d.sequent.succ})
    for (const auto& it : *side)
      if (it.kind == ItemKind::Labeled) collect_subformulas(it.formula, root_subs);
  bool ok = true;
  std::function<void(const Derivation&)> walk = [&](const Derivation& n) {
    for (const auto* side : {&n.sequent.ante, &n.sequent.succ})
      for (const auto& it : *side)
        if (it.kind == ItemKind::Labeled && !root_subs.count(it.formula)) ok = false;
    for (const auto& p : n.premises) walk(p);
  };
  walk(d);
  return ok;
}

bool criterion9(std::string& detail) {
  long audited = 0, sublabel_failures = 0, subformula_failures = 0;
  for (const auto& item : g_corpus) {
    if (item.status != SearchStatus::Derivable) continue;
    LogicConfig cfg = *logic_preset(item.logic);
    SearchResult r = search(cfg, item.cs, item.root, SearchOptions{});
    if (r.status != SearchStatus::Derivable) continue;
    audited++;
    // sublabel property for all logics
    std::set<Label> all, eigen;
    collect_labels(*r.derivation, all, eigen);
    for (const auto& l : item.root.labels()) eigen.insert(l);
    for (const auto& l : all)
      if (!eigen.count(l)) sublabel_failures++;
    // labeled-subformula property for the JL- systems and their modal
    // analogues (no jB, j5 or S4LPN extras)
    if (!cfg.has(JAxiom::jB) && !cfg.has(JAxiom::j5) && !cfg.s4lpn_extras) {
      if (!labeled_subformula_property(*r.derivation)) subformula_failures++;
    }
  }

  // the paper's negative examples are accepted by the checker as written
  LogicConfig j5 = *logic_preset("J5");
  LogicConfig jb = *logic_preset("JB");
  Derivation dj5 = j5_counterexample();
  Derivation djb = jb_counterexample();
  auto cj5 = check_derivation(j5, {}, dj5);
  auto cjb = check_derivation(jb, {}, djb);
  bool negative_ok = cj5.ok && cjb.ok && !labeled_subformula_property(dj5) &&
                     !labeled_subformula_property(djb);
  std::string extra;
  if (!cj5.ok)
    extra += " [J5 example rejected at " + cj5.node_path + ": " + cj5.error + "]";
  if (!cjb.ok)
    extra += " [JB example rejected at " + cjb.node_path + ": " + cjb.error + "]";

  detail = std::to_string(audited) + " derivations audited, " +
           std::to_string(sublabel_failures) + " sublabel / " +
           std::to_string(subformula_failures) + " subformula failures" + extra;
  return sublabel_failures == 0 && subformula_failures == 0 && negative_ok && audited > 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path-to-jseq-cli>\n";
    return 2;
  }
  g_cli = argv[1];

  std::vector<Criterion> criteria = {
      {1, "axiom-derivability matrix", criterion1},
      {2, "paper regression derivations", criterion2},
      {3, "single-world countermodel, exact match", criterion3},
      {4, "termination on the random corpus", criterion4},
      {5, "prover/model-checker exclusivity", criterion5},
      {6, "structural admissibility (weakening, invertibility, cut)", criterion6},
      {7, "evidence-closure laws vs. brute-force oracle", criterion7},
      {8, "pruning yields the subterm property", criterion8},
      {9, "analyticity audit and negative examples", criterion9},
  };

  int failed = 0;
  for (auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) failed++;
    std::cout << "CRITERION " << c.number << ": " << (ok ? "PASS" : "FAIL") << " - " << c.name
              << " (" << detail << ")" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
