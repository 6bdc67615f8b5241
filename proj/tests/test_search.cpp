#include <doctest.h>

#include "gen.hpp"
#include "jseq/parse.hpp"
#include "jseq/search.hpp"

using namespace jseq;

namespace {

SearchResult run(const char* logic, const char* sequent, SearchOptions opts = {},
                 ConstantSpec cs = {}) {
  LogicConfig cfg = *logic_preset(logic);
  return search(cfg, cs, parse_sequent(sequent), opts);
}

}  // namespace

TEST_CASE("compute_budgets fills the counts from the root") {
  LogicConfig j = *logic_preset("J");
  SearchBudget b = compute_budgets(j, {}, parse_sequent("=> w |= t:P"));
  CHECK(b.p_colon == 1);
  CHECK(b.n_colon == 0);
  CHECK(b.l == 1);
  CHECK(b.rule_caps["RColon"] == 1);
  REQUIRE(b.rcolon_counters.size() == 1);
  CHECK(b.rcolon_counters.begin()->second.cap == 1);  // n(:) + n([]) + 1 = 1
  CHECK_FALSE(b.enforce_r_caps);

  LogicConfig j4 = *logic_preset("J4");
  b = compute_budgets(j4, {}, parse_sequent("=> w |= x:(y:A -> A) -> z:A"));
  CHECK(b.n_colon == 1);
  CHECK(b.p_colon == 2);
  CHECK(b.enforce_r_caps);  // (Trans) is active

  // every positive t:A occurrence gets the chain counter under LP
  LogicConfig lp = *logic_preset("LP");
  Sequent root = parse_sequent("w |= s:P => w |= t:P, w |= t:P");
  b = compute_budgets(lp, {}, root);
  CHECK(b.n_colon == 1);
  CHECK(b.p_colon == 2);
  REQUIRE(b.rcolon_counters.count(parse_formula("t:P")));
  // two occurrences of the same positive formula share one pooled counter
  CHECK(b.rcolon_counters.at(parse_formula("t:P")).cap == 2 * (1 + 1));
  CHECK(b.rule_caps["RColon"] == 2 * (1 + 1));

  LogicConfig jt = *logic_preset("JT");
  b = compute_budgets(jt, {}, parse_sequent("w R v, w |= x:P => w |= P"));
  CHECK(b.r == 1);
  CHECK(b.l == 2);
  CHECK(b.rule_caps["Ref"] == 2 + 0);
  CHECK(b.rule_caps["LColon"] == 1 * (2 * 0 + 1 + 2));

  ConstantSpec cs;
  cs.entries.push_back(parse_formula("c:(P -> Q -> P)"));
  b = compute_budgets(j, cs, parse_sequent("w E(s, P) => w |= t:P"));
  CHECK(b.e == 1);
  CHECK(b.cs_size == 1);
  CHECK(b.rule_caps["IAN"] == 1 * (1 + 1));
}

TEST_CASE("search: the consistency axiom needs (Ser)") {
  ConstantSpec cs;
  cs.entries.push_back(parse_formula("c:(x:false -> false)"));
  SearchResult r = run("JD", "=> w |= x:false -> false", {}, cs);
  REQUIRE(r.status == SearchStatus::Derivable);
  CHECK(r.derivation->height() >= 3);

  // and in the Fk variant the initial sequent AxE_bot takes over
  LogicConfig fk = *logic_preset("JD");
  fk.seriality_mode = SerialityMode::AxiomEBot;
  SearchResult r2 = search(fk, {}, parse_sequent("=> w |= x:false -> false"), SearchOptions{});
  CHECK(r2.status == SearchStatus::Derivable);

  SearchResult r3 = run("J", "=> w |= x:false -> false");
  CHECK(r3.status == SearchStatus::NotDerivable);
}

TEST_CASE("search: the Loeb-style sequent has the stated single-world countermodel") {
  SearchResult r = run("J4", "=> w |= x:(y:A -> A) -> z:A");
  REQUIRE(r.status == SearchStatus::NotDerivable);
  const FittingModel& m = *r.model;
  CHECK(m.worlds == std::vector<std::string>{"w"});
  CHECK(m.rel.empty());
  REQUIRE(m.base.size() == 1);
  const auto& [pair, worlds] = *m.base.begin();
  CHECK(to_string(pair.first) == "x");
  CHECK(to_string(pair.second) == "y:A -> A");
  CHECK(worlds == WorldSet{"w"});
  CHECK(m.valuation.empty());
  CHECK_FALSE(forces(m, "w", parse_formula("x:(y:A -> A) -> z:A")));
}

TEST_CASE("search: seriality loops forever without the heuristic") {
  SearchOptions fuel;
  fuel.fuel = 100;
  SearchResult r = run("JD", "=> w |= P", fuel);
  CHECK(r.status == SearchStatus::Unknown);
  CHECK(r.unknown_reason == "fuel");

  SearchOptions once;
  once.serial_once = true;
  SearchResult r2 = run("JD", "=> w |= P", once);
  REQUIRE(r2.status == SearchStatus::NotDerivable);
  CHECK(r2.model->worlds.size() == 2);
  // the extracted frame is serial and chain free
  EvidenceUniverse u = audit_universe_from_base(*r2.model);
  CHECK(check_conditions(*r2.model, u).pass());
}

TEST_CASE("search: G3J5 derives the evidence transfer example") {
  SearchResult r = run("J5", "w E(t,A), w R v => v |= A");
  REQUIRE(r.status == SearchStatus::Derivable);
  bool uses_se = false;
  std::function<void(const Derivation&)> walk = [&](const Derivation& d) {
    if (d.rule == RuleId::SE) uses_se = true;
    for (const auto& p : d.premises) walk(p);
  };
  walk(*r.derivation);
  CHECK(uses_se);

  SearchResult r2 = run("J5", "w |= ~t:A => w E(?t, ~t:A)");
  CHECK(r2.status == SearchStatus::Derivable);
}

TEST_CASE("search: factivity marks the difference between J and JT") {
  CHECK(run("JT", "=> w |= x:P -> P").status == SearchStatus::Derivable);
  CHECK(run("J", "=> w |= x:P -> P").status == SearchStatus::NotDerivable);
}

TEST_CASE("search: saturation in jB/j5 logics yields Unknown") {
  SearchResult r = run("J5", "=> w |= x:P -> P");
  CHECK(r.status == SearchStatus::Unknown);
  CHECK(r.unknown_reason == "incomplete-fragment");
  SearchResult r2 = run("JB", "=> w |= P");
  CHECK(r2.status == SearchStatus::Unknown);
}

TEST_CASE("search result invariants on a small random corpus") {
  gen::Gen g(73);
  for (const char* name : {"J", "JT", "LP", "S4", "KJ"}) {
    LogicConfig cfg = *logic_preset(name);
    for (int i = 0; i < 60; ++i) {
      ConstantSpec cs = cfg.justification_enabled ? g.small_cs(cfg) : ConstantSpec{};
      if (!validate_cs(cfg, cs).ok()) continue;
      Sequent root = g.sequent(cfg, 3, 2);
      SearchResult r = search(cfg, cs, root, SearchOptions{});
      CAPTURE(name); CAPTURE(to_string(root));
      REQUIRE(r.status != SearchStatus::Unknown);
      if (r.status == SearchStatus::Derivable) {
        auto check = check_derivation(cfg, cs, *r.derivation);
        CAPTURE(check.node_path); CAPTURE(check.error);
        CHECK(check.ok);
        // sublabel property: every label is a root label or an eigenlabel
        std::set<Label> all, eigen;
        collect_labels(*r.derivation, all, eigen);
        for (const auto& l : root.labels()) eigen.insert(l);
        for (const auto& l : all) CHECK(eigen.count(l));
      } else {
        CHECK_FALSE(validates_sequent(*r.model, identity_interpretation(root), root));
        // exclusivity: re-running is deterministic
        SearchResult again = search(cfg, cs, root, SearchOptions{});
        CHECK(again.status == SearchStatus::NotDerivable);
      }
    }
  }
}

TEST_CASE("labeled-subformula property of backward instances in JL- systems") {
  gen::Gen g(79);
  LogicConfig cfg = *logic_preset("LP");
  ConstantSpec cs;
  for (int i = 0; i < 40; ++i) {
    Sequent root = g.sequent(cfg, 3, 2);
    SearchResult r = search(cfg, cs, root, SearchOptions{});
    if (r.status != SearchStatus::Derivable) continue;
    // collect labeled subformulas of the root
    FormulaSet root_subs;
    for (const auto* side : {&root.ante, &root.succ})
      for (const auto& it : *side)
        if (it.kind == ItemKind::Labeled) collect_subformulas(it.formula, root_subs);
    std::function<void(const Derivation&)> walk = [&](const Derivation& d) {
      for (const auto* side : {&d.sequent.ante, &d.sequent.succ})
        for (const auto& it : *side)
          if (it.kind == ItemKind::Labeled) {
            CAPTURE(to_string(root)); CAPTURE(to_string(it.formula));
            CHECK(root_subs.count(it.formula));
          }
      for (const auto& p : d.premises) walk(p);
    };
    walk(*r.derivation);
  }
}

TEST_CASE("stage order follows the fixed list") {
  auto order = stage_order(*logic_preset("S4LPN"));
  auto pos = [&order](RuleId r) {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == r) return i;
    return order.size();
  };
  CHECK(pos(RuleId::LColon) < pos(RuleId::LBox));
  CHECK(pos(RuleId::LBox) < pos(RuleId::RColon));
  CHECK(pos(RuleId::RColon) < pos(RuleId::RBox));
  CHECK(pos(RuleId::RBox) < pos(RuleId::E));
  CHECK(pos(RuleId::Mon) < pos(RuleId::Ref));
  CHECK(pos(RuleId::Trans) < pos(RuleId::AntiMon));
  CHECK(pos(RuleId::AntiMon) < pos(RuleId::SE));
  auto j5 = stage_order(*logic_preset("J5"));
  CHECK(j5.back() == RuleId::EQ);
}

TEST_CASE("search validates the language against the configuration") {
  CHECK_THROWS_AS(run("K", "=> w |= x:P -> []P"), std::invalid_argument);
  CHECK_THROWS_AS(run("J", "=> w |= []P"), std::invalid_argument);
  CHECK_NOTHROW(run("KJ", "=> w |= x:P -> []P"));
}
