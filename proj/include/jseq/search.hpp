#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jseq/calculus.hpp"
#include "jseq/logic.hpp"
#include "jseq/models.hpp"
#include "jseq/sequent.hpp"

namespace jseq {

// Sub_Tm / Sub_Fm of the root sequent together with the constant
// specification; bounds the instantiation of the evidence rules.
struct AnalyticityUniverse {
  TermSet subterms;
  FormulaSet subformulas;
  std::set<Label> root_labels;

  bool has_term(const TermPtr& t) const { return subterms.count(t) != 0; }
  bool has_formula(const FormulaPtr& f) const { return subformulas.count(f) != 0; }
};

AnalyticityUniverse make_universe(const Sequent& root, const ConstantSpec& cs);

struct FormulaCap {
  long cap = 0;   // maximum number of applications
  long used = 0;  // filled per branch during search
};

// Counts from the root sequent plus the per-logic caps of the termination
// theorems. The per-occurrence counters for (R:)/(R[]) are enforced whenever
// (Trans) is active; the remaining caps are reported.
struct SearchBudget {
  int l = 0;        // labels in the root
  int r = 0;        // relational atoms in the antecedent
  int e = 0;        // evidence atoms in the antecedent
  int n_colon = 0, p_colon = 0;
  int n_box = 0, p_box = 0;
  int n_plus = 0, n_dot = 0, n_bang = 0;  // subterms of the root containing +, *, !
  int cs_size = 0;
  long fuel = 10000;  // total backward rule applications
  bool enforce_r_caps = false;
  std::map<FormulaPtr, FormulaCap, FormulaLess> rcolon_counters;
  std::map<FormulaPtr, FormulaCap, FormulaLess> rbox_counters;
  std::map<std::string, long> rule_caps;  // reported theorem bounds per rule
};

SearchBudget compute_budgets(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& root);

enum class SearchStatus : std::uint8_t { Derivable, NotDerivable, Unknown };

struct SearchStats {
  std::map<std::string, long> stage_applications;
  long fuel_used = 0;
  long branches = 1;
  long stage_passes = 0;
};

struct SearchResult {
  SearchStatus status = SearchStatus::Unknown;
  std::optional<Derivation> derivation;     // Derivable
  std::optional<FittingModel> model;        // NotDerivable
  std::string unknown_reason;               // "fuel" | "incomplete-fragment"
  SearchStats stats;
  SearchBudget budget;
};

struct SearchOptions {
  std::optional<long> fuel;   // overrides the budget default
  bool serial_once = false;   // (Ser) only for labels without a successor
};

// Staged, fair backward proof search (the reduction-tree procedure): each
// open branch cycles through the active stages in a fixed order, condition
// (†) is always enforced, a branch closes when an initial sequent is reached
// and saturates when a full cycle changes nothing. All branches closed gives
// a checked Derivation; a saturated branch gives a verified countermodel for
// the countermodel-supported logics and Unknown(incomplete-fragment)
// otherwise; running out of fuel gives Unknown(fuel).
SearchResult search(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& root,
                    const SearchBudget& budget, const SearchOptions& options = {});

SearchResult search(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& root,
                    const SearchOptions& options = {});

// The stage order used for cfg (initial sequents excluded).
std::vector<RuleId> stage_order(const LogicConfig& cfg);

// True when saturated branches of cfg yield Fitting countermodels (no jB, j5
// or S4LPN extras, and the seriality initial sequent is not in use).
bool countermodel_supported(const LogicConfig& cfg);

// Logics whose default-budget search is guaranteed to terminate without
// Unknown (J, JT, LP, K, T, S4, KJ, TJT, S4LP and subsets of their rules).
bool termination_guaranteed(const LogicConfig& cfg);

}  // namespace jseq
