#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "jseq/calculus.hpp"
#include "jseq/logic.hpp"
#include "jseq/sequent.hpp"

namespace jseq {

struct EvidencePairLess {
  bool operator()(const std::pair<TermPtr, FormulaPtr>& a,
                  const std::pair<TermPtr, FormulaPtr>& b) const {
    int c = compare(a.first, b.first);
    if (c != 0) return c < 0;
    return compare(a.second, b.second) < 0;
  }
};

using WorldSet = std::set<std::string>;
using EvidenceBase = std::map<std::pair<TermPtr, FormulaPtr>, WorldSet, EvidencePairLess>;

// Finite Fitting model: worlds, accessibility, finitely-supported base
// evidence function and valuation. Evidence closures are computed on demand.
struct FittingModel {
  std::vector<std::string> worlds;  // sorted
  std::set<std::pair<std::string, std::string>> rel;
  EvidenceBase base;
  std::map<std::string, WorldSet> valuation;
  LogicConfig logic;

  bool has_world(const std::string& w) const;
  bool related(const std::string& w, const std::string& v) const;
};

enum class ClosureKind : std::uint8_t {
  Raw,        // the base itself
  Generated,  // generated evidence function (no j5)
  Inductive,  // rank-gated construction with the per-family closure
  Auto,       // Inductive when the logic has j5, otherwise Generated
};

// w ∈ E(t,F) for the generated evidence function based on the model's base:
// sum takes either summand, application searches a middle formula G, '!'
// unfolds t:G (j4), evidence propagates along R (j4), and for jB every
// ??r is evidence for ¬r:A everywhere. Rejects logics containing j5.
bool closure_membership(const FittingModel& m, const std::string& w, const TermPtr& t,
                        const FormulaPtr& f);

// Rank-gated construction: clauses for a compound fire only at stage rk+1,
// then the per-logic-family closure (plain / monotone / anti-monotone /
// stable) is applied. For j5 logics the accessibility relation must be
// Euclidean.
bool inductive_closure_membership(const FittingModel& m, const std::string& w, const TermPtr& t,
                                  const FormulaPtr& f);

bool evidence_membership(const FittingModel& m, const std::string& w, const TermPtr& t,
                         const FormulaPtr& f, ClosureKind closure);

// Forcing: classical clauses; t:B holds iff evidence at w and B at every
// R-successor; []B iff B at every R-successor.
bool forces(const FittingModel& m, const std::string& w, const FormulaPtr& a,
            ClosureKind closure = ClosureKind::Auto);

using Interpretation = std::map<Label, std::string>;

Interpretation identity_interpretation(const Sequent& s);

// True iff (all antecedent items validated) implies (some succedent item
// validated) under the interpretation.
bool validates_sequent(const FittingModel& m, const Interpretation& interp, const Sequent& s,
                       ClosureKind closure = ClosureKind::Auto);

// Finite set of (term, formula) pairs over which the frame conditions are
// audited. Closed under the component pairs its conditions mention.
struct EvidenceUniverse {
  std::set<std::pair<TermPtr, FormulaPtr>, EvidencePairLess> pairs;

  TermSet terms() const;
  FormulaSet formulas() const;
};

// Sub_Tm x Sub_Fm of the sequent plus the base support of the model.
EvidenceUniverse default_audit_universe(const FittingModel& m, const Sequent& s);
EvidenceUniverse audit_universe_from_base(const FittingModel& m);

struct ConditionViolation {
  std::string condition;  // "E1", ..., "E7", "CS", "R-reflexive", ...
  std::string witness;
};

struct ConditionReport {
  std::vector<ConditionViolation> violations;
  bool pass() const { return violations.empty(); }
  std::string to_string() const;
};

// Audits, over worlds x universe, the accessibility-relation properties and
// the evidence conditions demanded by the model's logic (E1, E2; E3, E4 under
// j4; E5 under jB; E6, E7 under j5; consistent evidence in AxiomEBot mode;
// strong evidence + anti-monotonicity for S4LPN), plus CS respect when a
// constant specification is supplied.
ConditionReport check_conditions(const FittingModel& m, const EvidenceUniverse& universe,
                                 const ConstantSpec& cs = {},
                                 ClosureKind closure = ClosureKind::Auto);

// Countermodel from a saturated branch: worlds are the labels, R and the base
// evidence come from the antecedent atoms, the valuation from positive
// propositional labeled formulas. When `(Ser)` is active, worlds without a
// successor get a reflexive loop so the frame stays serial. The result is
// asserted to invalidate `root` under the identity interpretation; a failed
// assertion throws.
FittingModel extract_countermodel(const std::vector<Sequent>& branch, const Sequent& root,
                                  const LogicConfig& cfg, const ConstantSpec& cs);

// Same construction from the branch unions (∪Γ_i, ∪Δ_i) directly; does not
// verify the invalidation postcondition (callers do).
FittingModel build_branch_model(const std::vector<SequentItem>& gamma_union,
                                const std::vector<SequentItem>& delta_union,
                                const LogicConfig& cfg, const ConstantSpec& cs);

// JSON wire format: {"worlds": [...], "rel": [["w","v"],...],
// "evidence": [{"term": str, "formula": str, "worlds": [...]}],
// "valuation": {"P": ["w"]}, "logic": "J4"}.
std::string model_to_json(const FittingModel& m);
FittingModel model_from_json(const std::string& json_text);

}  // namespace jseq
