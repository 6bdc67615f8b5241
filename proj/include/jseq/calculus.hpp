#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jseq/logic.hpp"
#include "jseq/sequent.hpp"

namespace jseq {

struct AnalyticityUniverse;  // search.hpp

// One rule application, read bottom-up: conclusion below, premises above.
// `principal` lists the conclusion items the schema consumes or repeats
// (empty for rules like Ref, Ser, AN/IAN, E?, E??), so the checker needs no
// re-search. The eigenlabel, when present, must not occur in the conclusion.
struct RuleInstance {
  RuleId rule;
  Sequent conclusion;
  std::vector<Sequent> premises;
  std::vector<SequentItem> principal;
  std::optional<Label> eigenlabel;
};

// Finite rule-application tree. Leaves carry an initial-sequent rule id.
struct Derivation {
  Sequent sequent;
  RuleId rule = RuleId::Ax;
  std::vector<SequentItem> principal;
  std::optional<Label> eigenlabel;
  std::vector<Derivation> premises;

  int height() const;
};

// First matching initial-sequent under the order Ax, AxBot, AxR, AxE, AxEBot
// (the last only in AxiomEBot mode). The matched items are returned through
// `principal` when non-null.
std::optional<RuleId> is_initial(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& s,
                                 std::vector<SequentItem>* principal = nullptr);

// All backward instances of `rule` whose conclusion matches s, filtered by
// condition (†) and, for the evidence rules, by the analyticity universe.
// Eigenlabel rules draw fresh labels from `fresh`.
std::vector<RuleInstance> backward_instances(const LogicConfig& cfg, const ConstantSpec& cs,
                                             RuleId rule, const Sequent& s,
                                             const AnalyticityUniverse& universe,
                                             const std::function<Label()>& fresh);

// Enumerates the same instances in the same canonical order, handing each to
// `sink`; stops early when sink returns false. Lets the search pick the first
// eligible instance without materializing the rest. When `dagger_reference`
// is non-null, condition (†) is checked against its antecedent instead of the
// conclusion's (the search passes the branch union, so a formula a branch has
// already seen is never re-added after being consumed).
void enumerate_backward_instances(const LogicConfig& cfg, const ConstantSpec& cs, RuleId rule,
                                  const Sequent& s, const AnalyticityUniverse& universe,
                                  const std::function<Label()>& fresh,
                                  const std::function<bool(RuleInstance&&)>& sink,
                                  const Sequent* dagger_reference = nullptr);

struct CheckResult {
  bool ok = true;
  std::string node_path;  // e.g. "0.1" (premise indices from the root)
  std::string error;
};

// Verifies every leaf via is_initial and every internal node against its rule
// schema (side formulas preserved, eigenlabel fresh, CS membership for
// AN/IAN), for the rule set of cfg.
CheckResult check_derivation(const LogicConfig& cfg, const ConstantSpec& cs, const Derivation& d);

// Replaces every occurrence of label `from` by `to`; eigenlabels clashing with
// either are renamed to fresh labels first. Height is preserved.
Derivation substitute_label(const Derivation& d, const Label& to, const Label& from);

// Derivation of  w|=A, extraAnte => extraSucc, w|=A  built by recursion on A
// (uses only propositional rules, E, R:, L:, L[], R[]).
Derivation generalized_axiom(const LogicConfig& cfg, const ConstantSpec& cs, const Label& w,
                             const FormulaPtr& a, const std::vector<SequentItem>& extra_ante,
                             const std::vector<SequentItem>& extra_succ);

// Removes superfluous E-rule applications (those without the subterm property
// w.r.t. the endsequent) together with their evidence-atom families, until
// every E-rule instance has the subterm property. Requires a derivation of one
// of the JL- systems (no SE/E?/E??/Anti-Mon/modal nodes).
Derivation prune_superfluous(const Derivation& d);

// True iff every E-rule instance's created term lies in Sub_Tm(endsequent).
bool has_subterm_property(const Derivation& d);

// Labels occurring anywhere in the derivation plus the set of eigenlabels.
void collect_labels(const Derivation& d, std::set<Label>& all, std::set<Label>& eigen);

// JSON wire format: {"sequent": str, "rule": str, "principal": [str],
// "eigenlabel": str|null, "premises": [...]} with sequents printed in the
// concrete grammar.
std::string derivation_to_json(const Derivation& d);
Derivation derivation_from_json(const std::string& json_text);

// Proof-tree LaTeX (bussproofs macros), one inference per node.
std::string derivation_to_latex(const Derivation& d);

// Multi-line indented rendering for terminal output.
std::string derivation_to_text(const Derivation& d);

}  // namespace jseq
