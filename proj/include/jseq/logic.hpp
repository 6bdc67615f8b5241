#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jseq/formula.hpp"

namespace jseq {

enum class JAxiom : std::uint8_t { jT, jD, j4, jB, j5 };
enum class MAxiom : std::uint8_t { T, D, Four, B, Five };

enum class SerialityMode : std::uint8_t { Rule, AxiomEBot };

// Which axioms hold, hence which rules and initial sequents are active.
struct LogicConfig {
  std::string name = "J";
  bool justification_enabled = true;
  std::set<JAxiom> j_axioms;
  bool modal_enabled = false;
  std::set<MAxiom> m_axioms;
  bool connection_axiom = false;  // t:A -> []A
  bool s4lpn_extras = false;      // (Anti-Mon) + (SE) on top of S4LP
  SerialityMode seriality_mode = SerialityMode::Rule;

  bool has(JAxiom a) const { return j_axioms.count(a) != 0; }
  bool has(MAxiom a) const { return m_axioms.count(a) != 0; }
  bool uses_an() const { return has(JAxiom::j4); }  // AN vs IAN
  // empty on success, otherwise a description of the violated invariant
  std::optional<std::string> validate() const;
};

// Named presets: justification (J, JT, JD, J4, JD4, LP, J5, JB, JT45, ...),
// modal (K, T, D, K4, KB, S4, S5, ...), modal-justification (KJ, TJT, DJD,
// K4J4, D4JD4, S4LP, S4LPN, ...).
std::optional<LogicConfig> logic_preset(const std::string& name);
std::vector<std::string> known_presets();

enum class RuleId : std::uint8_t {
  Ax, AxBot, AxR, AxE, AxEBot,
  LNeg, RNeg, LAnd, RAnd, LOr, ROr, LImp, RImp,
  LColon, RColon, E, AN, IAN,
  ElPlus, ErPlus, EDot, EBang, Mon, EBarQ, SE, EQ,
  LBox, RBox,
  Ref, Ser, Sym, Trans, Eucl, EuclStar, AntiMon,
};

int rule_arity(RuleId r);          // premise count (0 for initial sequents)
bool rule_has_eigenlabel(RuleId r);  // RColon, RBox, Ser
bool rule_is_initial(RuleId r);
const char* to_string(RuleId r);
std::optional<RuleId> rule_from_string(const std::string& s);

using RuleSet = std::set<RuleId>;

// Active rule set per the axiom-to-rule tables plus the modal additions.
RuleSet rules_for_logic(const LogicConfig& cfg);

struct AxiomMatch {
  bool ok = false;
  std::string scheme;  // e.g. "Taut", "Sum", "jK", "jT", "connection"
};

// Matches A against the axiom schemes enabled by cfg. Taut is decided by a
// truth table over opaque atoms (every Just/Box subformula is one atom),
// capped at 20 atoms.
AxiomMatch is_axiom_instance(const LogicConfig& cfg, const FormulaPtr& a);

// Finite list of formulas of the shape c_n:...:c_1:A.
struct ConstantSpec {
  std::vector<FormulaPtr> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  bool contains(const FormulaPtr& f) const;
};

// Splits c:F into (c, F) when the entry has a constant head.
std::optional<std::pair<std::string, FormulaPtr>> cs_entry_split(const FormulaPtr& f);

struct CsReport {
  std::vector<std::string> violations;
  bool injective = false;
  bool ok() const { return violations.empty(); }
};

// Shape, axiom-instance and downward-closure checks (n = 1 for j4 logics).
CsReport validate_cs(const LogicConfig& cfg, const ConstantSpec& cs);

// CS file: one entry per line reusing the formula grammar, '#' comments.
ConstantSpec parse_cs_file(const std::string& content);
std::string cs_to_string(const ConstantSpec& cs);

}  // namespace jseq
