#include "jseq/logic.hpp"

#include <array>
#include <map>
#include <sstream>
#include <stdexcept>

#include "jseq/parse.hpp"

namespace jseq {

std::optional<std::string> LogicConfig::validate() const {
  if (connection_axiom && !modal_enabled)
    return "connection axiom requires a modal component";
  if (connection_axiom && !justification_enabled)
    return "connection axiom requires a justification component";
  if (s4lpn_extras) {
    LogicConfig s4lp = *logic_preset("S4LP");
    if (!modal_enabled || !justification_enabled || j_axioms != s4lp.j_axioms ||
        m_axioms != s4lp.m_axioms || !connection_axiom)
      return "S4LPN extras require the S4LP base (jT, j4, T, 4, connection)";
  }
  if (seriality_mode == SerialityMode::AxiomEBot && !has(JAxiom::jD))
    return "the AxE_bot initial sequent replaces (Ser) and needs axiom jD";
  if (!justification_enabled && (!j_axioms.empty() || connection_axiom))
    return "justification axioms without a justification component";
  if (!modal_enabled && !m_axioms.empty()) return "modal axioms without a modal component";
  return std::nullopt;
}

namespace {

const std::array<std::pair<char, JAxiom>, 5> kJAxiomLetters = {{
    {'T', JAxiom::jT}, {'D', JAxiom::jD}, {'4', JAxiom::j4}, {'B', JAxiom::jB}, {'5', JAxiom::j5},
}};
const std::array<std::pair<char, MAxiom>, 5> kMAxiomLetters = {{
    {'T', MAxiom::T}, {'D', MAxiom::D}, {'4', MAxiom::Four}, {'B', MAxiom::B}, {'5', MAxiom::Five},
}};

// "JTB45" -> {jT,jB,j4,j5}; "LP" -> {jT,j4}; returns false on junk.
bool parse_j_name(const std::string& name, std::set<JAxiom>& out) {
  if (name == "LP") {
    out = {JAxiom::jT, JAxiom::j4};
    return true;
  }
  if (name.empty() || name[0] != 'J') return false;
  for (std::size_t i = 1; i < name.size(); ++i) {
    bool found = false;
    for (auto [c, a] : kJAxiomLetters)
      if (name[i] == c) {
        out.insert(a);
        found = true;
      }
    if (!found) return false;
  }
  return true;
}

// "K", "T", "D", "K45", "S4", "S5", "TB", "D4", ... -> modal axiom set.
bool parse_m_name(const std::string& name, std::set<MAxiom>& out) {
  if (name == "S4") {
    out = {MAxiom::T, MAxiom::Four};
    return true;
  }
  if (name == "S5") {
    out = {MAxiom::T, MAxiom::Four, MAxiom::Five};
    return true;
  }
  if (name.empty()) return false;
  std::size_t i = 0;
  if (name[0] == 'K') {
    i = 1;
  }
  for (; i < name.size(); ++i) {
    bool found = false;
    for (auto [c, a] : kMAxiomLetters)
      if (name[i] == c) {
        out.insert(a);
        found = true;
      }
    if (!found) return false;
  }
  // bare "K" has no axioms; "T", "D", "TB", ... start with their letters
  return true;
}

}  // namespace

std::optional<LogicConfig> logic_preset(const std::string& name) {
  if (name.empty()) return std::nullopt;
  LogicConfig cfg;
  cfg.name = name;
  if (name == "S4LPN") {
    cfg = *logic_preset("S4LP");
    cfg.name = name;
    cfg.s4lpn_extras = true;
    return cfg;
  }
  // pure justification: J..., LP
  if (name[0] == 'J' || name == "LP") {
    std::set<JAxiom> j;
    if (!parse_j_name(name, j)) return std::nullopt;
    cfg.justification_enabled = true;
    cfg.j_axioms = j;
    return cfg;
  }
  // modal-justification: split at the 'J' (or at "LP")
  auto make_mljl = [&name](const std::string& m, const std::string& j) -> std::optional<LogicConfig> {
    LogicConfig c;
    c.name = name;
    std::set<MAxiom> ma;
    std::set<JAxiom> ja;
    if (!parse_m_name(m, ma) || !parse_j_name(j, ja)) return std::nullopt;
    c.modal_enabled = true;
    c.justification_enabled = true;
    c.m_axioms = ma;
    c.j_axioms = ja;
    c.connection_axiom = true;
    return c;
  };
  auto jpos = name.find('J');
  if (jpos != std::string::npos && jpos > 0)
    return make_mljl(name.substr(0, jpos), name.substr(jpos));
  auto lppos = name.rfind("LP");
  if (lppos != std::string::npos && lppos > 0 && lppos + 2 == name.size())
    return make_mljl(name.substr(0, lppos), "LP");
  // pure modal
  std::set<MAxiom> m;
  if (!parse_m_name(name, m)) return std::nullopt;
  cfg.justification_enabled = false;
  cfg.modal_enabled = true;
  cfg.m_axioms = m;
  return cfg;
}

std::vector<std::string> known_presets() {
  return {"J",  "JT", "JD",  "J4",   "JD4",  "LP",   "JT45", "J5",   "JB",   "J45",  "JB4",
          "K",  "T",  "D",   "K4",   "KB",   "K45",  "S4",   "S5",   "TB",   "D4",
          "KJ", "TJT", "DJD", "K4J4", "D4JD4", "S4LP", "S4LPN", "S5JT45"};
}

int rule_arity(RuleId r) {
  switch (r) {
    case RuleId::Ax:
    case RuleId::AxBot:
    case RuleId::AxR:
    case RuleId::AxE:
    case RuleId::AxEBot:
      return 0;
    case RuleId::RAnd:
    case RuleId::LOr:
    case RuleId::LImp:
    case RuleId::EBarQ:
    case RuleId::EQ:
      return 2;
    default:
      return 1;
  }
}

bool rule_has_eigenlabel(RuleId r) {
  return r == RuleId::RColon || r == RuleId::RBox || r == RuleId::Ser;
}

bool rule_is_initial(RuleId r) { return rule_arity(r) == 0; }

const char* to_string(RuleId r) {
  switch (r) {
    case RuleId::Ax: return "Ax";
    case RuleId::AxBot: return "AxBot";
    case RuleId::AxR: return "AxR";
    case RuleId::AxE: return "AxE";
    case RuleId::AxEBot: return "AxEBot";
    case RuleId::LNeg: return "LNeg";
    case RuleId::RNeg: return "RNeg";
    case RuleId::LAnd: return "LAnd";
    case RuleId::RAnd: return "RAnd";
    case RuleId::LOr: return "LOr";
    case RuleId::ROr: return "ROr";
    case RuleId::LImp: return "LImp";
    case RuleId::RImp: return "RImp";
    case RuleId::LColon: return "LColon";
    case RuleId::RColon: return "RColon";
    case RuleId::E: return "E";
    case RuleId::AN: return "AN";
    case RuleId::IAN: return "IAN";
    case RuleId::ElPlus: return "ElPlus";
    case RuleId::ErPlus: return "ErPlus";
    case RuleId::EDot: return "EDot";
    case RuleId::EBang: return "EBang";
    case RuleId::Mon: return "Mon";
    case RuleId::EBarQ: return "EBarQ";
    case RuleId::SE: return "SE";
    case RuleId::EQ: return "EQ";
    case RuleId::LBox: return "LBox";
    case RuleId::RBox: return "RBox";
    case RuleId::Ref: return "Ref";
    case RuleId::Ser: return "Ser";
    case RuleId::Sym: return "Sym";
    case RuleId::Trans: return "Trans";
    case RuleId::Eucl: return "Eucl";
    case RuleId::EuclStar: return "EuclStar";
    case RuleId::AntiMon: return "AntiMon";
  }
  return "?";
}

std::optional<RuleId> rule_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(RuleId::AntiMon); ++i) {
    RuleId r = static_cast<RuleId>(i);
    if (s == to_string(r)) return r;
  }
  return std::nullopt;
}

RuleSet rules_for_logic(const LogicConfig& cfg) {
  if (auto err = cfg.validate()) throw std::invalid_argument("invalid logic config: " + *err);
  RuleSet rules = {RuleId::Ax,   RuleId::AxBot, RuleId::LNeg, RuleId::RNeg, RuleId::LAnd,
                   RuleId::RAnd, RuleId::LOr,   RuleId::ROr,  RuleId::LImp, RuleId::RImp};
  if (cfg.justification_enabled) {
    rules.insert({RuleId::AxR, RuleId::AxE, RuleId::LColon, RuleId::RColon, RuleId::E,
                  RuleId::ElPlus, RuleId::ErPlus, RuleId::EDot});
    rules.insert(cfg.uses_an() ? RuleId::AN : RuleId::IAN);
    if (cfg.has(JAxiom::jT)) rules.insert(RuleId::Ref);
    if (cfg.has(JAxiom::jD)) {
      if (cfg.seriality_mode == SerialityMode::AxiomEBot)
        rules.insert(RuleId::AxEBot);
      else
        rules.insert(RuleId::Ser);
    }
    if (cfg.has(JAxiom::j4)) rules.insert({RuleId::EBang, RuleId::Mon, RuleId::Trans});
    if (cfg.has(JAxiom::jB)) rules.insert({RuleId::EBarQ, RuleId::Sym});
    if (cfg.has(JAxiom::j5)) rules.insert({RuleId::SE, RuleId::EQ});
  }
  if (cfg.modal_enabled) {
    rules.insert({RuleId::AxR, RuleId::LBox, RuleId::RBox});
    if (cfg.has(MAxiom::T)) rules.insert(RuleId::Ref);
    if (cfg.has(MAxiom::D)) rules.insert(RuleId::Ser);
    if (cfg.has(MAxiom::B)) rules.insert(RuleId::Sym);
    if (cfg.has(MAxiom::Four)) rules.insert(RuleId::Trans);
    if (cfg.has(MAxiom::Five)) rules.insert({RuleId::Eucl, RuleId::EuclStar});
  }
  if (cfg.s4lpn_extras) rules.insert({RuleId::AntiMon, RuleId::SE});
  return rules;
}

// ---- axiom instance matching ----

namespace {

// Truth-table check over opaque atoms; Just/Box subformulas count as atoms.
class TautChecker {
public:
  explicit TautChecker(const FormulaPtr& f) {
    collect_atoms(f);
    if (atoms_.size() > 20)
      throw std::invalid_argument("tautology check capped at 20 opaque atoms, formula has " +
                                  std::to_string(atoms_.size()));
    root_ = f;
  }

  bool tautology() const {
    std::size_t n = atoms_.size();
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask)
      if (!eval(root_, mask)) return false;
    return true;
  }

private:
  FormulaPtr root_;
  std::vector<FormulaPtr> atoms_;

  int atom_index(const FormulaPtr& f) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (equal(atoms_[i], f)) return static_cast<int>(i);
    return -1;
  }

  void collect_atoms(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::Prop:
      case FormulaKind::Just:
      case FormulaKind::Box:
        if (atom_index(f) < 0) atoms_.push_back(f);
        return;
      case FormulaKind::Bottom:
        return;
      case FormulaKind::Neg:
        collect_atoms(f->left);
        return;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Imp:
        collect_atoms(f->left);
        collect_atoms(f->right);
        return;
    }
  }

  bool eval(const FormulaPtr& f, std::uint64_t mask) const {
    switch (f->kind) {
      case FormulaKind::Prop:
      case FormulaKind::Just:
      case FormulaKind::Box:
        return (mask >> atom_index(f)) & 1;
      case FormulaKind::Bottom:
        return false;
      case FormulaKind::Neg:
        return !eval(f->left, mask);
      case FormulaKind::And:
        return eval(f->left, mask) && eval(f->right, mask);
      case FormulaKind::Or:
        return eval(f->left, mask) || eval(f->right, mask);
      case FormulaKind::Imp:
        return !eval(f->left, mask) || eval(f->right, mask);
    }
    return false;
  }
};

bool is_just(const FormulaPtr& f) { return f->kind == FormulaKind::Just; }
bool is_imp(const FormulaPtr& f) { return f->kind == FormulaKind::Imp; }
bool is_neg(const FormulaPtr& f) { return f->kind == FormulaKind::Neg; }
bool is_box(const FormulaPtr& f) { return f->kind == FormulaKind::Box; }

bool match_sum(const FormulaPtr& f) {
  // s:A -> (s+t):A  or  s:A -> (t+s):A
  if (!is_imp(f) || !is_just(f->left) || !is_just(f->right)) return false;
  const auto& lhs = f->left;
  const auto& rhs = f->right;
  if (!equal(lhs->left, rhs->left)) return false;
  if (rhs->term->kind != TermKind::Sum) return false;
  return equal(rhs->term->left, lhs->term) || equal(rhs->term->right, lhs->term);
}

bool match_jk(const FormulaPtr& f) {
  // s:(A->B) -> (t:A -> (s*t):B)
  if (!is_imp(f) || !is_just(f->left) || !is_imp(f->right)) return false;
  const auto& s_part = f->left;
  if (!is_imp(s_part->left)) return false;
  const auto& t_part = f->right->left;
  const auto& st_part = f->right->right;
  if (!is_just(t_part) || !is_just(st_part)) return false;
  if (st_part->term->kind != TermKind::App) return false;
  return equal(st_part->term->left, s_part->term) && equal(st_part->term->right, t_part->term) &&
         equal(s_part->left->left, t_part->left) && equal(s_part->left->right, st_part->left);
}

bool match_jt(const FormulaPtr& f) {
  return is_imp(f) && is_just(f->left) && equal(f->left->left, f->right);
}

bool match_jd(const FormulaPtr& f) {
  return is_imp(f) && is_just(f->left) && f->left->left->kind == FormulaKind::Bottom &&
         f->right->kind == FormulaKind::Bottom;
}

bool match_j4(const FormulaPtr& f) {
  // t:A -> !t:t:A
  if (!is_imp(f) || !is_just(f->left) || !is_just(f->right)) return false;
  const auto& rhs = f->right;
  if (rhs->term->kind != TermKind::Bang || !equal(rhs->term->left, f->left->term)) return false;
  return is_just(rhs->left) && equal(rhs->left->term, f->left->term) &&
         equal(rhs->left->left, f->left->left);
}

bool match_jb(const FormulaPtr& f) {
  // ~A -> ??t:~t:A
  if (!is_imp(f) || !is_neg(f->left) || !is_just(f->right)) return false;
  const auto& rhs = f->right;
  if (rhs->term->kind != TermKind::BarQuery) return false;
  if (!is_neg(rhs->left) || !is_just(rhs->left->left)) return false;
  return equal(rhs->left->left->left, f->left->left);
}

bool match_j5(const FormulaPtr& f) {
  // ~t:A -> ?t:~t:A
  if (!is_imp(f) || !is_neg(f->left) || !is_just(f->left->left) || !is_just(f->right))
    return false;
  const auto& inner = f->left->left;
  const auto& rhs = f->right;
  if (rhs->term->kind != TermKind::Query || !equal(rhs->term->left, inner->term)) return false;
  return is_neg(rhs->left) && is_just(rhs->left->left) &&
         equal(rhs->left->left->term, inner->term) && equal(rhs->left->left->left, inner->left);
}

bool match_k(const FormulaPtr& f) {
  // [](A->B) -> ([]A -> []B)
  if (!is_imp(f) || !is_box(f->left) || !is_imp(f->left->left) || !is_imp(f->right)) return false;
  const auto& a = f->left->left->left;
  const auto& b = f->left->left->right;
  return is_box(f->right->left) && is_box(f->right->right) && equal(f->right->left->left, a) &&
         equal(f->right->right->left, b);
}

bool match_m_t(const FormulaPtr& f) {
  return is_imp(f) && is_box(f->left) && equal(f->left->left, f->right);
}

bool match_m_d(const FormulaPtr& f) {
  return is_imp(f) && is_box(f->left) && f->left->left->kind == FormulaKind::Bottom &&
         f->right->kind == FormulaKind::Bottom;
}

bool match_m_4(const FormulaPtr& f) {
  return is_imp(f) && is_box(f->left) && is_box(f->right) && is_box(f->right->left) &&
         equal(f->right->left->left, f->left->left);
}

bool match_m_b(const FormulaPtr& f) {
  // ~A -> []~[]A
  return is_imp(f) && is_neg(f->left) && is_box(f->right) && is_neg(f->right->left) &&
         is_box(f->right->left->left) && equal(f->right->left->left->left, f->left->left);
}

bool match_m_5(const FormulaPtr& f) {
  // ~[]A -> []~[]A
  return is_imp(f) && is_neg(f->left) && is_box(f->left->left) && is_box(f->right) &&
         is_neg(f->right->left) && is_box(f->right->left->left) &&
         equal(f->right->left->left->left, f->left->left->left);
}

bool match_connection(const FormulaPtr& f) {
  // t:A -> []A
  return is_imp(f) && is_just(f->left) && is_box(f->right) &&
         equal(f->left->left, f->right->left);
}

bool match_s4lpn(const FormulaPtr& f) {
  // ~t:A -> []~t:A
  return is_imp(f) && is_neg(f->left) && is_just(f->left->left) && is_box(f->right) &&
         is_neg(f->right->left) && is_just(f->right->left->left) &&
         equal(f->left->left, f->right->left->left);
}

}  // namespace

AxiomMatch is_axiom_instance(const LogicConfig& cfg, const FormulaPtr& a) {
  if (!cfg.modal_enabled && contains_box(a)) return {};
  if (cfg.justification_enabled) {
    if (match_sum(a)) return {true, "Sum"};
    if (match_jk(a)) return {true, "jK"};
    if (cfg.has(JAxiom::jT) && match_jt(a)) return {true, "jT"};
    if (cfg.has(JAxiom::jD) && match_jd(a)) return {true, "jD"};
    if (cfg.has(JAxiom::j4) && match_j4(a)) return {true, "j4"};
    if (cfg.has(JAxiom::jB) && match_jb(a)) return {true, "jB"};
    if (cfg.has(JAxiom::j5) && match_j5(a)) return {true, "j5"};
  }
  if (cfg.modal_enabled) {
    if (match_k(a)) return {true, "K"};
    if (cfg.has(MAxiom::T) && match_m_t(a)) return {true, "T"};
    if (cfg.has(MAxiom::D) && match_m_d(a)) return {true, "D"};
    if (cfg.has(MAxiom::Four) && match_m_4(a)) return {true, "4"};
    if (cfg.has(MAxiom::B) && match_m_b(a)) return {true, "B"};
    if (cfg.has(MAxiom::Five) && match_m_5(a)) return {true, "5"};
  }
  if (cfg.connection_axiom && match_connection(a)) return {true, "connection"};
  if (cfg.s4lpn_extras && match_s4lpn(a)) return {true, "nIntro"};
  if (TautChecker(a).tautology()) return {true, "Taut"};
  return {};
}

// ---- constant specifications ----

bool ConstantSpec::contains(const FormulaPtr& f) const {
  for (const auto& e : entries)
    if (equal(e, f)) return true;
  return false;
}

std::optional<std::pair<std::string, FormulaPtr>> cs_entry_split(const FormulaPtr& f) {
  if (f->kind != FormulaKind::Just || f->term->kind != TermKind::Const) return std::nullopt;
  return std::make_pair(f->term->name, f->left);
}

namespace {
// Longest prefix of constants: c_n:...:c_1:A returns {c_n,...,c_1} and A.
std::pair<std::vector<std::string>, FormulaPtr> constant_prefix(const FormulaPtr& f) {
  std::vector<std::string> consts;
  FormulaPtr cur = f;
  while (cur->kind == FormulaKind::Just && cur->term->kind == TermKind::Const) {
    consts.push_back(cur->term->name);
    cur = cur->left;
  }
  return {consts, cur};
}
}  // namespace

CsReport validate_cs(const LogicConfig& cfg, const ConstantSpec& cs) {
  CsReport report;
  std::map<std::string, int> constant_uses;
  // injectivity is judged on maximal entries (entries that are not tails of
  // another entry, which downward closure forces to be present)
  auto is_tail_of_other = [&cs](const FormulaPtr& e) {
    for (const auto& other : cs.entries) {
      FormulaPtr cur = other;
      while (cur->kind == FormulaKind::Just && cur->term->kind == TermKind::Const) {
        cur = cur->left;
        if (equal(cur, e)) return true;
      }
    }
    return false;
  };
  for (const auto& entry : cs.entries) {
    auto [consts, rest] = constant_prefix(entry);
    if (consts.empty()) {
      report.violations.push_back("entry '" + to_string(entry) +
                                  "' is not of the form c:...:c:A with constant heads");
      continue;
    }
    // choose the split: deepest prefix whose remainder is an axiom instance
    std::size_t n = 0;
    FormulaPtr body = entry;
    for (std::size_t k = 1; k <= consts.size(); ++k) {
      body = body->left;
      if (is_axiom_instance(cfg, body).ok) {
        n = k;
        break;
      }
    }
    if (n == 0) {
      report.violations.push_back("entry '" + to_string(entry) +
                                  "' does not wrap an axiom instance of " + cfg.name);
      continue;
    }
    if (cfg.uses_an() && n != 1) {
      report.violations.push_back("entry '" + to_string(entry) +
                                  "' is nested, but constant specifications for j4 logics "
                                  "contain only formulas c:A");
      continue;
    }
    if (!cfg.uses_an() && n > 1) {
      // downward closure: every proper tail must be an entry as well
      FormulaPtr tail = entry->left;
      for (std::size_t k = 1; k < n; ++k) {
        if (!cs.contains(tail))
          report.violations.push_back("not downward closed: '" + to_string(tail) +
                                      "' is missing (tail of '" + to_string(entry) + "')");
        tail = tail->left;
      }
    }
    if (!is_tail_of_other(entry))
      for (std::size_t k = 0; k < n; ++k) constant_uses[consts[k]]++;
  }
  report.injective = true;
  for (const auto& [c, uses] : constant_uses)
    if (uses > 1) report.injective = false;
  return report;
}

ConstantSpec parse_cs_file(const std::string& content) {
  ConstantSpec cs;
  std::istringstream in(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    try {
      cs.entries.push_back(parse_formula(line));
    } catch (const ParseError& e) {
      throw ParseError("constant specification line " + std::to_string(lineno) + ": " + e.what(),
                       e.position);
    }
  }
  return cs;
}

std::string cs_to_string(const ConstantSpec& cs) {
  std::string out;
  for (const auto& e : cs.entries) {
    out += to_string(e);
    out += '\n';
  }
  return out;
}

}  // namespace jseq
