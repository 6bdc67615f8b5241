#include "jseq/models.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jseq/parse.hpp"

namespace jseq {

bool FittingModel::has_world(const std::string& w) const {
  return std::binary_search(worlds.begin(), worlds.end(), w);
}

bool FittingModel::related(const std::string& w, const std::string& v) const {
  return rel.count({w, v}) != 0;
}

namespace {

bool logic_has(const LogicConfig& cfg, JAxiom a) { return cfg.has(a); }

WorldSet all_worlds(const FittingModel& m) {
  return WorldSet(m.worlds.begin(), m.worlds.end());
}

WorldSet base_lookup(const FittingModel& m, const TermPtr& t, const FormulaPtr& f) {
  auto it = m.base.find({t, f});
  return it == m.base.end() ? WorldSet{} : it->second;
}

// w ??r with F = ~r:A: evidence everywhere (jB base clause)
bool bar_query_universal(const LogicConfig& cfg, const TermPtr& t, const FormulaPtr& f) {
  return cfg.has(JAxiom::jB) && t->kind == TermKind::BarQuery &&
         f->kind == FormulaKind::Neg && f->left->kind == FormulaKind::Just &&
         equal(f->left->term, t->left);
}

WorldSet monotone_closure(const FittingModel& m, WorldSet s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [w, v] : m.rel)
      if (s.count(w) && !s.count(v)) {
        s.insert(v);
        changed = true;
      }
  }
  return s;
}

WorldSet anti_monotone_closure(const FittingModel& m, WorldSet s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [w, v] : m.rel)
      if (s.count(v) && !s.count(w)) {
        s.insert(w);
        changed = true;
      }
  }
  return s;
}

// ---- generated evidence function (no j5) ----

struct PairKey {
  TermPtr t;
  FormulaPtr f;
  bool operator<(const PairKey& o) const {
    if (int c = compare(t, o.t)) return c < 0;
    return compare(f, o.f) < 0;
  }
};

class GeneratedClosure {
public:
  GeneratedClosure(const FittingModel& m) : m_(m), j4_(logic_has(m.logic, JAxiom::j4)) {}

  WorldSet members(const TermPtr& t, const FormulaPtr& f) {
    PairKey key{t, f};
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;
    if (bar_query_universal(m_.logic, t, f)) {
      WorldSet w = all_worlds(m_);
      memo_[key] = w;
      return w;
    }
    WorldSet s = base_lookup(m_, t, f);
    switch (t->kind) {
      case TermKind::Sum: {
        for (const auto& w : members(t->left, f)) s.insert(w);
        for (const auto& w : members(t->right, f)) s.insert(w);
        break;
      }
      case TermKind::App: {
        for (const auto& g : app_candidates(t->left, t->right, f)) {
          WorldSet lhs = members(t->left, Formula::imp(g, f));
          if (lhs.empty()) continue;
          WorldSet rhs = members(t->right, g);
          for (const auto& w : lhs)
            if (rhs.count(w)) s.insert(w);
        }
        break;
      }
      case TermKind::Bang: {
        if (j4_ && f->kind == FormulaKind::Just && equal(f->term, t->left))
          for (const auto& w : members(t->left, f->left)) s.insert(w);
        break;
      }
      default:
        break;
    }
    if (j4_) s = monotone_closure(m_, s);
    memo_[key] = s;
    return s;
  }

  // formulas that can carry evidence for t (the support of E(t,·)),
  // excluding the jB universal shapes, which are handled symbolically
  const FormulaSet& support(const TermPtr& t) {
    auto hit = ders_.find(t);
    if (hit != ders_.end()) return hit->second;
    FormulaSet out;
    for (const auto& [pair, worlds] : m_.base)
      if (equal(pair.first, t) && !worlds.empty()) out.insert(pair.second);
    switch (t->kind) {
      case TermKind::Sum:
        for (const auto& f : support(t->left)) out.insert(f);
        for (const auto& f : support(t->right)) out.insert(f);
        break;
      case TermKind::App:
        for (const auto& f : support(t->left))
          if (f->kind == FormulaKind::Imp && evidenced(t->right, f->left)) out.insert(f->right);
        break;
      case TermKind::Bang:
        if (j4_)
          for (const auto& f : support(t->left)) out.insert(Formula::just(t->left, f));
        break;
      default:
        break;
    }
    return ders_.emplace(t, std::move(out)).first->second;
  }

private:
  const FittingModel& m_;
  bool j4_;
  std::map<PairKey, WorldSet> memo_;
  std::map<TermPtr, FormulaSet, TermLess> ders_;

  bool evidenced(const TermPtr& t, const FormulaPtr& f) {
    if (bar_query_universal(m_.logic, t, f)) return true;
    return support(t).count(f) != 0;
  }

  // candidate middle formulas G for E(a.b, F): G -> F must be in the support
  // of a, and b must possibly carry evidence for G
  FormulaSet app_candidates(const TermPtr& a, const TermPtr& b, const FormulaPtr& f) {
    FormulaSet out;
    for (const auto& g : support(a))
      if (g->kind == FormulaKind::Imp && equal(g->right, f) && evidenced(b, g->left))
        out.insert(g->left);
    return out;
  }
};

// ---- inductively generated evidence function (rank-gated) ----

class InductiveClosure {
public:
  explicit InductiveClosure(const FittingModel& m) : m_(m) {
    const auto& cfg = m.logic;
    bool j4 = cfg.has(JAxiom::j4), j5 = cfg.has(JAxiom::j5);
    if (j4 && j5)
      variant_ = Variant::Stable;
    else if (j4)
      variant_ = Variant::Monotone;
    else if (j5)
      variant_ = Variant::AntiMonotone;
    else
      variant_ = Variant::Plain;
  }

  bool member(const std::string& w, const TermPtr& t, const FormulaPtr& f) {
    WorldSet s = bar(t, f);
    switch (variant_) {
      case Variant::Plain:
        break;
      case Variant::Monotone:
        s = monotone_closure(m_, s);
        break;
      case Variant::AntiMonotone:
        s = anti_monotone_closure(m_, s);
        break;
      case Variant::Stable: {
        WorldSet mono = monotone_closure(m_, s);
        for (const auto& x : anti_monotone_closure(m_, s)) mono.insert(x);
        s = mono;
        break;
      }
    }
    return s.count(w) != 0;
  }

  // stage value at i = rk(t): the union of all stages for this pair
  WorldSet bar(const TermPtr& t, const FormulaPtr& f) {
    PairKey key{t, f};
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;
    const auto& cfg = m_.logic;
    WorldSet s;
    if (cfg.has(JAxiom::jB) && t->kind == TermKind::BarQuery && f->kind == FormulaKind::Neg &&
        f->left->kind == FormulaKind::Just && equal(f->left->term, t->left)) {
      s = all_worlds(m_);
      memo_[key] = s;
      return s;
    }
    s = base_lookup(m_, t, f);
    switch (t->kind) {
      case TermKind::Sum:
        for (const auto& w : bar(t->left, f)) s.insert(w);
        for (const auto& w : bar(t->right, f)) s.insert(w);
        break;
      case TermKind::App:
        for (const auto& g : app_candidates(t->left, t->right, f)) {
          WorldSet lhs = bar(t->left, Formula::imp(g, f));
          if (lhs.empty()) continue;
          WorldSet rhs = bar(t->right, g);
          for (const auto& w : lhs)
            if (rhs.count(w)) s.insert(w);
        }
        break;
      case TermKind::Bang:
        if (cfg.has(JAxiom::j4) && f->kind == FormulaKind::Just && equal(f->term, t->left))
          for (const auto& w : bar(t->left, f->left)) s.insert(w);
        break;
      case TermKind::Query:
        if (cfg.has(JAxiom::j5) && f->kind == FormulaKind::Neg &&
            f->left->kind == FormulaKind::Just && equal(f->left->term, t->left)) {
          WorldSet inner = bar(t->left, f->left->left);
          for (const auto& w : m_.worlds)
            if (!inner.count(w)) s.insert(w);
        }
        break;
      default:
        break;
    }
    memo_[key] = s;
    return s;
  }

private:
  enum class Variant { Plain, Monotone, AntiMonotone, Stable };
  const FittingModel& m_;
  Variant variant_;
  std::map<PairKey, WorldSet> memo_;
  std::map<TermPtr, FormulaSet, TermLess> ders_;

  const FormulaSet& support(const TermPtr& t) {
    auto hit = ders_.find(t);
    if (hit != ders_.end()) return hit->second;
    FormulaSet out;
    for (const auto& [pair, worlds] : m_.base)
      if (equal(pair.first, t) && !worlds.empty()) out.insert(pair.second);
    switch (t->kind) {
      case TermKind::Sum:
        for (const auto& f : support(t->left)) out.insert(f);
        for (const auto& f : support(t->right)) out.insert(f);
        break;
      case TermKind::App:
        for (const auto& f : support(t->left))
          if (f->kind == FormulaKind::Imp && !bar(t->right, f->left).empty())
            out.insert(f->right);
        break;
      case TermKind::Bang:
        if (m_.logic.has(JAxiom::j4))
          for (const auto& f : support(t->left)) out.insert(Formula::just(t->left, f));
        break;
      default:
        break;
    }
    return ders_.emplace(t, std::move(out)).first->second;
  }

  FormulaSet app_candidates(const TermPtr& a, const TermPtr& b, const FormulaPtr& f) {
    FormulaSet out;
    for (const auto& g : support(a))
      if (g->kind == FormulaKind::Imp && equal(g->right, f) && !bar(b, g->left).empty())
        out.insert(g->left);
    return out;
  }
};

bool rel_is_euclidean(const FittingModel& m) {
  for (const auto& [w, v] : m.rel)
    for (const auto& [w2, u] : m.rel)
      if (w == w2 && !m.related(v, u)) return false;
  return true;
}

}  // namespace

bool closure_membership(const FittingModel& m, const std::string& w, const TermPtr& t,
                        const FormulaPtr& f) {
  if (m.logic.has(JAxiom::j5))
    throw std::invalid_argument(
        "the generated evidence function is undefined for j5 logics; use "
        "inductive_closure_membership");
  if (!m.has_world(w)) throw std::invalid_argument("unknown world '" + w + "'");
  GeneratedClosure closure(m);
  return closure.members(t, f).count(w) != 0;
}

bool inductive_closure_membership(const FittingModel& m, const std::string& w, const TermPtr& t,
                                  const FormulaPtr& f) {
  if (!m.has_world(w)) throw std::invalid_argument("unknown world '" + w + "'");
  if (m.logic.has(JAxiom::j5) && !rel_is_euclidean(m))
    throw std::invalid_argument(
        "the inductive closure for a j5 logic needs a Euclidean accessibility relation");
  InductiveClosure closure(m);
  return closure.member(w, t, f);
}

bool evidence_membership(const FittingModel& m, const std::string& w, const TermPtr& t,
                         const FormulaPtr& f, ClosureKind closure) {
  switch (closure) {
    case ClosureKind::Raw: {
      auto it = m.base.find({t, f});
      return it != m.base.end() && it->second.count(w) != 0;
    }
    case ClosureKind::Generated:
      return closure_membership(m, w, t, f);
    case ClosureKind::Inductive:
      return inductive_closure_membership(m, w, t, f);
    case ClosureKind::Auto:
      return m.logic.has(JAxiom::j5) ? inductive_closure_membership(m, w, t, f)
                                     : closure_membership(m, w, t, f);
  }
  return false;
}

bool forces(const FittingModel& m, const std::string& w, const FormulaPtr& a,
            ClosureKind closure) {
  switch (a->kind) {
    case FormulaKind::Prop: {
      auto it = m.valuation.find(a->name);
      return it != m.valuation.end() && it->second.count(w) != 0;
    }
    case FormulaKind::Bottom:
      return false;
    case FormulaKind::Neg:
      return !forces(m, w, a->left, closure);
    case FormulaKind::And:
      return forces(m, w, a->left, closure) && forces(m, w, a->right, closure);
    case FormulaKind::Or:
      return forces(m, w, a->left, closure) || forces(m, w, a->right, closure);
    case FormulaKind::Imp:
      return !forces(m, w, a->left, closure) || forces(m, w, a->right, closure);
    case FormulaKind::Just: {
      if (!evidence_membership(m, w, a->term, a->left, closure)) return false;
      for (const auto& v : m.worlds)
        if (m.related(w, v) && !forces(m, v, a->left, closure)) return false;
      return true;
    }
    case FormulaKind::Box: {
      for (const auto& v : m.worlds)
        if (m.related(w, v) && !forces(m, v, a->left, closure)) return false;
      return true;
    }
  }
  return false;
}

Interpretation identity_interpretation(const Sequent& s) {
  Interpretation interp;
  for (const auto& l : s.labels()) interp[l] = l;
  return interp;
}

bool validates_sequent(const FittingModel& m, const Interpretation& interp, const Sequent& s,
                       ClosureKind closure) {
  auto world_of = [&](const Label& l) -> const std::string& {
    auto it = interp.find(l);
    if (it == interp.end())
      throw std::invalid_argument("interpretation is not total: no world for label '" + l + "'");
    return it->second;
  };
  auto validated = [&](const SequentItem& it) {
    switch (it.kind) {
      case ItemKind::Labeled:
        return forces(m, world_of(it.w), it.formula, closure);
      case ItemKind::Rel:
        return m.related(world_of(it.w), world_of(it.v));
      case ItemKind::Ev:
        return evidence_membership(m, world_of(it.w), it.term, it.formula, closure);
    }
    return false;
  };
  for (const auto& it : s.ante)
    if (!validated(it)) return true;
  for (const auto& it : s.succ)
    if (validated(it)) return true;
  return false;
}

// ---- frame-condition audit ----

TermSet EvidenceUniverse::terms() const {
  TermSet out;
  for (const auto& p : pairs) collect_subterms(p.first, out);
  return out;
}

FormulaSet EvidenceUniverse::formulas() const {
  FormulaSet out;
  for (const auto& p : pairs) collect_subformulas(p.second, out);
  return out;
}

EvidenceUniverse audit_universe_from_base(const FittingModel& m) {
  EvidenceUniverse u;
  for (const auto& [pair, worlds] : m.base) u.pairs.insert(pair);
  return u;
}

EvidenceUniverse default_audit_universe(const FittingModel& m, const Sequent& s) {
  EvidenceUniverse u = audit_universe_from_base(m);
  TermSet terms;
  FormulaSet formulas;
  auto add_item = [&](const SequentItem& it) {
    if (it.kind == ItemKind::Labeled) {
      collect_terms(it.formula, terms);
      collect_subformulas(it.formula, formulas);
    } else if (it.kind == ItemKind::Ev) {
      collect_subterms(it.term, terms);
      collect_terms(it.formula, terms);
      collect_subformulas(it.formula, formulas);
    }
  };
  for (const auto& it : s.ante) add_item(it);
  for (const auto& it : s.succ) add_item(it);
  for (const auto& t : terms)
    for (const auto& f : formulas) u.pairs.insert({t, f});
  return u;
}

std::string ConditionReport::to_string() const {
  std::string out;
  for (const auto& v : violations) out += v.condition + ": " + v.witness + "\n";
  return out;
}

ConditionReport check_conditions(const FittingModel& m, const EvidenceUniverse& universe,
                                 const ConstantSpec& cs, ClosureKind closure) {
  ConditionReport report;
  const LogicConfig& cfg = m.logic;
  auto violate = [&report](std::string cond, std::string witness) {
    report.violations.push_back({std::move(cond), std::move(witness)});
  };
  auto member = [&](const std::string& w, const TermPtr& t, const FormulaPtr& f) {
    return evidence_membership(m, w, t, f, closure);
  };

  // accessibility-relation properties
  bool need_refl = cfg.has(JAxiom::jT) || cfg.has(MAxiom::T);
  bool need_serial =
      (cfg.has(JAxiom::jD) && cfg.seriality_mode == SerialityMode::Rule) || cfg.has(MAxiom::D);
  bool need_trans = cfg.has(JAxiom::j4) || cfg.has(MAxiom::Four);
  bool need_sym = cfg.has(JAxiom::jB) || cfg.has(MAxiom::B);
  bool need_eucl = cfg.has(MAxiom::Five) || cfg.has(JAxiom::j5);
  if (need_refl)
    for (const auto& w : m.worlds)
      if (!m.related(w, w)) violate("R-reflexive", "world " + w + " has no loop");
  if (need_serial)
    for (const auto& w : m.worlds) {
      bool ok = false;
      for (const auto& v : m.worlds)
        if (m.related(w, v)) ok = true;
      if (!ok) violate("R-serial", "world " + w + " has no successor");
    }
  if (need_trans)
    for (const auto& [w, v] : m.rel)
      for (const auto& [v2, u] : m.rel)
        if (v == v2 && !m.related(w, u))
          violate("R-transitive", w + " R " + v + " R " + u + " but not " + w + " R " + u);
  if (need_sym)
    for (const auto& [w, v] : m.rel)
      if (!m.related(v, w)) violate("R-symmetric", w + " R " + v + " but not " + v + " R " + w);
  if (need_eucl)
    for (const auto& [w, v] : m.rel)
      for (const auto& [w2, u] : m.rel)
        if (w == w2 && !m.related(v, u))
          violate("R-Euclidean", w + " R " + v + ", " + w + " R " + u + " but not " + v + " R " + u);

  if (!cfg.justification_enabled) return report;
  // the inductive closure is undefined on non-Euclidean frames for j5 logics
  if (cfg.has(JAxiom::j5) && closure != ClosureKind::Raw && !rel_is_euclidean(m)) return report;

  auto pair_str = [](const TermPtr& t, const FormulaPtr& f) {
    return "(" + to_string(t) + ", " + to_string(f) + ")";
  };

  const auto& pairs = universe.pairs;
  TermSet uterms = universe.terms();

  // E1 application: E(s,A->B) ∩ E(t,A) ⊆ E(s.t,B)
  for (const auto& [s, sf] : pairs) {
    if (sf->kind != FormulaKind::Imp) continue;
    for (const auto& [t, tf] : pairs) {
      if (!equal(tf, sf->left)) continue;
      TermPtr st = Term::app(s, t);
      for (const auto& w : m.worlds)
        if (member(w, s, sf) && member(w, t, tf) && !member(w, st, sf->right))
          violate("E1", w + " lacks " + pair_str(st, sf->right));
    }
  }
  // E2 sum: E(s,A) ∪ E(t,A) ⊆ E(s+t,A)
  for (const auto& [t, f] : pairs) {
    for (const auto& s : uterms) {
      for (const auto& w : m.worlds) {
        if (!member(w, t, f)) continue;
        if (!member(w, Term::sum(s, t), f))
          violate("E2", w + " lacks " + pair_str(Term::sum(s, t), f));
        if (!member(w, Term::sum(t, s), f))
          violate("E2", w + " lacks " + pair_str(Term::sum(t, s), f));
      }
    }
  }
  if (cfg.has(JAxiom::j4)) {
    // E3 monotonicity
    for (const auto& [t, f] : pairs)
      for (const auto& [w, v] : m.rel)
        if (member(w, t, f) && !member(v, t, f))
          violate("E3", w + " in E" + pair_str(t, f) + " but successor " + v + " is not");
    // E4 positive introspection: E(t,A) ⊆ E(!t,t:A)
    for (const auto& [t, f] : pairs)
      for (const auto& w : m.worlds)
        if (member(w, t, f) && !member(w, Term::bang(t), Formula::just(t, f)))
          violate("E4", w + " lacks " + pair_str(Term::bang(t), Formula::just(t, f)));
  }
  if (cfg.has(JAxiom::jB)) {
    // E5 weak negative introspection: (M,w) |= ~A implies w in E(??t, ~t:A)
    for (const auto& f : universe.formulas())
      for (const auto& t : uterms)
        for (const auto& w : m.worlds)
          if (!forces(m, w, f, closure) &&
              !member(w, Term::bar_query(t), Formula::neg(Formula::just(t, f))))
            violate("E5", w + " fails ~" + to_string(f) + " -> E(??" + to_string(t) + ", ...)");
  }
  if (cfg.has(JAxiom::j5)) {
    // E6 negative introspection: complement of E(t,A) ⊆ E(?t,~t:A)
    for (const auto& [t, f] : pairs)
      for (const auto& w : m.worlds)
        if (!member(w, t, f) &&
            !member(w, Term::query(t), Formula::neg(Formula::just(t, f))))
          violate("E6", w + " lacks " + pair_str(Term::query(t), Formula::neg(Formula::just(t, f))));
    // E7 strong evidence: w in E(t,A) implies (M,w) |= t:A
    for (const auto& [t, f] : pairs)
      for (const auto& w : m.worlds)
        if (member(w, t, f) && !forces(m, w, Formula::just(t, f), closure))
          violate("E7", w + " in E" + pair_str(t, f) + " but does not force " +
                            to_string(Formula::just(t, f)));
  }
  if (cfg.s4lpn_extras) {
    for (const auto& [t, f] : pairs) {
      for (const auto& w : m.worlds)
        if (member(w, t, f) && !forces(m, w, Formula::just(t, f), closure))
          violate("E-strong", w + " in E" + pair_str(t, f) + " but does not force " +
                                  to_string(Formula::just(t, f)));
      for (const auto& [w, v] : m.rel)
        if (member(v, t, f) && !member(w, t, f))
          violate("E-anti-monotone",
                  v + " in E" + pair_str(t, f) + " but predecessor " + w + " is not");
    }
  }
  if (cfg.seriality_mode == SerialityMode::AxiomEBot) {
    // consistent evidence: E(t, false) is empty
    for (const auto& t : uterms)
      for (const auto& w : m.worlds)
        if (member(w, t, Formula::bottom()))
          violate("E-consistent", w + " in E" + pair_str(t, Formula::bottom()));
  }
  // CS respect: c:F in CS means evidence everywhere
  for (const auto& entry : cs.entries) {
    auto split = cs_entry_split(entry);
    if (!split) continue;
    TermPtr c = Term::constant(split->first);
    for (const auto& w : m.worlds)
      if (!member(w, c, split->second))
        violate("CS", "CS respect violated: " + w + " lacks " + pair_str(c, split->second));
  }
  return report;
}

// ---- countermodel extraction ----

FittingModel build_branch_model(const std::vector<SequentItem>& gamma_union,
                                const std::vector<SequentItem>& delta_union,
                                const LogicConfig& cfg, const ConstantSpec& cs) {
  (void)cs;
  FittingModel m;
  m.logic = cfg;
  std::set<std::string> worlds;
  auto note_labels = [&worlds](const SequentItem& it) {
    worlds.insert(it.w);
    if (it.kind == ItemKind::Rel) worlds.insert(it.v);
  };
  for (const auto& it : gamma_union) note_labels(it);
  for (const auto& it : delta_union) note_labels(it);
  m.worlds.assign(worlds.begin(), worlds.end());

  for (const auto& it : gamma_union) {
    switch (it.kind) {
      case ItemKind::Rel:
        m.rel.insert({it.w, it.v});
        break;
      case ItemKind::Ev:
        m.base[{it.term, it.formula}].insert(it.w);
        break;
      case ItemKind::Labeled:
        if (it.formula->kind == FormulaKind::Prop) m.valuation[it.formula->name].insert(it.w);
        break;
    }
  }
  // a serial frame must not have dead ends; saturated branches produced with
  // the serial-once heuristic may leave eigenlabels without successors
  bool need_serial =
      (cfg.has(JAxiom::jD) && cfg.seriality_mode == SerialityMode::Rule) || cfg.has(MAxiom::D);
  if (need_serial) {
    for (const auto& w : m.worlds) {
      bool has_succ = false;
      for (const auto& v : m.worlds)
        if (m.related(w, v)) has_succ = true;
      if (!has_succ) m.rel.insert({w, w});
    }
  }
  return m;
}

FittingModel extract_countermodel(const std::vector<Sequent>& branch, const Sequent& root,
                                  const LogicConfig& cfg, const ConstantSpec& cs) {
  std::vector<SequentItem> gamma, delta;
  Sequent acc_g, acc_d;  // use sequent sides as sorted multiset accumulators
  for (const auto& s : branch) {
    for (const auto& it : s.ante)
      if (!acc_g.ante_contains(it)) acc_g.insert_ante(it);
    for (const auto& it : s.succ)
      if (!acc_d.ante_contains(it)) acc_d.insert_ante(it);
  }
  gamma = acc_g.ante;
  delta = acc_d.ante;
  FittingModel m = build_branch_model(gamma, delta, cfg, cs);
  EvidenceUniverse universe = default_audit_universe(m, root);
  ConditionReport conditions = check_conditions(m, universe, cs);
  if (!conditions.pass())
    throw std::logic_error("extracted countermodel fails the frame conditions:\n" +
                           conditions.to_string());
  if (validates_sequent(m, identity_interpretation(root), root))
    throw std::logic_error("extracted countermodel does not invalidate the root sequent");
  return m;
}

// ---- JSON ----

std::string model_to_json(const FittingModel& m) {
  nlohmann::ordered_json j;
  j["worlds"] = m.worlds;
  nlohmann::ordered_json rel = nlohmann::ordered_json::array();
  for (const auto& [w, v] : m.rel) rel.push_back(nlohmann::ordered_json::array({w, v}));
  j["rel"] = rel;
  nlohmann::ordered_json evidence = nlohmann::ordered_json::array();
  for (const auto& [pair, worlds] : m.base) {
    nlohmann::ordered_json e;
    e["term"] = to_string(pair.first);
    e["formula"] = to_string(pair.second);
    e["worlds"] = worlds;
    evidence.push_back(e);
  }
  j["evidence"] = evidence;
  nlohmann::ordered_json valuation = nlohmann::ordered_json::object();
  for (const auto& [p, worlds] : m.valuation) valuation[p] = worlds;
  j["valuation"] = valuation;
  j["logic"] = m.logic.name;
  return j.dump(2);
}

FittingModel model_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  FittingModel m;
  if (j.contains("logic")) {
    auto cfg = logic_preset(j["logic"].get<std::string>());
    if (!cfg) throw std::invalid_argument("unknown logic '" + j["logic"].get<std::string>() + "'");
    m.logic = *cfg;
  }
  for (const auto& w : j.at("worlds")) m.worlds.push_back(w.get<std::string>());
  std::sort(m.worlds.begin(), m.worlds.end());
  m.worlds.erase(std::unique(m.worlds.begin(), m.worlds.end()), m.worlds.end());
  if (j.contains("rel"))
    for (const auto& p : j["rel"]) m.rel.insert({p.at(0).get<std::string>(), p.at(1).get<std::string>()});
  if (j.contains("evidence"))
    for (const auto& e : j["evidence"]) {
      TermPtr t = parse_term(e.at("term").get<std::string>());
      FormulaPtr f = parse_formula(e.at("formula").get<std::string>());
      for (const auto& w : e.at("worlds")) m.base[{t, f}].insert(w.get<std::string>());
    }
  if (j.contains("valuation"))
    for (const auto& [p, worlds] : j["valuation"].items())
      for (const auto& w : worlds) m.valuation[p].insert(w.get<std::string>());
  for (const auto& [pair, worlds] : m.base)
    for (const auto& w : worlds)
      if (!m.has_world(w)) throw std::invalid_argument("evidence names unknown world '" + w + "'");
  for (const auto& [w, v] : m.rel)
    if (!m.has_world(w) || !m.has_world(v))
      throw std::invalid_argument("relation names an unknown world");
  return m;
}

}  // namespace jseq
