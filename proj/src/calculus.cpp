#include "jseq/calculus.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "jseq/parse.hpp"
#include "jseq/search.hpp"

namespace jseq {

int Derivation::height() const {
  int h = 0;
  for (const auto& p : premises) h = std::max(h, p.height() + 1);
  return h;
}

std::optional<RuleId> is_initial(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& s,
                                 std::vector<SequentItem>* principal) {
  (void)cs;
  // (Ax): some w |= P, P a propositional variable, on both sides
  for (const auto& it : s.ante) {
    if (it.kind != ItemKind::Labeled || it.formula->kind != FormulaKind::Prop) continue;
    if (s.succ_contains(it)) {
      if (principal) *principal = {it, it};
      return RuleId::Ax;
    }
  }
  // (AxBot): some w |= false in the antecedent
  for (const auto& it : s.ante) {
    if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Bottom) {
      if (principal) *principal = {it};
      return RuleId::AxBot;
    }
  }
  // (AxR): identical relational atom on both sides
  for (const auto& it : s.ante) {
    if (it.kind == ItemKind::Rel && s.succ_contains(it)) {
      if (principal) *principal = {it, it};
      return RuleId::AxR;
    }
  }
  // (AxE): identical evidence atom on both sides
  for (const auto& it : s.ante) {
    if (it.kind == ItemKind::Ev && s.succ_contains(it)) {
      if (principal) *principal = {it, it};
      return RuleId::AxE;
    }
  }
  // (AxEBot): some w E(t, false) in the antecedent, Fk variant only
  if (cfg.seriality_mode == SerialityMode::AxiomEBot) {
    for (const auto& it : s.ante) {
      if (it.kind == ItemKind::Ev && it.formula->kind == FormulaKind::Bottom) {
        if (principal) *principal = {it};
        return RuleId::AxEBot;
      }
    }
  }
  return std::nullopt;
}

namespace {

Sequent seq_remove_ante(Sequent s, const SequentItem& it) {
  s.erase_ante(it);
  return s;
}
Sequent seq_remove_succ(Sequent s, const SequentItem& it) {
  s.erase_succ(it);
  return s;
}
Sequent seq_add_ante(Sequent s, const SequentItem& it) {
  s.insert_ante(it);
  return s;
}
Sequent seq_add_succ(Sequent s, const SequentItem& it) {
  s.insert_succ(it);
  return s;
}

// multiset difference premise side - conclusion side
std::vector<SequentItem> side_diff(const std::vector<SequentItem>& premise,
                                   const std::vector<SequentItem>& conclusion) {
  std::vector<SequentItem> out;
  std::size_t i = 0, j = 0;
  while (i < premise.size()) {
    if (j < conclusion.size()) {
      int c = compare(premise[i], conclusion[j]);
      if (c == 0) {
        ++i;
        ++j;
        continue;
      }
      if (c > 0) {
        ++j;
        continue;
      }
    }
    out.push_back(premise[i]);
    ++i;
  }
  return out;
}

bool is_just_item(const SequentItem& it) {
  return it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Just;
}
bool is_box_item(const SequentItem& it) {
  return it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Box;
}

FormulaPtr neg_just(const TermPtr& t, const FormulaPtr& a) {
  return Formula::neg(Formula::just(t, a));
}

}  // namespace

namespace {
struct StopEnumeration {};
}  // namespace

void enumerate_backward_instances(const LogicConfig& cfg, const ConstantSpec& cs, RuleId rule,
                                  const Sequent& s, const AnalyticityUniverse& universe,
                                  const std::function<Label()>& fresh,
                                  const std::function<bool(RuleInstance&&)>& sink,
                                  const Sequent* dagger_reference) {
  // condition (†) is checked against dagger_reference (the search passes the
  // branch union so rules never re-add a formula the branch has already seen)
  const Sequent& dag = dagger_reference ? *dagger_reference : s;
  auto emit = [&](std::vector<SequentItem> principal, std::vector<Sequent> premises,
                  std::optional<Label> eigen = std::nullopt) {
    RuleInstance inst;
    inst.rule = rule;
    inst.conclusion = s;
    inst.premises = std::move(premises);
    inst.principal = std::move(principal);
    inst.eigenlabel = std::move(eigen);
    if (!sink(std::move(inst))) throw StopEnumeration{};
  };
  try {

  switch (rule) {
    case RuleId::LNeg:
      for (const auto& it : s.ante)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Neg)
          emit({it}, {seq_add_succ(seq_remove_ante(s, it),
                                   SequentItem::labeled(it.w, it.formula->left))});
      break;
    case RuleId::RNeg:
      for (const auto& it : s.succ)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Neg)
          emit({it}, {seq_add_ante(seq_remove_succ(s, it),
                                   SequentItem::labeled(it.w, it.formula->left))});
      break;
    case RuleId::LAnd:
      for (const auto& it : s.ante)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::And) {
          Sequent p = seq_remove_ante(s, it);
          p.insert_ante(SequentItem::labeled(it.w, it.formula->left));
          p.insert_ante(SequentItem::labeled(it.w, it.formula->right));
          emit({it}, {p});
        }
      break;
    case RuleId::RAnd:
      for (const auto& it : s.succ)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::And) {
          Sequent base = seq_remove_succ(s, it);
          emit({it}, {seq_add_succ(base, SequentItem::labeled(it.w, it.formula->left)),
                      seq_add_succ(base, SequentItem::labeled(it.w, it.formula->right))});
        }
      break;
    case RuleId::LOr:
      for (const auto& it : s.ante)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Or) {
          Sequent base = seq_remove_ante(s, it);
          emit({it}, {seq_add_ante(base, SequentItem::labeled(it.w, it.formula->left)),
                      seq_add_ante(base, SequentItem::labeled(it.w, it.formula->right))});
        }
      break;
    case RuleId::ROr:
      for (const auto& it : s.succ)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Or) {
          Sequent p = seq_remove_succ(s, it);
          p.insert_succ(SequentItem::labeled(it.w, it.formula->left));
          p.insert_succ(SequentItem::labeled(it.w, it.formula->right));
          emit({it}, {p});
        }
      break;
    case RuleId::LImp:
      for (const auto& it : s.ante)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Imp) {
          Sequent base = seq_remove_ante(s, it);
          emit({it}, {seq_add_succ(base, SequentItem::labeled(it.w, it.formula->left)),
                      seq_add_ante(base, SequentItem::labeled(it.w, it.formula->right))});
        }
      break;
    case RuleId::RImp:
      for (const auto& it : s.succ)
        if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Imp) {
          Sequent p = seq_remove_succ(s, it);
          p.insert_ante(SequentItem::labeled(it.w, it.formula->left));
          p.insert_succ(SequentItem::labeled(it.w, it.formula->right));
          emit({it}, {p});
        }
      break;

    case RuleId::LColon:
      for (const auto& it : s.ante) {
        if (!is_just_item(it)) continue;
        for (const auto& rel : s.ante) {
          if (rel.kind != ItemKind::Rel || rel.w != it.w) continue;
          SequentItem added = SequentItem::labeled(rel.v, it.formula->left);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({it, rel}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::RColon:
      for (const auto& ev : s.ante) {
        if (ev.kind != ItemKind::Ev) continue;
        SequentItem target = SequentItem::labeled(ev.w, Formula::just(ev.term, ev.formula));
        if (!s.succ_contains(target)) continue;
        Label v = fresh();
        Sequent p = seq_remove_succ(s, target);
        p.insert_ante(SequentItem::rel(ev.w, v));
        p.insert_succ(SequentItem::labeled(v, ev.formula));
        emit({ev, target}, {p}, v);
      }
      break;
    case RuleId::E:
      for (const auto& it : s.ante) {
        if (!is_just_item(it)) continue;
        SequentItem added = SequentItem::ev(it.w, it.formula->term, it.formula->left);
        if (dag.ante_contains(added)) continue;  // (†)
        emit({it}, {seq_add_ante(s, added)});
      }
      break;

    case RuleId::AN:
    case RuleId::IAN:
      for (const auto& w : s.labels()) {
        for (const auto& entry : cs.entries) {
          auto split = cs_entry_split(entry);
          if (!split) continue;
          SequentItem added =
              SequentItem::ev(w, Term::constant(split->first), split->second);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({}, {seq_add_ante(s, added)});
        }
      }
      break;

    case RuleId::ElPlus:
    case RuleId::ErPlus:
      for (const auto& it : s.ante) {
        if (it.kind != ItemKind::Ev) continue;
        for (const auto& u : universe.subterms) {
          if (u->kind != TermKind::Sum) continue;
          const TermPtr& shared = rule == RuleId::ElPlus ? u->right : u->left;
          if (!equal(shared, it.term)) continue;
          SequentItem added = SequentItem::ev(it.w, u, it.formula);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({it}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::EDot:
      for (const auto& e1 : s.ante) {
        if (e1.kind != ItemKind::Ev || e1.formula->kind != FormulaKind::Imp) continue;
        for (const auto& e2 : s.ante) {
          if (e2.kind != ItemKind::Ev || e2.w != e1.w) continue;
          if (!equal(e2.formula, e1.formula->left)) continue;
          TermPtr u = Term::app(e1.term, e2.term);
          if (!universe.has_term(u)) continue;  // subterm restriction
          SequentItem added = SequentItem::ev(e1.w, u, e1.formula->right);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({e1, e2}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::EBang:
      for (const auto& it : s.ante) {
        if (it.kind != ItemKind::Ev) continue;
        TermPtr u = Term::bang(it.term);
        if (!universe.has_term(u)) continue;
        SequentItem added = SequentItem::ev(it.w, u, Formula::just(it.term, it.formula));
        if (dag.ante_contains(added)) continue;  // (†)
        emit({it}, {seq_add_ante(s, added)});
      }
      break;
    case RuleId::Mon:
      for (const auto& it : s.ante) {
        if (it.kind != ItemKind::Ev) continue;
        for (const auto& rel : s.ante) {
          if (rel.kind != ItemKind::Rel || rel.w != it.w) continue;
          SequentItem added = SequentItem::ev(rel.v, it.term, it.formula);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({it, rel}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::AntiMon:
      for (const auto& it : s.ante) {
        if (it.kind != ItemKind::Ev) continue;
        for (const auto& rel : s.ante) {
          if (rel.kind != ItemKind::Rel || rel.v != it.w) continue;
          SequentItem added = SequentItem::ev(rel.w, it.term, it.formula);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({it, rel}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::SE:
      for (const auto& it : s.ante) {
        if (it.kind != ItemKind::Ev) continue;
        SequentItem added = SequentItem::labeled(it.w, Formula::just(it.term, it.formula));
        if (dag.ante_contains(added)) continue;  // (†)
        emit({it}, {seq_add_ante(s, added)});
      }
      break;
    case RuleId::EQ:
    case RuleId::EBarQ: {
      TermKind wrapper = rule == RuleId::EQ ? TermKind::Query : TermKind::BarQuery;
      for (const auto& w : s.labels()) {
        for (const auto& u : universe.subterms) {
          if (u->kind != wrapper) continue;
          const TermPtr& t = u->left;
          for (const auto& a : universe.subformulas) {
            SequentItem left = rule == RuleId::EQ ? SequentItem::ev(w, t, a)
                                                  : SequentItem::labeled(w, a);
            SequentItem right = SequentItem::ev(w, u, neg_just(t, a));
            if (dag.ante_contains(left) || dag.ante_contains(right)) continue;  // (†)
            emit({}, {seq_add_ante(s, left), seq_add_ante(s, right)});
          }
        }
      }
      break;
    }

    case RuleId::LBox:
      for (const auto& it : s.ante) {
        if (!is_box_item(it)) continue;
        for (const auto& rel : s.ante) {
          if (rel.kind != ItemKind::Rel || rel.w != it.w) continue;
          SequentItem added = SequentItem::labeled(rel.v, it.formula->left);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({it, rel}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::RBox:
      for (const auto& it : s.succ) {
        if (!is_box_item(it)) continue;
        Label v = fresh();
        Sequent p = seq_remove_succ(s, it);
        p.insert_ante(SequentItem::rel(it.w, v));
        p.insert_succ(SequentItem::labeled(v, it.formula->left));
        emit({it}, {p}, v);
      }
      break;

    case RuleId::Ref:
      for (const auto& w : s.labels()) {
        SequentItem added = SequentItem::rel(w, w);
        if (dag.ante_contains(added)) continue;  // (†)
        emit({}, {seq_add_ante(s, added)});
      }
      break;
    case RuleId::Ser:
      for (const auto& w : s.labels()) {
        Label v = fresh();
        emit({}, {seq_add_ante(s, SequentItem::rel(w, v))}, v);
      }
      break;
    case RuleId::Sym:
      for (const auto& it : s.ante) {
        if (it.kind != ItemKind::Rel) continue;
        SequentItem added = SequentItem::rel(it.v, it.w);
        if (dag.ante_contains(added)) continue;  // (†)
        emit({it}, {seq_add_ante(s, added)});
      }
      break;
    case RuleId::Trans:
      for (const auto& r1 : s.ante) {
        if (r1.kind != ItemKind::Rel) continue;
        for (const auto& r2 : s.ante) {
          if (r2.kind != ItemKind::Rel || r2.w != r1.v) continue;
          SequentItem added = SequentItem::rel(r1.w, r2.v);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({r1, r2}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::Eucl:
      for (std::size_t i = 0; i < s.ante.size(); ++i) {
        if (s.ante[i].kind != ItemKind::Rel) continue;
        for (std::size_t j = 0; j < s.ante.size(); ++j) {
          if (i == j || s.ante[j].kind != ItemKind::Rel) continue;
          if (s.ante[i].w != s.ante[j].w) continue;
          SequentItem added = SequentItem::rel(s.ante[i].v, s.ante[j].v);
          if (dag.ante_contains(added)) continue;  // (†)
          emit({s.ante[i], s.ante[j]}, {seq_add_ante(s, added)});
        }
      }
      break;
    case RuleId::EuclStar:
      for (const auto& it : s.ante) {
        if (it.kind != ItemKind::Rel) continue;
        SequentItem added = SequentItem::rel(it.v, it.v);
        if (dag.ante_contains(added)) continue;  // (†)
        emit({it}, {seq_add_ante(s, added)});
      }
      break;

    default:
      break;  // initial-sequent rules have no backward instances
  }
  } catch (const StopEnumeration&) {
  }
}

std::vector<RuleInstance> backward_instances(const LogicConfig& cfg, const ConstantSpec& cs,
                                             RuleId rule, const Sequent& s,
                                             const AnalyticityUniverse& universe,
                                             const std::function<Label()>& fresh) {
  std::vector<RuleInstance> out;
  enumerate_backward_instances(cfg, cs, rule, s, universe, fresh,
                               [&out](RuleInstance&& inst) {
                                 out.push_back(std::move(inst));
                                 return true;
                               },
                               nullptr);
  return out;
}

// ---- the schema checker ----

namespace {

struct NodeError {
  std::string message;
};

// Recomputes the premises the schema dictates for the node, recovering the
// instantiation of principal-free rules from the first premise's diff.
std::optional<std::vector<Sequent>> expected_premises(const LogicConfig& cfg,
                                                      const ConstantSpec& cs, const Derivation& d,
                                                      NodeError& err) {
  const Sequent& s = d.sequent;
  const auto& pr = d.principal;
  auto fail = [&err](std::string m) -> std::optional<std::vector<Sequent>> {
    err.message = std::move(m);
    return std::nullopt;
  };
  auto need_principal = [&](std::size_t n) {
    if (pr.size() != n) {
      err.message = "rule " + std::string(to_string(d.rule)) + " expects " + std::to_string(n) +
                    " principal item(s), got " + std::to_string(pr.size());
      return false;
    }
    return true;
  };
  auto in_ante = [&](const SequentItem& it) { return s.ante_contains(it); };
  auto in_succ = [&](const SequentItem& it) { return s.succ_contains(it); };

  // diff of premise 0 against the conclusion, used by principal-free rules
  auto premise0_added_ante = [&]() -> std::vector<SequentItem> {
    if (d.premises.empty()) return {};
    return side_diff(d.premises[0].sequent.ante, s.ante);
  };

  switch (d.rule) {
    case RuleId::LNeg: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::Neg || !in_ante(p))
        return fail("principal of LNeg must be a negated labeled formula in the antecedent");
      return {{seq_add_succ(seq_remove_ante(s, p), SequentItem::labeled(p.w, p.formula->left))}};
    }
    case RuleId::RNeg: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::Neg || !in_succ(p))
        return fail("principal of RNeg must be a negated labeled formula in the succedent");
      return {{seq_add_ante(seq_remove_succ(s, p), SequentItem::labeled(p.w, p.formula->left))}};
    }
    case RuleId::LAnd: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::And || !in_ante(p))
        return fail("principal of LAnd must be a conjunction in the antecedent");
      Sequent q = seq_remove_ante(s, p);
      q.insert_ante(SequentItem::labeled(p.w, p.formula->left));
      q.insert_ante(SequentItem::labeled(p.w, p.formula->right));
      return {{q}};
    }
    case RuleId::RAnd: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::And || !in_succ(p))
        return fail("principal of RAnd must be a conjunction in the succedent");
      Sequent base = seq_remove_succ(s, p);
      return {{seq_add_succ(base, SequentItem::labeled(p.w, p.formula->left)),
               seq_add_succ(base, SequentItem::labeled(p.w, p.formula->right))}};
    }
    case RuleId::LOr: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::Or || !in_ante(p))
        return fail("principal of LOr must be a disjunction in the antecedent");
      Sequent base = seq_remove_ante(s, p);
      return {{seq_add_ante(base, SequentItem::labeled(p.w, p.formula->left)),
               seq_add_ante(base, SequentItem::labeled(p.w, p.formula->right))}};
    }
    case RuleId::ROr: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::Or || !in_succ(p))
        return fail("principal of ROr must be a disjunction in the succedent");
      Sequent q = seq_remove_succ(s, p);
      q.insert_succ(SequentItem::labeled(p.w, p.formula->left));
      q.insert_succ(SequentItem::labeled(p.w, p.formula->right));
      return {{q}};
    }
    case RuleId::LImp: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::Imp || !in_ante(p))
        return fail("principal of LImp must be an implication in the antecedent");
      Sequent base = seq_remove_ante(s, p);
      return {{seq_add_succ(base, SequentItem::labeled(p.w, p.formula->left)),
               seq_add_ante(base, SequentItem::labeled(p.w, p.formula->right))}};
    }
    case RuleId::RImp: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Labeled || p.formula->kind != FormulaKind::Imp || !in_succ(p))
        return fail("principal of RImp must be an implication in the succedent");
      Sequent q = seq_remove_succ(s, p);
      q.insert_ante(SequentItem::labeled(p.w, p.formula->left));
      q.insert_succ(SequentItem::labeled(p.w, p.formula->right));
      return {{q}};
    }

    case RuleId::LColon:
    case RuleId::LBox: {
      if (!need_principal(2)) return std::nullopt;
      const auto& lf = pr[0];
      const auto& rel = pr[1];
      bool shape = d.rule == RuleId::LColon ? is_just_item(lf) : is_box_item(lf);
      if (!shape || !in_ante(lf)) return fail("first principal must be in the antecedent");
      if (rel.kind != ItemKind::Rel || !in_ante(rel) || rel.w != lf.w)
        return fail("second principal must be a matching relational atom");
      return {{seq_add_ante(s, SequentItem::labeled(rel.v, lf.formula->left))}};
    }
    case RuleId::RColon: {
      if (!need_principal(2)) return std::nullopt;
      const auto& ev = pr[0];
      const auto& target = pr[1];
      if (ev.kind != ItemKind::Ev || !in_ante(ev))
        return fail("first principal of RColon must be an evidence atom in the antecedent");
      if (target.kind != ItemKind::Labeled || !is_just_item(target) || !in_succ(target) ||
          target.w != ev.w || !equal(target.formula->term, ev.term) ||
          !equal(target.formula->left, ev.formula))
        return fail("second principal of RColon must be the matching w |= t:A in the succedent");
      if (!d.eigenlabel) return fail("RColon requires an eigenlabel");
      Sequent q = seq_remove_succ(s, target);
      q.insert_ante(SequentItem::rel(ev.w, *d.eigenlabel));
      q.insert_succ(SequentItem::labeled(*d.eigenlabel, ev.formula));
      return {{q}};
    }
    case RuleId::RBox: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (!is_box_item(p) || !in_succ(p))
        return fail("principal of RBox must be a boxed formula in the succedent");
      if (!d.eigenlabel) return fail("RBox requires an eigenlabel");
      Sequent q = seq_remove_succ(s, p);
      q.insert_ante(SequentItem::rel(p.w, *d.eigenlabel));
      q.insert_succ(SequentItem::labeled(*d.eigenlabel, p.formula->left));
      return {{q}};
    }
    case RuleId::E: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (!is_just_item(p) || !in_ante(p))
        return fail("principal of E must be w |= t:A in the antecedent");
      return {{seq_add_ante(s, SequentItem::ev(p.w, p.formula->term, p.formula->left))}};
    }
    case RuleId::SE: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Ev || !in_ante(p))
        return fail("principal of SE must be an evidence atom in the antecedent");
      return {{seq_add_ante(s, SequentItem::labeled(p.w, Formula::just(p.term, p.formula)))}};
    }

    case RuleId::AN:
    case RuleId::IAN: {
      auto added = premise0_added_ante();
      if (added.size() != 1 || added[0].kind != ItemKind::Ev ||
          added[0].term->kind != TermKind::Const)
        return fail("AN/IAN must add exactly one evidence atom with a constant head");
      FormulaPtr entry = Formula::just(added[0].term, added[0].formula);
      if (!cs.contains(entry))
        return fail("constant specification violation: '" + to_string(entry) +
                    "' is not in the CS");
      return {{seq_add_ante(s, added[0])}};
    }

    case RuleId::ElPlus:
    case RuleId::ErPlus: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Ev || !in_ante(p))
        return fail("principal must be an evidence atom in the antecedent");
      auto added = premise0_added_ante();
      if (added.size() != 1 || added[0].kind != ItemKind::Ev ||
          added[0].term->kind != TermKind::Sum || added[0].w != p.w ||
          !equal(added[0].formula, p.formula))
        return fail("El+/Er+ must add one sum evidence atom for the same world and formula");
      const TermPtr& shared =
          d.rule == RuleId::ElPlus ? added[0].term->right : added[0].term->left;
      if (!equal(shared, p.term))
        return fail(d.rule == RuleId::ElPlus ? "El+ keeps the principal term on the right"
                                             : "Er+ keeps the principal term on the left");
      return {{seq_add_ante(s, added[0])}};
    }
    case RuleId::EDot: {
      if (!need_principal(2)) return std::nullopt;
      const auto& e1 = pr[0];
      const auto& e2 = pr[1];
      if (e1.kind != ItemKind::Ev || e2.kind != ItemKind::Ev || !in_ante(e1) || !in_ante(e2) ||
          e1.w != e2.w || e1.formula->kind != FormulaKind::Imp ||
          !equal(e1.formula->left, e2.formula))
        return fail("principals of E. must be w E(s,A->B) and w E(t,A)");
      return {{seq_add_ante(
          s, SequentItem::ev(e1.w, Term::app(e1.term, e2.term), e1.formula->right))}};
    }
    case RuleId::EBang: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Ev || !in_ante(p))
        return fail("principal of E! must be an evidence atom in the antecedent");
      return {{seq_add_ante(
          s, SequentItem::ev(p.w, Term::bang(p.term), Formula::just(p.term, p.formula)))}};
    }
    case RuleId::Mon: {
      if (!need_principal(2)) return std::nullopt;
      const auto& ev = pr[0];
      const auto& rel = pr[1];
      if (ev.kind != ItemKind::Ev || rel.kind != ItemKind::Rel || !in_ante(ev) || !in_ante(rel) ||
          rel.w != ev.w)
        return fail("principals of Mon must be w E(t,A) and w R v");
      return {{seq_add_ante(s, SequentItem::ev(rel.v, ev.term, ev.formula))}};
    }
    case RuleId::AntiMon: {
      if (!need_principal(2)) return std::nullopt;
      const auto& ev = pr[0];
      const auto& rel = pr[1];
      if (ev.kind != ItemKind::Ev || rel.kind != ItemKind::Rel || !in_ante(ev) || !in_ante(rel) ||
          rel.v != ev.w)
        return fail("principals of Anti-Mon must be v E(t,A) and w R v");
      return {{seq_add_ante(s, SequentItem::ev(rel.w, ev.term, ev.formula))}};
    }
    case RuleId::EQ:
    case RuleId::EBarQ: {
      if (d.premises.size() != 2) return fail("E?/E?? have two premises");
      auto added0 = premise0_added_ante();
      auto added1 = side_diff(d.premises[1].sequent.ante, s.ante);
      if (added0.size() != 1 || added1.size() != 1)
        return fail("E?/E?? must add exactly one antecedent formula per premise");
      const auto& right = added1[0];
      TermKind wrapper = d.rule == RuleId::EQ ? TermKind::Query : TermKind::BarQuery;
      if (right.kind != ItemKind::Ev || right.term->kind != wrapper ||
          right.formula->kind != FormulaKind::Neg ||
          right.formula->left->kind != FormulaKind::Just ||
          !equal(right.formula->left->term, right.term->left))
        return fail("second premise of E?/E?? must add w E(?t,~t:A) (resp. ??t)");
      const TermPtr& t = right.term->left;
      const FormulaPtr& a = right.formula->left->left;
      SequentItem expect_left = d.rule == RuleId::EQ
                                    ? SequentItem::ev(right.w, t, a)
                                    : SequentItem::labeled(right.w, a);
      if (!(added0[0] == expect_left))
        return fail("first premise of E?/E?? does not match the instantiation");
      return {{seq_add_ante(s, added0[0]), seq_add_ante(s, right)}};
    }

    case RuleId::Ref: {
      auto added = premise0_added_ante();
      if (added.size() != 1 || added[0].kind != ItemKind::Rel || added[0].w != added[0].v)
        return fail("Ref must add one reflexive relational atom");
      return {{seq_add_ante(s, added[0])}};
    }
    case RuleId::Ser: {
      auto added = premise0_added_ante();
      if (added.size() != 1 || added[0].kind != ItemKind::Rel)
        return fail("Ser must add one relational atom");
      if (!d.eigenlabel || added[0].v != *d.eigenlabel)
        return fail("Ser must introduce its eigenlabel as the successor");
      return {{seq_add_ante(s, added[0])}};
    }
    case RuleId::Sym: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Rel || !in_ante(p))
        return fail("principal of Sym must be a relational atom in the antecedent");
      return {{seq_add_ante(s, SequentItem::rel(p.v, p.w))}};
    }
    case RuleId::Trans: {
      if (!need_principal(2)) return std::nullopt;
      const auto& r1 = pr[0];
      const auto& r2 = pr[1];
      if (r1.kind != ItemKind::Rel || r2.kind != ItemKind::Rel || !in_ante(r1) || !in_ante(r2) ||
          r1.v != r2.w)
        return fail("principals of Trans must be w R v and v R u");
      return {{seq_add_ante(s, SequentItem::rel(r1.w, r2.v))}};
    }
    case RuleId::Eucl: {
      if (!need_principal(2)) return std::nullopt;
      const auto& r1 = pr[0];
      const auto& r2 = pr[1];
      if (r1.kind != ItemKind::Rel || r2.kind != ItemKind::Rel || !in_ante(r1) || !in_ante(r2) ||
          r1.w != r2.w)
        return fail("principals of Eucl must be w R v and w R u");
      return {{seq_add_ante(s, SequentItem::rel(r1.v, r2.v))}};
    }
    case RuleId::EuclStar: {
      if (!need_principal(1)) return std::nullopt;
      const auto& p = pr[0];
      if (p.kind != ItemKind::Rel || !in_ante(p))
        return fail("principal of Eucl* must be a relational atom in the antecedent");
      return {{seq_add_ante(s, SequentItem::rel(p.v, p.v))}};
    }

    default:
      return fail("rule " + std::string(to_string(d.rule)) + " cannot justify an internal node");
  }
}

bool check_node(const LogicConfig& cfg, const ConstantSpec& cs, const RuleSet& rules,
                const Derivation& d, const std::string& path, CheckResult& result) {
  auto fail = [&](const std::string& msg) {
    result.ok = false;
    result.node_path = path;
    result.error = std::string(to_string(d.rule)) + ": " + msg;
    return false;
  };

  if (d.premises.empty()) {
    if (!rule_is_initial(d.rule)) return fail("internal rule used as a leaf");
    std::vector<SequentItem> principal;
    auto found = is_initial(cfg, cs, d.sequent, &principal);
    // the leaf may name any admissible initial rule, not only the first match
    bool ok = false;
    switch (d.rule) {
      case RuleId::Ax:
        for (const auto& it : d.sequent.ante)
          if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Prop &&
              d.sequent.succ_contains(it))
            ok = true;
        break;
      case RuleId::AxBot:
        for (const auto& it : d.sequent.ante)
          if (it.kind == ItemKind::Labeled && it.formula->kind == FormulaKind::Bottom) ok = true;
        break;
      case RuleId::AxR:
        for (const auto& it : d.sequent.ante)
          if (it.kind == ItemKind::Rel && d.sequent.succ_contains(it)) ok = true;
        break;
      case RuleId::AxE:
        for (const auto& it : d.sequent.ante)
          if (it.kind == ItemKind::Ev && d.sequent.succ_contains(it)) ok = true;
        break;
      case RuleId::AxEBot:
        if (cfg.seriality_mode == SerialityMode::AxiomEBot)
          for (const auto& it : d.sequent.ante)
            if (it.kind == ItemKind::Ev && it.formula->kind == FormulaKind::Bottom) ok = true;
        break;
      default:
        break;
    }
    (void)found;
    if (!ok) return fail("sequent is not an initial sequent of this form");
    return true;
  }

  if (!rules.count(d.rule))
    return fail("rule is not active in " + cfg.name);
  if (static_cast<int>(d.premises.size()) != rule_arity(d.rule))
    return fail("premise count does not match the rule arity");
  if (rule_has_eigenlabel(d.rule)) {
    if (!d.eigenlabel) return fail("missing eigenlabel");
    auto labels = d.sequent.labels();
    if (std::binary_search(labels.begin(), labels.end(), *d.eigenlabel))
      return fail("eigenlabel occurs in the conclusion");
  } else if (d.eigenlabel) {
    return fail("unexpected eigenlabel");
  }

  NodeError err;
  auto expected = expected_premises(cfg, cs, d, err);
  if (!expected) return fail(err.message);
  for (std::size_t i = 0; i < expected->size(); ++i) {
    if (!(d.premises[i].sequent == (*expected)[i]))
      return fail("premise " + std::to_string(i) + " does not match the rule schema");
  }
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    if (!check_node(cfg, cs, rules, d.premises[i], path + "." + std::to_string(i), result))
      return false;
  }
  return true;
}

}  // namespace

CheckResult check_derivation(const LogicConfig& cfg, const ConstantSpec& cs, const Derivation& d) {
  CheckResult result;
  RuleSet rules = rules_for_logic(cfg);
  check_node(cfg, cs, rules, d, "0", result);
  return result;
}

// ---- label substitution ----

namespace {

SequentItem rename_item(const SequentItem& it, const Label& from, const Label& to) {
  SequentItem out = it;
  if (out.w == from) out.w = to;
  if (out.kind == ItemKind::Rel && out.v == from) out.v = to;
  return out;
}

Sequent rename_sequent(const Sequent& s, const Label& from, const Label& to) {
  Sequent out;
  for (const auto& it : s.ante) out.insert_ante(rename_item(it, from, to));
  for (const auto& it : s.succ) out.insert_succ(rename_item(it, from, to));
  return out;
}

Derivation rename_derivation(const Derivation& d, const Label& from, const Label& to) {
  Derivation out;
  out.sequent = rename_sequent(d.sequent, from, to);
  out.rule = d.rule;
  for (const auto& p : d.principal) out.principal.push_back(rename_item(p, from, to));
  if (d.eigenlabel) out.eigenlabel = *d.eigenlabel == from ? to : *d.eigenlabel;
  for (const auto& p : d.premises) out.premises.push_back(rename_derivation(p, from, to));
  return out;
}

Label fresh_label(std::set<Label>& used) {
  for (long i = 1;; ++i) {
    Label cand = "u" + std::to_string(i);
    if (used.insert(cand).second) return cand;
  }
}

// renames eigenlabels in {a, b} to fresh names, bottom-up
Derivation freshen_clashing_eigenlabels(const Derivation& d, const Label& a, const Label& b,
                                        std::set<Label>& used) {
  Derivation out = d;
  for (auto& p : out.premises) p = freshen_clashing_eigenlabels(p, a, b, used);
  if (out.eigenlabel && (*out.eigenlabel == a || *out.eigenlabel == b)) {
    Label e = *out.eigenlabel;
    Label ne = fresh_label(used);
    out.eigenlabel = ne;
    for (auto& p : out.premises) p = rename_derivation(p, e, ne);
  }
  return out;
}

}  // namespace

void collect_labels(const Derivation& d, std::set<Label>& all, std::set<Label>& eigen) {
  for (const auto& l : d.sequent.labels()) all.insert(l);
  if (d.eigenlabel) {
    all.insert(*d.eigenlabel);
    eigen.insert(*d.eigenlabel);
  }
  for (const auto& p : d.premises) collect_labels(p, all, eigen);
}

Derivation substitute_label(const Derivation& d, const Label& to, const Label& from) {
  if (to == from) return d;
  std::set<Label> all, eigen;
  collect_labels(d, all, eigen);
  all.insert(to);
  all.insert(from);
  Derivation base = d;
  if (eigen.count(to) || eigen.count(from))
    base = freshen_clashing_eigenlabels(d, to, from, all);
  return rename_derivation(base, from, to);
}

// ---- generalized initial sequents (Lemma: w|=A, G => D, w|=A) ----

namespace {

Derivation build_generalized(const LogicConfig& cfg, const ConstantSpec& cs, const Label& w,
                             const FormulaPtr& a, Sequent context, std::set<Label>& used) {
  // context holds everything except the two principal copies of w |= A
  SequentItem lhs = SequentItem::labeled(w, a);
  Sequent goal = context;
  goal.insert_ante(lhs);
  goal.insert_succ(lhs);

  Derivation node;
  node.sequent = goal;
  switch (a->kind) {
    case FormulaKind::Prop: {
      node.rule = RuleId::Ax;
      node.principal = {lhs, lhs};
      return node;
    }
    case FormulaKind::Bottom: {
      node.rule = RuleId::AxBot;
      node.principal = {lhs};
      return node;
    }
    case FormulaKind::Neg: {
      // R~ then L~, recursing on the body
      node.rule = RuleId::RNeg;
      node.principal = {lhs};
      Sequent mid = goal;
      mid.erase_succ(lhs);
      mid.insert_ante(SequentItem::labeled(w, a->left));

      Derivation inner;
      inner.sequent = mid;
      inner.rule = RuleId::LNeg;
      inner.principal = {lhs};
      inner.premises = {build_generalized(cfg, cs, w, a->left, context, used)};
      node.premises = {inner};
      return node;
    }
    case FormulaKind::And: {
      node.rule = RuleId::RAnd;
      node.principal = {lhs};
      std::vector<Derivation> children;
      for (const FormulaPtr& part : {a->left, a->right}) {
        Sequent mid = goal;
        mid.erase_succ(lhs);
        mid.insert_succ(SequentItem::labeled(w, part));
        Derivation land;
        land.sequent = mid;
        land.rule = RuleId::LAnd;
        land.principal = {lhs};
        Sequent ctx = mid;
        ctx.erase_ante(lhs);
        ctx.erase_succ(SequentItem::labeled(w, part));
        FormulaPtr other = equal(part, a->left) ? a->right : a->left;
        ctx.insert_ante(SequentItem::labeled(w, other));
        land.premises = {build_generalized(cfg, cs, w, part, ctx, used)};
        children.push_back(land);
      }
      node.premises = std::move(children);
      return node;
    }
    case FormulaKind::Or: {
      node.rule = RuleId::LOr;
      node.principal = {lhs};
      std::vector<Derivation> children;
      for (const FormulaPtr& part : {a->left, a->right}) {
        Sequent mid = goal;
        mid.erase_ante(lhs);
        mid.insert_ante(SequentItem::labeled(w, part));
        Derivation ror;
        ror.sequent = mid;
        ror.rule = RuleId::ROr;
        ror.principal = {lhs};
        Sequent ctx = mid;
        ctx.erase_succ(lhs);
        ctx.erase_ante(SequentItem::labeled(w, part));
        FormulaPtr other = equal(part, a->left) ? a->right : a->left;
        ctx.insert_succ(SequentItem::labeled(w, other));
        ror.premises = {build_generalized(cfg, cs, w, part, ctx, used)};
        children.push_back(ror);
      }
      node.premises = std::move(children);
      return node;
    }
    case FormulaKind::Imp: {
      // R-> first, then L-> on the antecedent copy
      node.rule = RuleId::RImp;
      node.principal = {lhs};
      Sequent mid = goal;
      mid.erase_succ(lhs);
      mid.insert_ante(SequentItem::labeled(w, a->left));
      mid.insert_succ(SequentItem::labeled(w, a->right));

      Derivation limp;
      limp.sequent = mid;
      limp.rule = RuleId::LImp;
      limp.principal = {lhs};
      Sequent base = mid;
      base.erase_ante(lhs);
      // left premise: base => ..., w|=A_left ; recursion on a->left
      Sequent lctx = base;
      lctx.erase_ante(SequentItem::labeled(w, a->left));
      Derivation lder = build_generalized(cfg, cs, w, a->left, lctx, used);
      // right premise: w|=A_right, base => ... ; recursion on a->right
      Sequent rctx = base;
      rctx.erase_succ(SequentItem::labeled(w, a->right));
      Derivation rder = build_generalized(cfg, cs, w, a->right, rctx, used);
      limp.premises = {lder, rder};
      node.premises = {limp};
      return node;
    }
    case FormulaKind::Just:
    case FormulaKind::Box: {
      bool modal = a->kind == FormulaKind::Box;
      // Just: (E), (R:), (L:); Box: (R[]), (L[])
      Label v = fresh_label(used);
      if (!modal) {
        SequentItem ev = SequentItem::ev(w, a->term, a->left);
        node.rule = RuleId::E;
        node.principal = {lhs};
        Sequent mid = goal;
        mid.insert_ante(ev);

        Derivation rcolon;
        rcolon.sequent = mid;
        rcolon.rule = RuleId::RColon;
        rcolon.principal = {ev, lhs};
        rcolon.eigenlabel = v;
        Sequent up = mid;
        up.erase_succ(lhs);
        up.insert_ante(SequentItem::rel(w, v));
        up.insert_succ(SequentItem::labeled(v, a->left));

        Derivation lcolon;
        lcolon.sequent = up;
        lcolon.rule = RuleId::LColon;
        lcolon.principal = {lhs, SequentItem::rel(w, v)};
        Sequent ctx = up;
        ctx.erase_succ(SequentItem::labeled(v, a->left));
        lcolon.premises = {build_generalized(cfg, cs, v, a->left, ctx, used)};
        rcolon.premises = {lcolon};
        node.premises = {rcolon};
        return node;
      }
      node.rule = RuleId::RBox;
      node.principal = {lhs};
      node.eigenlabel = v;
      Sequent up = goal;
      up.erase_succ(lhs);
      up.insert_ante(SequentItem::rel(w, v));
      up.insert_succ(SequentItem::labeled(v, a->left));

      Derivation lbox;
      lbox.sequent = up;
      lbox.rule = RuleId::LBox;
      lbox.principal = {lhs, SequentItem::rel(w, v)};
      Sequent ctx = up;
      ctx.erase_succ(SequentItem::labeled(v, a->left));
      lbox.premises = {build_generalized(cfg, cs, v, a->left, ctx, used)};
      node.premises = {lbox};
      return node;
    }
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace

Derivation generalized_axiom(const LogicConfig& cfg, const ConstantSpec& cs, const Label& w,
                             const FormulaPtr& a, const std::vector<SequentItem>& extra_ante,
                             const std::vector<SequentItem>& extra_succ) {
  Sequent context;
  for (const auto& it : extra_ante) context.insert_ante(it);
  for (const auto& it : extra_succ) context.insert_succ(it);
  std::set<Label> used;
  for (const auto& l : context.labels()) used.insert(l);
  used.insert(w);
  return build_generalized(cfg, cs, w, a, context, used);
}

// ---- pruning of superfluous E-rule applications ----

namespace {

bool is_e_rule(RuleId r) {
  return r == RuleId::ElPlus || r == RuleId::ErPlus || r == RuleId::EDot || r == RuleId::EBang ||
         r == RuleId::AN || r == RuleId::IAN;
}

// the evidence atom a rule application introduces into its premise
std::optional<SequentItem> created_atom(const Derivation& d) {
  if (d.premises.size() != 1) return std::nullopt;
  auto added = side_diff(d.premises[0].sequent.ante, d.sequent.ante);
  if (added.size() == 1 && added[0].kind == ItemKind::Ev) return added[0];
  return std::nullopt;
}

TermSet endsequent_subterms(const Sequent& s) {
  TermSet terms;
  auto add_item = [&terms](const SequentItem& it) {
    if (it.kind == ItemKind::Labeled) collect_terms(it.formula, terms);
    if (it.kind == ItemKind::Ev) {
      collect_subterms(it.term, terms);
      collect_terms(it.formula, terms);
    }
  };
  for (const auto& it : s.ante) add_item(it);
  for (const auto& it : s.succ) add_item(it);
  return terms;
}

bool e_rule_has_subterm_property(const Derivation& node, const TermSet& root_terms) {
  auto atom = created_atom(node);
  if (!atom) return true;
  if (node.rule == RuleId::IAN || node.rule == RuleId::AN) {
    // every constant of the chain must occur in the endsequent
    if (!root_terms.count(atom->term)) return false;
    FormulaPtr cur = atom->formula;
    while (cur->kind == FormulaKind::Just && cur->term->kind == TermKind::Const) {
      if (!root_terms.count(cur->term)) return false;
      cur = cur->left;
    }
    return true;
  }
  return root_terms.count(atom->term) != 0;
}

struct ItemLess {
  bool operator()(const SequentItem& a, const SequentItem& b) const { return compare(a, b) < 0; }
};
using ItemSet = std::set<SequentItem, ItemLess>;

// least set containing seed and closed upward: when a family atom is an
// operand of Mon or an E-rule above, the created atom joins
void grow_family(const Derivation& d, ItemSet& family) {
  bool changed = true;
  auto visit = [&family, &changed](const Derivation& node, auto&& self) -> void {
    auto atom = created_atom(node);
    if (atom && !family.count(*atom)) {
      bool feeds = false;
      if (node.rule == RuleId::Mon || is_e_rule(node.rule) || node.rule == RuleId::ElPlus) {
        for (const auto& p : node.principal)
          if (p.kind == ItemKind::Ev && family.count(p)) feeds = true;
      }
      if (feeds) {
        family.insert(*atom);
        changed = true;
      }
    }
    for (const auto& p : node.premises) self(p, self);
  };
  while (changed) {
    changed = false;
    visit(d, visit);
  }
}

bool family_is_principal_somewhere(const Derivation& d, const ItemSet& family) {
  if (d.premises.empty()) {
    // principal of an AxE leaf
    if (d.rule == RuleId::AxE)
      for (const auto& it : d.sequent.ante)
        if (it.kind == ItemKind::Ev && d.sequent.succ_contains(it) && family.count(it))
          return true;
    return false;
  }
  if (d.rule == RuleId::RColon && !d.principal.empty() && family.count(d.principal[0]))
    return true;
  for (const auto& p : d.premises)
    if (family_is_principal_somewhere(p, family)) return true;
  return false;
}

Sequent strip_items(const Sequent& s, const ItemSet& family) {
  Sequent out;
  for (const auto& it : s.ante)
    if (!family.count(it)) out.insert_ante(it);
  for (const auto& it : s.succ)
    if (!family.count(it)) out.insert_succ(it);
  return out;
}

Derivation strip_family(const Derivation& d, const ItemSet& family) {
  // splice out rules whose created atom belongs to the family
  if ((is_e_rule(d.rule) || d.rule == RuleId::Mon) && !d.premises.empty()) {
    auto atom = created_atom(d);
    if (atom && family.count(*atom)) return strip_family(d.premises[0], family);
  }
  Derivation out;
  out.sequent = strip_items(d.sequent, family);
  out.rule = d.rule;
  out.principal = d.principal;
  out.eigenlabel = d.eigenlabel;
  for (const auto& p : d.premises) out.premises.push_back(strip_family(p, family));
  return out;
}

// bottommost = smallest depth; returns the path to the offending node
bool find_offender(const Derivation& d, const TermSet& root_terms, std::vector<int>& path,
                   int depth, int& best_depth, std::vector<int>& best_path) {
  if (is_e_rule(d.rule) && !d.premises.empty() && !e_rule_has_subterm_property(d, root_terms)) {
    if (best_depth < 0 || depth < best_depth) {
      best_depth = depth;
      best_path = path;
    }
  }
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    path.push_back(static_cast<int>(i));
    find_offender(d.premises[i], root_terms, path, depth + 1, best_depth, best_path);
    path.pop_back();
  }
  return best_depth >= 0;
}

Derivation* node_at(Derivation& d, const std::vector<int>& path) {
  Derivation* cur = &d;
  for (int i : path) cur = &cur->premises[i];
  return cur;
}

void assert_no_unsupported_rules(const Derivation& d) {
  if (d.rule == RuleId::SE || d.rule == RuleId::EQ || d.rule == RuleId::EBarQ ||
      d.rule == RuleId::AntiMon || d.rule == RuleId::LBox || d.rule == RuleId::RBox)
    throw std::invalid_argument(
        "prune_superfluous requires a JL- derivation "
        "(no SE, E-query, Anti-Mon or modal rules)");
  for (const auto& p : d.premises) assert_no_unsupported_rules(p);
}

}  // namespace

bool has_subterm_property(const Derivation& d) {
  TermSet root_terms = endsequent_subterms(d.sequent);
  bool ok = true;
  auto walk = [&](const Derivation& node, auto&& self) -> void {
    if (is_e_rule(node.rule) && !node.premises.empty() &&
        !e_rule_has_subterm_property(node, root_terms))
      ok = false;
    for (const auto& p : node.premises) self(p, self);
  };
  walk(d, walk);
  return ok;
}

Derivation prune_superfluous(const Derivation& d) {
  assert_no_unsupported_rules(d);
  Derivation current = d;
  TermSet root_terms = endsequent_subterms(current.sequent);
  while (true) {
    std::vector<int> path, best_path;
    int best_depth = -1;
    if (!find_offender(current, root_terms, path, 0, best_depth, best_path)) break;
    Derivation* offender = node_at(current, best_path);
    auto atom = created_atom(*offender);
    if (!atom) throw std::logic_error("E-rule node without a created evidence atom");
    ItemSet family;
    family.insert(*atom);
    grow_family(offender->premises[0], family);
    if (family_is_principal_somewhere(offender->premises[0], family))
      throw std::logic_error("application without the subterm property is not superfluous");
    // remove the application itself together with the family
    Derivation replacement = strip_family(offender->premises[0], family);
    *offender = replacement;
  }
  return current;
}

// ---- serialization ----

namespace {

nlohmann::ordered_json derivation_json(const Derivation& d) {
  nlohmann::ordered_json j;
  j["sequent"] = to_string(d.sequent);
  j["rule"] = to_string(d.rule);
  nlohmann::ordered_json principal = nlohmann::ordered_json::array();
  for (const auto& p : d.principal) principal.push_back(to_string(p));
  j["principal"] = principal;
  j["eigenlabel"] = d.eigenlabel ? nlohmann::ordered_json(*d.eigenlabel)
                                 : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json premises = nlohmann::ordered_json::array();
  for (const auto& p : d.premises) premises.push_back(derivation_json(p));
  j["premises"] = premises;
  return j;
}

Derivation derivation_from(const nlohmann::json& j) {
  Derivation d;
  if (!j.contains("sequent") || !j["sequent"].is_string())
    throw std::invalid_argument("derivation node has no sequent");
  d.sequent = parse_sequent(j["sequent"].get<std::string>());
  if (!j.contains("rule") || !j["rule"].is_string())
    throw std::invalid_argument("derivation node has no rule");
  auto rule = rule_from_string(j["rule"].get<std::string>());
  if (!rule) throw std::invalid_argument("unknown rule '" + j["rule"].get<std::string>() + "'");
  d.rule = *rule;
  if (j.contains("principal"))
    for (const auto& p : j["principal"]) d.principal.push_back(parse_item(p.get<std::string>()));
  if (j.contains("eigenlabel") && !j["eigenlabel"].is_null())
    d.eigenlabel = j["eigenlabel"].get<std::string>();
  if (j.contains("premises"))
    for (const auto& p : j["premises"]) d.premises.push_back(derivation_from(p));
  return d;
}

std::string latex_term(const TermPtr& t);

std::string latex_term_child(const TermPtr& t, int min_level) {
  int level;
  switch (t->kind) {
    case TermKind::Sum: level = 0; break;
    case TermKind::App: level = 1; break;
    default: level = 2; break;
  }
  std::string body = latex_term(t);
  if (level < min_level) return "(" + body + ")";
  return body;
}

std::string latex_term(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
      return t->name;
    case TermKind::Sum:
      return latex_term_child(t->left, 0) + "+" + latex_term_child(t->right, 1);
    case TermKind::App:
      return latex_term_child(t->left, 1) + "\\cdot " + latex_term_child(t->right, 2);
    case TermKind::Bang:
      return "!" + latex_term_child(t->left, 2);
    case TermKind::Query:
      return "?" + latex_term_child(t->left, 2);
    case TermKind::BarQuery:
      return "\\bar{?}" + latex_term_child(t->left, 2);
  }
  return {};
}

std::string latex_formula(const FormulaPtr& f);

std::string latex_formula_child(const FormulaPtr& f, int min_level) {
  int level;
  switch (f->kind) {
    case FormulaKind::Imp: level = 0; break;
    case FormulaKind::Or: level = 1; break;
    case FormulaKind::And: level = 2; break;
    default: level = 3; break;
  }
  std::string body = latex_formula(f);
  if (level < min_level) return "(" + body + ")";
  return body;
}

std::string latex_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case FormulaKind::Prop:
      return f->name;
    case FormulaKind::Bottom:
      return "\\bot";
    case FormulaKind::Neg:
      return "\\neg " + latex_formula_child(f->left, 3);
    case FormulaKind::Box:
      return "\\Box " + latex_formula_child(f->left, 3);
    case FormulaKind::Just:
      return latex_term_child(f->term, 2) + "{:}" + latex_formula_child(f->left, 3);
    case FormulaKind::And:
      return latex_formula_child(f->left, 2) + "\\wedge " + latex_formula_child(f->right, 3);
    case FormulaKind::Or:
      return latex_formula_child(f->left, 1) + "\\vee " + latex_formula_child(f->right, 2);
    case FormulaKind::Imp:
      return latex_formula_child(f->left, 1) + "\\rightarrow " + latex_formula_child(f->right, 0);
  }
  return {};
}

std::string latex_item(const SequentItem& it) {
  switch (it.kind) {
    case ItemKind::Labeled:
      return it.w + "\\Vdash " + latex_formula(it.formula);
    case ItemKind::Rel:
      return it.w + "R" + it.v;
    case ItemKind::Ev:
      return it.w + "E(" + latex_term(it.term) + "," + latex_formula(it.formula) + ")";
  }
  return {};
}

std::string latex_sequent(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.ante.size(); ++i) {
    if (i) out += ", ";
    out += latex_item(s.ante[i]);
  }
  out += " \\Rightarrow ";
  for (std::size_t i = 0; i < s.succ.size(); ++i) {
    if (i) out += ", ";
    out += latex_item(s.succ[i]);
  }
  return out;
}

const char* latex_rule_name(RuleId r) {
  switch (r) {
    case RuleId::Ax: return "Ax";
    case RuleId::AxBot: return "Ax\\bot";
    case RuleId::AxR: return "AxR";
    case RuleId::AxE: return "AxE";
    case RuleId::AxEBot: return "AxE\\bot";
    case RuleId::LNeg: return "L\\neg";
    case RuleId::RNeg: return "R\\neg";
    case RuleId::LAnd: return "L\\wedge";
    case RuleId::RAnd: return "R\\wedge";
    case RuleId::LOr: return "L\\vee";
    case RuleId::ROr: return "R\\vee";
    case RuleId::LImp: return "L\\rightarrow";
    case RuleId::RImp: return "R\\rightarrow";
    case RuleId::LColon: return "L{:}";
    case RuleId::RColon: return "R{:}";
    case RuleId::E: return "E";
    case RuleId::AN: return "AN";
    case RuleId::IAN: return "IAN";
    case RuleId::ElPlus: return "El+";
    case RuleId::ErPlus: return "Er+";
    case RuleId::EDot: return "E\\cdot";
    case RuleId::EBang: return "E!";
    case RuleId::Mon: return "Mon";
    case RuleId::EBarQ: return "E\\bar{?}";
    case RuleId::SE: return "SE";
    case RuleId::EQ: return "E?";
    case RuleId::LBox: return "L\\Box";
    case RuleId::RBox: return "R\\Box";
    case RuleId::Ref: return "Ref";
    case RuleId::Ser: return "Ser";
    case RuleId::Sym: return "Sym";
    case RuleId::Trans: return "Trans";
    case RuleId::Eucl: return "Eucl";
    case RuleId::EuclStar: return "Eucl_*";
    case RuleId::AntiMon: return "Anti\\textrm{-}Mon";
  }
  return "?";
}

void latex_node(const Derivation& d, std::string& out) {
  if (d.premises.empty()) {
    out += "\\AXC{}\n";
    out += "\\RightLabel{$(" + std::string(latex_rule_name(d.rule)) + ")$}\n";
    out += "\\UIC{$" + latex_sequent(d.sequent) + "$}\n";
    return;
  }
  for (const auto& p : d.premises) latex_node(p, out);
  out += "\\RightLabel{$(" + std::string(latex_rule_name(d.rule)) + ")$}\n";
  out += (d.premises.size() == 1 ? "\\UIC{$" : "\\BIC{$") + latex_sequent(d.sequent) + "$}\n";
}

void text_node(const Derivation& d, int indent, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += "[" + std::string(to_string(d.rule)) + "] " + to_string(d.sequent) + "\n";
  for (const auto& p : d.premises) text_node(p, indent + 1, out);
}

}  // namespace

std::string derivation_to_json(const Derivation& d) { return derivation_json(d).dump(2); }

Derivation derivation_from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  return derivation_from(j);
}

std::string derivation_to_latex(const Derivation& d) {
  std::string out = "\\begin{prooftree}\n";
  latex_node(d, out);
  out += "\\end{prooftree}\n";
  return out;
}

std::string derivation_to_text(const Derivation& d) {
  std::string out;
  text_node(d, 0, out);
  return out;
}

}  // namespace jseq
