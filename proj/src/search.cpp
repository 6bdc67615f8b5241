#include "jseq/search.hpp"

#include <algorithm>
#include <cstdlib>
#include <memory>
#include <stdexcept>

namespace jseq {

AnalyticityUniverse make_universe(const Sequent& root, const ConstantSpec& cs) {
  AnalyticityUniverse u;
  auto add_item = [&u](const SequentItem& it) {
    if (it.kind == ItemKind::Labeled) {
      collect_terms(it.formula, u.subterms);
      collect_subformulas(it.formula, u.subformulas);
    } else if (it.kind == ItemKind::Ev) {
      collect_subterms(it.term, u.subterms);
      collect_terms(it.formula, u.subterms);
      collect_subformulas(it.formula, u.subformulas);
    }
  };
  for (const auto& it : root.ante) add_item(it);
  for (const auto& it : root.succ) add_item(it);
  for (const auto& entry : cs.entries) {
    collect_terms(entry, u.subterms);
    collect_subformulas(entry, u.subformulas);
  }
  for (const auto& l : root.labels()) u.root_labels.insert(l);
  return u;
}

namespace {

bool term_contains(const TermPtr& t, TermKind op) {
  if (t->kind == op) return true;
  if (t->left && term_contains(t->left, op)) return true;
  if (t->right && term_contains(t->right, op)) return true;
  return false;
}

void collect_positive_just_box(const FormulaPtr& f, bool positive,
                               std::map<FormulaPtr, long, FormulaLess>& just_occ,
                               std::map<FormulaPtr, long, FormulaLess>& box_occ) {
  switch (f->kind) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      return;
    case FormulaKind::Neg:
      collect_positive_just_box(f->left, !positive, just_occ, box_occ);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
      collect_positive_just_box(f->left, positive, just_occ, box_occ);
      collect_positive_just_box(f->right, positive, just_occ, box_occ);
      return;
    case FormulaKind::Imp:
      collect_positive_just_box(f->left, !positive, just_occ, box_occ);
      collect_positive_just_box(f->right, positive, just_occ, box_occ);
      return;
    case FormulaKind::Just:
      if (positive) just_occ[f]++;
      collect_positive_just_box(f->left, positive, just_occ, box_occ);
      return;
    case FormulaKind::Box:
      if (positive) box_occ[f]++;
      collect_positive_just_box(f->left, positive, just_occ, box_occ);
      return;
  }
}

}  // namespace

SearchBudget compute_budgets(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& root) {
  SearchBudget b;
  b.l = static_cast<int>(root.labels().size());
  for (const auto& it : root.ante) {
    if (it.kind == ItemKind::Rel) b.r++;
    if (it.kind == ItemKind::Ev) b.e++;
  }
  PolarityCounts pol = polarity_counts(root);
  b.n_colon = pol.n_colon;
  b.p_colon = pol.p_colon;
  b.n_box = pol.n_box;
  b.p_box = pol.p_box;
  AnalyticityUniverse u = make_universe(root, ConstantSpec{});
  for (const auto& t : u.subterms) {
    if (term_contains(t, TermKind::Sum)) b.n_plus++;
    if (term_contains(t, TermKind::App)) b.n_dot++;
    if (term_contains(t, TermKind::Bang)) b.n_bang++;
  }
  b.cs_size = static_cast<int>(cs.size());

  RuleSet rules = rules_for_logic(cfg);
  b.enforce_r_caps = rules.count(RuleId::Trans) != 0;

  // per-occurrence counters for (R:) and (R[]) on chains of accessible worlds
  long chain = b.n_colon + b.n_box + 1;
  std::map<FormulaPtr, long, FormulaLess> just_occ, box_occ;
  for (const auto& it : root.ante)
    if (it.kind == ItemKind::Labeled)
      collect_positive_just_box(it.formula, false, just_occ, box_occ);
  for (const auto& it : root.succ)
    if (it.kind == ItemKind::Labeled)
      collect_positive_just_box(it.formula, true, just_occ, box_occ);
  for (const auto& [f, occ] : just_occ) b.rcolon_counters[f] = {chain * occ, 0};
  for (const auto& [f, occ] : box_occ) b.rbox_counters[f] = {chain * occ, 0};

  // reported bounds from the termination theorems
  long p = b.p_colon, n = b.n_colon, l = b.l, r = b.r, e = b.e, k = b.cs_size;
  bool lp_style = rules.count(RuleId::Ref) && rules.count(RuleId::Trans);
  long rcolon_total = lp_style ? p * (n + 1) : p;
  b.rule_caps["RColon"] = rcolon_total;
  if (lp_style)
    b.rule_caps["LColon"] = n * (rcolon_total + r + l + p);
  else if (rules.count(RuleId::Ref))
    b.rule_caps["LColon"] = n * (2 * p + r + l);
  else
    b.rule_caps["LColon"] = n * (p + r);
  b.rule_caps["E"] = n;
  long ian = k * ((lp_style ? p * (n + 1) : p) + l);
  b.rule_caps[cfg.uses_an() ? "AN" : "IAN"] = ian;
  b.rule_caps["ElPlus"] = b.n_plus * (e + n + ian);
  b.rule_caps["ErPlus"] = b.n_plus * (e + n + ian);
  b.rule_caps["EDot"] = b.n_dot * (e + n + ian);
  if (rules.count(RuleId::Ref)) b.rule_caps["Ref"] = l + p;
  return b;
}

std::vector<RuleId> stage_order(const LogicConfig& cfg) {
  RuleSet rules = rules_for_logic(cfg);
  // the fixed stage list; modal stages follow their justification analogues,
  // branching evidence rules come last
  const RuleId canonical[] = {
      RuleId::LNeg, RuleId::RNeg,   RuleId::LAnd, RuleId::RAnd,   RuleId::LOr,
      RuleId::ROr,  RuleId::LImp,   RuleId::RImp, RuleId::LColon, RuleId::LBox,
      RuleId::RColon, RuleId::RBox, RuleId::E,    RuleId::AN,     RuleId::IAN,
      RuleId::ElPlus, RuleId::ErPlus, RuleId::EDot, RuleId::EBang, RuleId::Mon,
      RuleId::Ref,  RuleId::Ser,    RuleId::Trans, RuleId::Sym,   RuleId::Eucl,
      RuleId::EuclStar, RuleId::AntiMon, RuleId::SE, RuleId::EQ,  RuleId::EBarQ,
  };
  std::vector<RuleId> order;
  for (RuleId r : canonical)
    if (rules.count(r)) order.push_back(r);
  return order;
}

bool countermodel_supported(const LogicConfig& cfg) {
  if (cfg.s4lpn_extras) return false;
  if (cfg.justification_enabled) {
    if (cfg.has(JAxiom::jB) || cfg.has(JAxiom::j5)) return false;
    if (cfg.seriality_mode == SerialityMode::AxiomEBot) return false;
  }
  return true;
}

bool termination_guaranteed(const LogicConfig& cfg) {
  if (cfg.s4lpn_extras || cfg.seriality_mode == SerialityMode::AxiomEBot) return false;
  std::set<JAxiom> j = cfg.j_axioms;
  std::set<MAxiom> m = cfg.m_axioms;
  if (cfg.justification_enabled) {
    bool j_ok = j.empty() || j == std::set<JAxiom>{JAxiom::jT} ||
                j == std::set<JAxiom>{JAxiom::jT, JAxiom::j4};
    if (!j_ok) return false;
  }
  if (cfg.modal_enabled) {
    bool m_ok = m.empty() || m == std::set<MAxiom>{MAxiom::T} ||
                m == std::set<MAxiom>{MAxiom::T, MAxiom::Four};
    if (!m_ok) return false;
  }
  if (cfg.justification_enabled && cfg.modal_enabled) {
    // the two components must match (KJ, TJT, S4LP)
    bool match = (j.empty() && m.empty()) ||
                 (j == std::set<JAxiom>{JAxiom::jT} && m == std::set<MAxiom>{MAxiom::T}) ||
                 (j == std::set<JAxiom>{JAxiom::jT, JAxiom::j4} &&
                  m == std::set<MAxiom>{MAxiom::T, MAxiom::Four});
    if (!match) return false;
  }
  return true;
}

namespace {

struct MNode {
  Sequent seq;
  RuleId rule = RuleId::Ax;
  std::vector<SequentItem> principal;
  std::optional<Label> eigenlabel;
  std::vector<std::unique_ptr<MNode>> kids;
  bool closed = false;
};

// multiset difference: items of `premise` not matched in `conclusion`
std::vector<SequentItem> side_diff_added(const std::vector<SequentItem>& premise,
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

Derivation to_derivation(const MNode& n) {
  Derivation d;
  d.sequent = n.seq;
  d.rule = n.rule;
  d.principal = n.principal;
  d.eigenlabel = n.eigenlabel;
  for (const auto& k : n.kids) d.premises.push_back(to_derivation(*k));
  return d;
}

struct BranchState {
  std::map<FormulaPtr, long, FormulaLess> rcolon_used;
  std::map<FormulaPtr, long, FormulaLess> rbox_used;
  std::set<Label> ser_eigen;
  // union of antecedents / succedents seen along the branch (as sets);
  // doubles as the condition-(†) reference, so a formula the branch has
  // already decomposed is never re-added (the permutation corollary)
  Sequent unions;
  std::size_t stage_idx = 0;
  std::size_t stages_no_change = 0;
};

struct OpenLeaf {
  MNode* node;
  BranchState state;
};

class Engine {
public:
  Engine(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& root,
         const SearchBudget& budget, const SearchOptions& options)
      : cfg_(cfg),
        cs_(cs),
        root_(root),
        budget_(budget),
        options_(options),
        universe_(make_universe(root, cs)),
        stages_(stage_order(cfg)) {
    used_labels_ = universe_.root_labels;
    if (options.fuel) fuel_left_ = *options.fuel;
    else fuel_left_ = budget.fuel;
  }

  SearchResult run() {
    SearchResult result;
    result.budget = budget_;
    root_node_ = std::make_unique<MNode>();
    root_node_->seq = root_;

    BranchState init;
    for (const auto& it : root_.ante)
      if (!init.unions.ante_contains(it)) init.unions.insert_ante(it);
    for (const auto& it : root_.succ)
      if (!init.unions.succ_contains(it)) init.unions.insert_succ(it);

    std::vector<OpenLeaf> open;
    open.push_back({root_node_.get(), std::move(init)});

    while (!open.empty()) {
      OpenLeaf leaf = std::move(open.back());
      open.pop_back();
      auto outcome = process(leaf, open);
      if (outcome) {
        outcome->stats = stats_;
        outcome->budget = budget_;
        return *outcome;
      }
    }

    result.status = SearchStatus::Derivable;
    result.derivation = to_derivation(*root_node_);
    auto check = check_derivation(cfg_, cs_, *result.derivation);
    if (!check.ok)
      throw std::logic_error("search produced an invalid derivation at node " + check.node_path +
                             ": " + check.error);
    result.stats = stats_;
    return result;
  }

private:
  const LogicConfig& cfg_;
  const ConstantSpec& cs_;
  Sequent root_;
  SearchBudget budget_;
  SearchOptions options_;
  AnalyticityUniverse universe_;
  std::vector<RuleId> stages_;
  std::set<Label> used_labels_;
  long fresh_counter_ = 0;
  long fuel_left_ = 0;
  std::unique_ptr<MNode> root_node_;
  SearchStats stats_;

  Label fresh_label() {
    while (true) {
      Label cand = "v" + std::to_string(++fresh_counter_);
      if (used_labels_.insert(cand).second) return cand;
    }
  }

  bool rcap_blocked(const RuleInstance& inst, const BranchState& state) const {
    if (!budget_.enforce_r_caps) return false;
    if (inst.rule != RuleId::RColon && inst.rule != RuleId::RBox) return false;
    const bool is_colon = inst.rule == RuleId::RColon;
    FormulaPtr f = is_colon ? inst.principal[1].formula : inst.principal[0].formula;
    const auto& caps = is_colon ? budget_.rcolon_counters : budget_.rbox_counters;
    const auto& used = is_colon ? state.rcolon_used : state.rbox_used;
    long cap;
    auto it = caps.find(f);
    if (it != caps.end()) {
      cap = it->second.cap;
    } else {
      // formulas outside the root's positive part (SE and E? can introduce
      // them) get the single-occurrence chain bound
      cap = budget_.n_colon + budget_.n_box + 1;
    }
    auto uit = used.find(f);
    return (uit == used.end() ? 0 : uit->second) >= cap;
  }

  void note_r_application(const RuleInstance& inst, BranchState& state) {
    if (inst.rule == RuleId::RColon)
      state.rcolon_used[inst.principal[1].formula]++;
    else if (inst.rule == RuleId::RBox)
      state.rbox_used[inst.principal[0].formula]++;
  }

  // serial-once: only labels without a successor that are not themselves
  // (Ser)-eigenlabels get a fresh successor
  bool ser_blocked(const RuleInstance& inst, const BranchState& state) {
    if (!options_.serial_once || inst.rule != RuleId::Ser) return false;
    const Sequent& s = inst.conclusion;
    // the serialized label is the w of the added relational atom
    Label w;
    for (const auto& it : inst.premises[0].ante)
      if (it.kind == ItemKind::Rel && inst.eigenlabel && it.v == *inst.eigenlabel) w = it.w;
    if (state.ser_eigen.count(w)) return true;
    for (const auto& it : s.ante)
      if (it.kind == ItemKind::Rel && it.w == w) return true;
    return false;
  }

  struct FuelOut {};

  // finds the first eligible instance of `stage` at the current sequent,
  // subject to an optional extra filter
  std::optional<RuleInstance> first_eligible(
      RuleId stage, const Sequent& seq, const BranchState& state,
      const std::function<bool(const RuleInstance&)>& extra = {}) {
    std::optional<RuleInstance> chosen;
    enumerate_backward_instances(
        cfg_, cs_, stage, seq, universe_, [this] { return fresh_label(); },
        [&](RuleInstance&& inst) {
          if (rcap_blocked(inst, state)) return true;
          if (ser_blocked(inst, state)) return true;
          if (extra && !extra(inst)) return true;
          chosen = std::move(inst);
          return false;
        },
        &state.unions);
    return chosen;
  }

  // applies one instance below `node`, pushing the second premise (if any)
  // onto the open list; returns the node of the first premise and whether the
  // added items already close it (checked incrementally)
  std::pair<MNode*, bool> apply_instance(MNode* node, RuleId stage, RuleInstance&& inst,
                                         BranchState& state, std::vector<OpenLeaf>& open) {
    if (fuel_left_ <= 0) throw FuelOut{};
    fuel_left_--;
    stats_.fuel_used++;
    stats_.stage_applications[to_string(stage)]++;
    state.stages_no_change = 0;
    note_r_application(inst, state);
    if (inst.eigenlabel && stage == RuleId::Ser) state.ser_eigen.insert(*inst.eigenlabel);

    node->rule = stage;
    node->principal = std::move(inst.principal);
    node->eigenlabel = inst.eigenlabel;
    const Sequent& conclusion = node->seq;
    for (auto& premise : inst.premises) {
      auto kid = std::make_unique<MNode>();
      kid->seq = std::move(premise);
      node->kids.push_back(std::move(kid));
    }
    if (node->kids.size() == 2) {
      stats_.branches++;
      BranchState other = state;
      note_union(other, node->kids[1]->seq);
      open.push_back({node->kids[1].get(), std::move(other)});
    }
    MNode* next = node->kids[0].get();
    note_union(state, next->seq);
    // a non-initial sequent can only become initial through the added items
    bool closed = close_by_added(next, side_diff_added(next->seq.ante, conclusion.ante),
                                 side_diff_added(next->seq.succ, conclusion.succ));
    return {next, closed};
  }

  bool close_by_added(MNode* node, const std::vector<SequentItem>& added_ante,
                      const std::vector<SequentItem>& added_succ) {
    const Sequent& s = node->seq;
    auto finish = [&](RuleId rule, std::vector<SequentItem> principal) {
      node->rule = rule;
      node->principal = std::move(principal);
      node->closed = true;
      node->kids.clear();
      return true;
    };
    for (const auto& it : added_ante) {
      switch (it.kind) {
        case ItemKind::Labeled:
          if (it.formula->kind == FormulaKind::Bottom) return finish(RuleId::AxBot, {it});
          if (it.formula->kind == FormulaKind::Prop && s.succ_contains(it))
            return finish(RuleId::Ax, {it, it});
          break;
        case ItemKind::Rel:
          if (s.succ_contains(it)) return finish(RuleId::AxR, {it, it});
          break;
        case ItemKind::Ev:
          if (s.succ_contains(it)) return finish(RuleId::AxE, {it, it});
          if (cfg_.seriality_mode == SerialityMode::AxiomEBot &&
              it.formula->kind == FormulaKind::Bottom)
            return finish(RuleId::AxEBot, {it});
          break;
      }
    }
    for (const auto& it : added_succ) {
      switch (it.kind) {
        case ItemKind::Labeled:
          if (it.formula->kind == FormulaKind::Prop && s.ante_contains(it))
            return finish(RuleId::Ax, {it, it});
          break;
        case ItemKind::Rel:
          if (s.ante_contains(it)) return finish(RuleId::AxR, {it, it});
          break;
        case ItemKind::Ev:
          if (s.ante_contains(it)) return finish(RuleId::AxE, {it, it});
          break;
      }
    }
    return false;
  }

  bool close_if_initial(MNode* node) {
    std::vector<SequentItem> principal;
    if (auto initial = is_initial(cfg_, cs_, node->seq, &principal)) {
      node->rule = *initial;
      node->principal = std::move(principal);
      node->closed = true;
      return true;
    }
    return false;
  }

  // drives one open branch until it closes, saturates or runs out of fuel;
  // each stage visit applies all its eligible instances (the reduction-tree
  // stages), except that branching rules apply one instance per visit
  std::optional<SearchResult> process(OpenLeaf leaf, std::vector<OpenLeaf>& open) {
    MNode* node = leaf.node;
    BranchState state = std::move(leaf.state);
    if (close_if_initial(node)) return std::nullopt;
    try {
      while (true) {
        if (state.stages_no_change >= stages_.size()) return saturated(state);
        RuleId stage = stages_[state.stage_idx];
        state.stage_idx = (state.stage_idx + 1) % stages_.size();
        if (state.stage_idx == 0) stats_.stage_passes++;

        if (rule_arity(stage) == 2) {
          if (auto inst = first_eligible(stage, node->seq, state)) {
            auto [next, closed] = apply_instance(node, stage, std::move(*inst), state, open);
            if (closed) return std::nullopt;
            node = next;
          } else {
            state.stages_no_change++;
          }
          continue;
        }
        if (stage == RuleId::Ser) {
          // one fresh successor per label present at the start of the visit;
          // instances are built directly to keep the batch linear
          std::vector<Label> snapshot = node->seq.labels();
          bool any = false;
          for (const auto& w : snapshot) {
            if (options_.serial_once) {
              if (state.ser_eigen.count(w)) continue;
              bool has_succ = false;
              for (const auto& it : node->seq.ante)
                if (it.kind == ItemKind::Rel && it.w == w) has_succ = true;
              if (has_succ) continue;
            }
            RuleInstance inst;
            inst.rule = RuleId::Ser;
            inst.conclusion = node->seq;
            Label v = fresh_label();
            inst.eigenlabel = v;
            Sequent premise = node->seq;
            premise.insert_ante(SequentItem::rel(w, v));
            inst.premises = {std::move(premise)};
            auto [next, closed] = apply_instance(node, stage, std::move(inst), state, open);
            if (closed) return std::nullopt;
            node = next;
            any = true;
          }
          if (!any) state.stages_no_change++;
          continue;
        }
        // single-premise stages exhaust their instances
        bool any = false;
        while (true) {
          auto inst = first_eligible(stage, node->seq, state);
          if (!inst) break;
          auto [next, closed] = apply_instance(node, stage, std::move(*inst), state, open);
          if (closed) return std::nullopt;
          node = next;
          any = true;
        }
        if (!any) state.stages_no_change++;
      }
    } catch (const FuelOut&) {
      SearchResult r;
      r.status = SearchStatus::Unknown;
      r.unknown_reason = "fuel";
      return r;
    }
  }

  // merges the (sorted) sides of s into the union sets with a linear walk
  static void merge_side(std::vector<SequentItem>& dst, const std::vector<SequentItem>& src) {
    std::vector<SequentItem> merged;
    merged.reserve(dst.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < dst.size() || j < src.size()) {
      if (j >= src.size()) {
        merged.push_back(dst[i++]);
      } else if (i >= dst.size()) {
        if (merged.empty() || merged.back() != src[j]) merged.push_back(src[j]);
        ++j;
      } else {
        int c = compare(dst[i], src[j]);
        if (c < 0) {
          merged.push_back(dst[i++]);
        } else if (c == 0) {
          merged.push_back(dst[i++]);
          ++j;
        } else {
          if (merged.empty() || merged.back() != src[j]) merged.push_back(src[j]);
          ++j;
        }
      }
    }
    dst = std::move(merged);
  }

  static void note_union(BranchState& state, const Sequent& s) {
    merge_side(state.unions.ante, s.ante);
    merge_side(state.unions.succ, s.succ);
  }

  std::optional<SearchResult> saturated(const BranchState& state) {
    SearchResult r;
    if (!countermodel_supported(cfg_)) {
      r.status = SearchStatus::Unknown;
      r.unknown_reason = "incomplete-fragment";
      return r;
    }
    FittingModel m = build_branch_model(state.unions.ante, state.unions.succ, cfg_, cs_);
    EvidenceUniverse audit = default_audit_universe(m, root_);
    ConditionReport conditions = check_conditions(m, audit, cs_);
    bool invalidates =
        conditions.pass() && !validates_sequent(m, identity_interpretation(root_), root_);
    if (!invalidates) {
      if (termination_guaranteed(cfg_) && !options_.serial_once) {
        std::string detail = conditions.pass()
                                 ? "the model validates the root sequent"
                                 : "frame conditions failed:\n" + conditions.to_string();
        throw std::logic_error("saturated branch produced an invalid countermodel: " + detail);
      }
      r.status = SearchStatus::Unknown;
      r.unknown_reason = "incomplete-fragment";
      return r;
    }
    r.status = SearchStatus::NotDerivable;
    r.model = std::move(m);
    return r;
  }
};

}  // namespace

namespace {

bool formula_has_just(const FormulaPtr& f) {
  if (f->kind == FormulaKind::Just) return true;
  if (f->left && formula_has_just(f->left)) return true;
  if (f->right && formula_has_just(f->right)) return true;
  return false;
}

void check_language(const LogicConfig& cfg, const Sequent& root) {
  for (const auto* side : {&root.ante, &root.succ}) {
    for (const auto& it : *side) {
      if (it.kind == ItemKind::Rel) continue;
      if (!cfg.modal_enabled && contains_box(it.formula))
        throw std::invalid_argument("[] is not in the language of " + cfg.name);
      if (!cfg.justification_enabled &&
          (it.kind == ItemKind::Ev || formula_has_just(it.formula)))
        throw std::invalid_argument("justification formulas are not in the language of " +
                                    cfg.name);
    }
  }
}

}  // namespace

SearchResult search(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& root,
                    const SearchBudget& budget, const SearchOptions& options) {
  check_language(cfg, root);
  Engine engine(cfg, cs, root, budget, options);
  return engine.run();
}

SearchResult search(const LogicConfig& cfg, const ConstantSpec& cs, const Sequent& root,
                    const SearchOptions& options) {
  return search(cfg, cs, root, compute_budgets(cfg, cs, root), options);
}

}  // namespace jseq
