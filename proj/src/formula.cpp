#include "jseq/formula.hpp"

#include <functional>

namespace jseq {

namespace {
std::size_t hash_mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

FormulaPtr make_formula(FormulaKind k, std::string name, TermPtr t, FormulaPtr l, FormulaPtr r) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->name = std::move(name);
  f->term = std::move(t);
  f->left = std::move(l);
  f->right = std::move(r);
  std::size_t h = (static_cast<std::size_t>(k) + 17) * 0x9e3779b97f4a7c15ULL;
  h = hash_mix(h, std::hash<std::string>{}(f->name));
  if (f->term) h = hash_mix(h, f->term->hash());
  if (f->left) h = hash_mix(h, f->left->hash());
  if (f->right) h = hash_mix(h, f->right->hash());
  f->hash_ = h;
  return f;
}

FormulaPtr Formula::prop(std::string n) {
  return make_formula(FormulaKind::Prop, std::move(n), nullptr, nullptr, nullptr);
}
FormulaPtr Formula::bottom() {
  return make_formula(FormulaKind::Bottom, "", nullptr, nullptr, nullptr);
}
FormulaPtr Formula::neg(FormulaPtr a) {
  return make_formula(FormulaKind::Neg, "", nullptr, std::move(a), nullptr);
}
FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  return make_formula(FormulaKind::And, "", nullptr, std::move(a), std::move(b));
}
FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) {
  return make_formula(FormulaKind::Or, "", nullptr, std::move(a), std::move(b));
}
FormulaPtr Formula::imp(FormulaPtr a, FormulaPtr b) {
  return make_formula(FormulaKind::Imp, "", nullptr, std::move(a), std::move(b));
}
FormulaPtr Formula::just(TermPtr t, FormulaPtr a) {
  return make_formula(FormulaKind::Just, "", std::move(t), std::move(a), nullptr);
}
FormulaPtr Formula::box(FormulaPtr a) {
  return make_formula(FormulaKind::Box, "", nullptr, std::move(a), nullptr);
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) { return compare(a, b) == 0; }

int compare(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c;
  if (int c = compare(a->term, b->term)) return c;
  if (int c = compare(a->left, b->left)) return c;
  return compare(a->right, b->right);
}

void collect_subformulas(const FormulaPtr& a, FormulaSet& out) {
  if (!out.insert(a).second) return;
  switch (a->kind) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      break;
    case FormulaKind::Neg:
    case FormulaKind::Just:
    case FormulaKind::Box:
      collect_subformulas(a->left, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      collect_subformulas(a->left, out);
      collect_subformulas(a->right, out);
      break;
  }
}

FormulaSet jl_subformulas(const FormulaPtr& a) {
  FormulaSet out;
  collect_subformulas(a, out);
  return out;
}

void collect_terms(const FormulaPtr& a, TermSet& out) {
  if (a->kind == FormulaKind::Just) collect_subterms(a->term, out);
  if (a->left) collect_terms(a->left, out);
  if (a->right) collect_terms(a->right, out);
}

FormulaPtr forgetful_projection(const FormulaPtr& a) {
  switch (a->kind) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      return a;
    case FormulaKind::Neg:
      return Formula::neg(forgetful_projection(a->left));
    case FormulaKind::And:
      return Formula::conj(forgetful_projection(a->left), forgetful_projection(a->right));
    case FormulaKind::Or:
      return Formula::disj(forgetful_projection(a->left), forgetful_projection(a->right));
    case FormulaKind::Imp:
      return Formula::imp(forgetful_projection(a->left), forgetful_projection(a->right));
    case FormulaKind::Just:
    case FormulaKind::Box:
      return Formula::box(forgetful_projection(a->left));
  }
  return a;
}

FormulaPtr substitute_term(const FormulaPtr& a, const std::string& x, const TermPtr& t) {
  switch (a->kind) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      return a;
    case FormulaKind::Neg:
      return Formula::neg(substitute_term(a->left, x, t));
    case FormulaKind::And:
      return Formula::conj(substitute_term(a->left, x, t), substitute_term(a->right, x, t));
    case FormulaKind::Or:
      return Formula::disj(substitute_term(a->left, x, t), substitute_term(a->right, x, t));
    case FormulaKind::Imp:
      return Formula::imp(substitute_term(a->left, x, t), substitute_term(a->right, x, t));
    case FormulaKind::Just:
      return Formula::just(substitute(a->term, x, t), substitute_term(a->left, x, t));
    case FormulaKind::Box:
      return Formula::box(substitute_term(a->left, x, t));
  }
  return a;
}

bool contains_box(const FormulaPtr& a) {
  if (a->kind == FormulaKind::Box) return true;
  if (a->left && contains_box(a->left)) return true;
  if (a->right && contains_box(a->right)) return true;
  return false;
}

namespace {
// precedence: 0 = '->', 1 = '|', 2 = '&', 3 = unary/atom
int formula_level(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Imp:
      return 0;
    case FormulaKind::Or:
      return 1;
    case FormulaKind::And:
      return 2;
    default:
      return 3;
  }
}

void print_formula(const FormulaPtr& f, int min_level, std::string& out) {
  bool paren = formula_level(*f) < min_level;
  if (paren) out += '(';
  switch (f->kind) {
    case FormulaKind::Prop:
      out += f->name;
      break;
    case FormulaKind::Bottom:
      out += "false";
      break;
    case FormulaKind::Neg:
      out += '~';
      print_formula(f->left, 3, out);
      break;
    case FormulaKind::Box:
      out += "[]";
      print_formula(f->left, 3, out);
      break;
    case FormulaKind::Just:
      out += to_string(f->term);
      out += ':';
      print_formula(f->left, 3, out);
      break;
    case FormulaKind::And:
      // left-assoc
      print_formula(f->left, 2, out);
      out += " & ";
      print_formula(f->right, 3, out);
      break;
    case FormulaKind::Or:
      print_formula(f->left, 1, out);
      out += " | ";
      print_formula(f->right, 2, out);
      break;
    case FormulaKind::Imp:
      // right-assoc: the right child may sit at the same level
      print_formula(f->left, 1, out);
      out += " -> ";
      print_formula(f->right, 0, out);
      break;
  }
  if (paren) out += ')';
}
}  // namespace

std::string to_string(const FormulaPtr& a) {
  std::string out;
  print_formula(a, 0, out);
  return out;
}

}  // namespace jseq
