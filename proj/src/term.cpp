#include "jseq/term.hpp"

#include <functional>

namespace jseq {

namespace {
std::size_t hash_mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
}  // namespace

TermPtr make_term(TermKind k, std::string name, TermPtr l, TermPtr r) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->name = std::move(name);
  t->left = std::move(l);
  t->right = std::move(r);
  std::size_t h = static_cast<std::size_t>(k) * 0x9e3779b97f4a7c15ULL;
  h = hash_mix(h, std::hash<std::string>{}(t->name));
  if (t->left) h = hash_mix(h, t->left->hash());
  if (t->right) h = hash_mix(h, t->right->hash());
  t->hash_ = h;
  return t;
}

TermPtr Term::var(std::string n) { return make_term(TermKind::Var, std::move(n), nullptr, nullptr); }
TermPtr Term::constant(std::string n) {
  return make_term(TermKind::Const, std::move(n), nullptr, nullptr);
}
TermPtr Term::sum(TermPtr l, TermPtr r) {
  return make_term(TermKind::Sum, "", std::move(l), std::move(r));
}
TermPtr Term::app(TermPtr l, TermPtr r) {
  return make_term(TermKind::App, "", std::move(l), std::move(r));
}
TermPtr Term::bang(TermPtr t) { return make_term(TermKind::Bang, "", std::move(t), nullptr); }
TermPtr Term::query(TermPtr t) { return make_term(TermKind::Query, "", std::move(t), nullptr); }
TermPtr Term::bar_query(TermPtr t) {
  return make_term(TermKind::BarQuery, "", std::move(t), nullptr);
}

bool equal(const TermPtr& a, const TermPtr& b) { return compare(a, b) == 0; }

int compare(const TermPtr& a, const TermPtr& b) {
  if (a == b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (int c = a->name.compare(b->name)) return c;
  if (int c = compare(a->left, b->left)) return c;
  return compare(a->right, b->right);
}

int rank(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
      return 0;
    case TermKind::Sum:
    case TermKind::App:
      return std::max(rank(t->left), rank(t->right)) + 1;
    case TermKind::Bang:
    case TermKind::Query:
    case TermKind::BarQuery:
      return rank(t->left) + 1;
  }
  return 0;
}

bool is_ground(const TermPtr& t) {
  if (t->kind == TermKind::Var) return false;
  if (t->kind == TermKind::Const) return true;
  if (t->is_unary()) return is_ground(t->left);
  return is_ground(t->left) && is_ground(t->right);
}

void collect_subterms(const TermPtr& t, TermSet& out) {
  if (!out.insert(t).second) return;
  if (t->left) collect_subterms(t->left, out);
  if (t->right) collect_subterms(t->right, out);
}

TermSet subterms(const TermPtr& t) {
  TermSet out;
  collect_subterms(t, out);
  return out;
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& r) {
  switch (t->kind) {
    case TermKind::Var:
      return t->name == x ? r : t;
    case TermKind::Const:
      return t;
    case TermKind::Sum:
      return Term::sum(substitute(t->left, x, r), substitute(t->right, x, r));
    case TermKind::App:
      return Term::app(substitute(t->left, x, r), substitute(t->right, x, r));
    case TermKind::Bang:
      return Term::bang(substitute(t->left, x, r));
    case TermKind::Query:
      return Term::query(substitute(t->left, x, r));
    case TermKind::BarQuery:
      return Term::bar_query(substitute(t->left, x, r));
  }
  return t;
}

namespace {
// precedence: 0 = '+' level, 1 = '*' level, 2 = prefix/atom
int term_level(const Term& t) {
  switch (t.kind) {
    case TermKind::Sum:
      return 0;
    case TermKind::App:
      return 1;
    default:
      return 2;
  }
}

void print_term(const TermPtr& t, int min_level, std::string& out) {
  bool paren = term_level(*t) < min_level;
  if (paren) out += '(';
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
      out += t->name;
      break;
    case TermKind::Sum:
      // left-assoc: left child may be at the same level, right must be tighter
      print_term(t->left, 0, out);
      out += '+';
      print_term(t->right, 1, out);
      break;
    case TermKind::App:
      print_term(t->left, 1, out);
      out += '*';
      print_term(t->right, 2, out);
      break;
    case TermKind::Bang:
      out += '!';
      print_term(t->left, 2, out);
      break;
    case TermKind::Query:
      out += '?';
      // '?' directly followed by another query would lex as '??'
      if (t->left->kind == TermKind::Query || t->left->kind == TermKind::BarQuery) {
        out += '(';
        print_term(t->left, 0, out);
        out += ')';
      } else {
        print_term(t->left, 2, out);
      }
      break;
    case TermKind::BarQuery:
      out += "??";
      print_term(t->left, 2, out);
      break;
  }
  if (paren) out += ')';
}
}  // namespace

std::string to_string(const TermPtr& t) {
  std::string out;
  print_term(t, 0, out);
  return out;
}

}  // namespace jseq
