#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

namespace jseq {

// Justification terms: variables and constants combined with application '*',
// sum '+', verifier '!', negative verifier '?' and weak negative verifier '??'.
enum class TermKind : std::uint8_t { Var, Const, Sum, App, Bang, Query, BarQuery };

class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
  TermKind kind;
  std::string name;  // Var / Const only
  TermPtr left;      // binary: left operand; unary: operand
  TermPtr right;     // binary only

  static TermPtr var(std::string n);
  static TermPtr constant(std::string n);
  static TermPtr sum(TermPtr l, TermPtr r);
  static TermPtr app(TermPtr l, TermPtr r);
  static TermPtr bang(TermPtr t);
  static TermPtr query(TermPtr t);
  static TermPtr bar_query(TermPtr t);

  std::size_t hash() const { return hash_; }
  bool is_atomic() const { return kind == TermKind::Var || kind == TermKind::Const; }
  bool is_unary() const {
    return kind == TermKind::Bang || kind == TermKind::Query || kind == TermKind::BarQuery;
  }

private:
  std::size_t hash_ = 0;
  friend TermPtr make_term(TermKind, std::string, TermPtr, TermPtr);
};

bool equal(const TermPtr& a, const TermPtr& b);
// Total structural order used for canonical sorting; returns <0, 0 or >0.
int compare(const TermPtr& a, const TermPtr& b);

struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return compare(a, b) < 0; }
};
using TermSet = std::set<TermPtr, TermLess>;

// rk(x)=rk(c)=0, rk(s+t)=rk(s*t)=max+1, rk(!t)=rk(?t)=rk(??t)=rk(t)+1.
int rank(const TermPtr& t);
bool is_ground(const TermPtr& t);
// Reflexive-transitive subterm set.
TermSet subterms(const TermPtr& t);
void collect_subterms(const TermPtr& t, TermSet& out);
// Simultaneous replacement of variable x by r.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& r);

std::string to_string(const TermPtr& t);

}  // namespace jseq
