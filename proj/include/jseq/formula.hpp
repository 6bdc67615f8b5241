#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>

#include "jseq/term.hpp"

namespace jseq {

enum class FormulaKind : std::uint8_t { Prop, Bottom, Neg, And, Or, Imp, Just, Box };

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
  FormulaKind kind;
  std::string name;  // Prop only
  TermPtr term;      // Just only
  FormulaPtr left;   // binary: left; unary/Just/Box: operand
  FormulaPtr right;  // binary only

  static FormulaPtr prop(std::string n);
  static FormulaPtr bottom();
  static FormulaPtr neg(FormulaPtr a);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr imp(FormulaPtr a, FormulaPtr b);
  static FormulaPtr just(TermPtr t, FormulaPtr a);
  static FormulaPtr box(FormulaPtr a);

  std::size_t hash() const { return hash_; }

private:
  std::size_t hash_ = 0;
  friend FormulaPtr make_formula(FormulaKind, std::string, TermPtr, FormulaPtr, FormulaPtr);
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);
int compare(const FormulaPtr& a, const FormulaPtr& b);

struct FormulaLess {
  bool operator()(const FormulaPtr& a, const FormulaPtr& b) const { return compare(a, b) < 0; }
};
using FormulaSet = std::set<FormulaPtr, FormulaLess>;

// Sub(t:A) = {t:A} ∪ Sub(A); Box descends like Just.
FormulaSet jl_subformulas(const FormulaPtr& a);
void collect_subformulas(const FormulaPtr& a, FormulaSet& out);
// All terms occurring in the formula (at Just nodes, including inside bodies).
void collect_terms(const FormulaPtr& a, TermSet& out);
// Replaces every t: with []; result contains no Just node.
FormulaPtr forgetful_projection(const FormulaPtr& a);
// F[t/x]: every occurrence of variable x in any term position replaced by t.
FormulaPtr substitute_term(const FormulaPtr& a, const std::string& x, const TermPtr& t);
bool contains_box(const FormulaPtr& a);

std::string to_string(const FormulaPtr& a);

}  // namespace jseq
