#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jseq/formula.hpp"

namespace jseq {

using Label = std::string;

// Items of the extended labeled language: labeled formulas "w |= A",
// relational atoms "w R v" and evidence atoms "w E(t,A)".
enum class ItemKind : std::uint8_t { Labeled, Rel, Ev };

struct SequentItem {
  ItemKind kind;
  Label w;
  Label v;            // Rel only
  TermPtr term;       // Ev only
  FormulaPtr formula; // Labeled / Ev

  static SequentItem labeled(Label w, FormulaPtr a);
  static SequentItem rel(Label w, Label v);
  static SequentItem ev(Label w, TermPtr t, FormulaPtr a);
};

int compare(const SequentItem& a, const SequentItem& b);
bool operator==(const SequentItem& a, const SequentItem& b);
inline bool operator!=(const SequentItem& a, const SequentItem& b) { return !(a == b); }
inline bool operator<(const SequentItem& a, const SequentItem& b) { return compare(a, b) < 0; }

std::string to_string(const SequentItem& item);

// Antecedent and succedent are multisets, kept as canonically sorted vectors
// (labeled < rel < ev, then lexicographic) so enumeration is deterministic
// and multiset equality is plain vector equality.
struct Sequent {
  std::vector<SequentItem> ante;
  std::vector<SequentItem> succ;

  void insert_ante(const SequentItem& it);
  void insert_succ(const SequentItem& it);
  bool ante_contains(const SequentItem& it) const;
  bool succ_contains(const SequentItem& it) const;
  // Removes one copy; returns false if absent.
  bool erase_ante(const SequentItem& it);
  bool erase_succ(const SequentItem& it);
  void normalize();  // sorts both sides

  std::vector<Label> labels() const;  // sorted, deduplicated
  std::size_t hash() const;
};

bool operator==(const Sequent& a, const Sequent& b);
inline bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }

std::string to_string(const Sequent& s);

struct PolarityCounts {
  int n_colon = 0;
  int p_colon = 0;
  int n_box = 0;
  int p_box = 0;
};

// Occurrences of ':' and '[]' in the negative/positive parts of /\G^f -> \/D^f,
// where G^f collects the formulas of labeled formulas in the antecedent.
// Relational and evidence atoms are ignored.
PolarityCounts polarity_counts(const Sequent& s);

}  // namespace jseq
