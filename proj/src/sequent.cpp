#include "jseq/sequent.hpp"

#include <algorithm>

namespace jseq {

SequentItem SequentItem::labeled(Label w, FormulaPtr a) {
  SequentItem it;
  it.kind = ItemKind::Labeled;
  it.w = std::move(w);
  it.formula = std::move(a);
  return it;
}

SequentItem SequentItem::rel(Label w, Label v) {
  SequentItem it;
  it.kind = ItemKind::Rel;
  it.w = std::move(w);
  it.v = std::move(v);
  return it;
}

SequentItem SequentItem::ev(Label w, TermPtr t, FormulaPtr a) {
  SequentItem it;
  it.kind = ItemKind::Ev;
  it.w = std::move(w);
  it.term = std::move(t);
  it.formula = std::move(a);
  return it;
}

int compare(const SequentItem& a, const SequentItem& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (int c = a.w.compare(b.w)) return c;
  switch (a.kind) {
    case ItemKind::Labeled:
      return compare(a.formula, b.formula);
    case ItemKind::Rel:
      return a.v.compare(b.v);
    case ItemKind::Ev:
      if (int c = compare(a.term, b.term)) return c;
      return compare(a.formula, b.formula);
  }
  return 0;
}

bool operator==(const SequentItem& a, const SequentItem& b) { return compare(a, b) == 0; }

std::string to_string(const SequentItem& item) {
  switch (item.kind) {
    case ItemKind::Labeled:
      return item.w + " |= " + to_string(item.formula);
    case ItemKind::Rel:
      return item.w + " R " + item.v;
    case ItemKind::Ev:
      return item.w + " E(" + to_string(item.term) + ", " + to_string(item.formula) + ")";
  }
  return {};
}

namespace {
void sorted_insert(std::vector<SequentItem>& v, const SequentItem& it) {
  v.insert(std::lower_bound(v.begin(), v.end(), it), it);
}
bool sorted_contains(const std::vector<SequentItem>& v, const SequentItem& it) {
  return std::binary_search(v.begin(), v.end(), it);
}
bool sorted_erase(std::vector<SequentItem>& v, const SequentItem& it) {
  auto pos = std::lower_bound(v.begin(), v.end(), it);
  if (pos == v.end() || !(*pos == it)) return false;
  v.erase(pos);
  return true;
}
}  // namespace

void Sequent::insert_ante(const SequentItem& it) { sorted_insert(ante, it); }
void Sequent::insert_succ(const SequentItem& it) { sorted_insert(succ, it); }
bool Sequent::ante_contains(const SequentItem& it) const { return sorted_contains(ante, it); }
bool Sequent::succ_contains(const SequentItem& it) const { return sorted_contains(succ, it); }
bool Sequent::erase_ante(const SequentItem& it) { return sorted_erase(ante, it); }
bool Sequent::erase_succ(const SequentItem& it) { return sorted_erase(succ, it); }

void Sequent::normalize() {
  std::sort(ante.begin(), ante.end());
  std::sort(succ.begin(), succ.end());
}

std::vector<Label> Sequent::labels() const {
  std::vector<Label> out;
  auto add = [&out](const SequentItem& it) {
    out.push_back(it.w);
    if (it.kind == ItemKind::Rel) out.push_back(it.v);
  };
  for (const auto& it : ante) add(it);
  for (const auto& it : succ) add(it);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Sequent::hash() const {
  std::size_t h = 0x51ed270b;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (const auto& it : ante) {
    mix(static_cast<std::size_t>(it.kind));
    mix(std::hash<std::string>{}(it.w));
    mix(std::hash<std::string>{}(it.v));
    if (it.term) mix(it.term->hash());
    if (it.formula) mix(it.formula->hash());
  }
  mix(0xabcdef12u);
  for (const auto& it : succ) {
    mix(static_cast<std::size_t>(it.kind));
    mix(std::hash<std::string>{}(it.w));
    mix(std::hash<std::string>{}(it.v));
    if (it.term) mix(it.term->hash());
    if (it.formula) mix(it.formula->hash());
  }
  return h;
}

bool operator==(const Sequent& a, const Sequent& b) {
  if (a.ante.size() != b.ante.size() || a.succ.size() != b.succ.size()) return false;
  return std::equal(a.ante.begin(), a.ante.end(), b.ante.begin()) &&
         std::equal(a.succ.begin(), a.succ.end(), b.succ.begin());
}

std::string to_string(const Sequent& s) {
  std::string out;
  for (std::size_t i = 0; i < s.ante.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.ante[i]);
  }
  out += s.ante.empty() ? "=>" : " =>";
  for (std::size_t i = 0; i < s.succ.size(); ++i) {
    out += i ? ", " : " ";
    out += to_string(s.succ[i]);
  }
  return out;
}

namespace {
// positive = true when the occurrence sits in the positive part.
void count_polarity(const FormulaPtr& f, bool positive, PolarityCounts& out) {
  switch (f->kind) {
    case FormulaKind::Prop:
    case FormulaKind::Bottom:
      break;
    case FormulaKind::Neg:
      count_polarity(f->left, !positive, out);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      count_polarity(f->left, positive, out);
      count_polarity(f->right, positive, out);
      break;
    case FormulaKind::Imp:
      count_polarity(f->left, !positive, out);
      count_polarity(f->right, positive, out);
      break;
    case FormulaKind::Just:
      (positive ? out.p_colon : out.n_colon)++;
      count_polarity(f->left, positive, out);
      break;
    case FormulaKind::Box:
      (positive ? out.p_box : out.n_box)++;
      count_polarity(f->left, positive, out);
      break;
  }
}
}  // namespace

PolarityCounts polarity_counts(const Sequent& s) {
  PolarityCounts out;
  for (const auto& it : s.ante)
    if (it.kind == ItemKind::Labeled) count_polarity(it.formula, false, out);
  for (const auto& it : s.succ)
    if (it.kind == ItemKind::Labeled) count_polarity(it.formula, true, out);
  return out;
}

}  // namespace jseq
