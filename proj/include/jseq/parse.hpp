#pragma once

#include <stdexcept>
#include <string>

#include "jseq/sequent.hpp"

namespace jseq {

// Parse errors carry the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
  std::size_t position;
};

// Grammar (ASCII):
//   term    := prefix* atom (('*'|'+') ...), '*' before '+', both left-assoc;
//              prefixes '!', '?', '??' bind tightest
//   formula := 'false' | PROP | '~' f | '[]' f | term ':' f | f ('&'|'|'|'->') f
//              with precedence ~,[],':' > '&' > '|' > '->' (right-assoc)
//   item    := LABEL '|=' formula | LABEL 'R' LABEL | LABEL 'E' '(' term ',' formula ')'
//   sequent := items '=>' items (comma-separated, possibly empty)
// Identifier classes: variables [s-z]..., constants [a-e]..., propositional
// variables [A-Z]..., labels [a-w]... in label positions.
TermPtr parse_term(const std::string& text);
FormulaPtr parse_formula(const std::string& text);
SequentItem parse_item(const std::string& text);
Sequent parse_sequent(const std::string& text);

bool is_variable_name(const std::string& id);
bool is_constant_name(const std::string& id);
bool is_prop_name(const std::string& id);
bool is_label_name(const std::string& id);

}  // namespace jseq
