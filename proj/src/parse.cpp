#include "jseq/parse.hpp"

#include <cctype>

namespace jseq {

bool is_variable_name(const std::string& id) {
  return !id.empty() && id[0] >= 's' && id[0] <= 'z';
}
bool is_constant_name(const std::string& id) {
  return !id.empty() && id[0] >= 'a' && id[0] <= 'e';
}
bool is_prop_name(const std::string& id) {
  return !id.empty() && id[0] >= 'A' && id[0] <= 'Z';
}
bool is_label_name(const std::string& id) {
  return !id.empty() && id[0] >= 'a' && id[0] <= 'w' && id != "false";
}

namespace {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool lookahead(const std::string& s) {
    skip_ws();
    return text.compare(pos, s.size(), s) == 0;
  }

  bool consume(const std::string& s) {
    if (!lookahead(s)) return false;
    pos += s.size();
    return true;
  }

  void expect(const std::string& s, const std::string& what) {
    if (!consume(s)) throw ParseError("expected '" + s + "' " + what, pos);
  }

  bool ident_ahead() {
    char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) != 0;
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected identifier", pos);
    ++pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(const std::string& t) : lex(t) {}

  // ---- terms ----

  TermPtr term_atom() {
    if (lex.consume("(")) {
      TermPtr t = term();
      lex.expect(")", "after term");
      return t;
    }
    std::size_t at = lex.pos;
    std::string id = lex.ident();
    if (is_variable_name(id)) return Term::var(id);
    if (is_constant_name(id)) return Term::constant(id);
    throw ParseError("'" + id + "' is neither a justification variable nor a constant", at);
  }

  TermPtr term_prefixed() {
    if (lex.consume("??")) return Term::bar_query(term_prefixed());
    if (lex.consume("?")) return Term::query(term_prefixed());
    if (lex.consume("!")) return Term::bang(term_prefixed());
    return term_atom();
  }

  TermPtr term_app() {  // '*', left-assoc
    TermPtr t = term_prefixed();
    while (lex.consume("*")) t = Term::app(t, term_prefixed());
    return t;
  }

  TermPtr term() {  // '+', left-assoc
    TermPtr t = term_app();
    while (lex.consume("+")) t = Term::sum(t, term_app());
    return t;
  }

  // ---- formulas ----

  // unary level: '~', '[]', 'false', PROP, term ':' unary, parenthesized
  FormulaPtr formula_unary() {
    if (lex.consume("~")) return Formula::neg(formula_unary());
    if (lex.consume("[]")) return Formula::box(formula_unary());
    if (lex.lookahead("(")) {
      // could be a parenthesized formula or a parenthesized term before ':'
      std::size_t save = lex.pos;
      try {
        TermPtr t = term();
        if (lex.consume(":")) return Formula::just(t, formula_unary());
      } catch (const ParseError&) {
      }
      lex.pos = save;
      lex.consume("(");
      FormulaPtr f = formula();
      lex.expect(")", "after formula");
      return f;
    }
    if (lex.lookahead("!") || lex.lookahead("?")) {
      TermPtr t = term();
      lex.expect(":", "after justification term");
      return Formula::just(t, formula_unary());
    }
    if (lex.ident_ahead()) {
      std::size_t save = lex.pos;
      std::size_t at = lex.pos;
      std::string id = lex.ident();
      if (id == "false") return Formula::bottom();
      if (is_variable_name(id) || is_constant_name(id)) {
        // must be a term followed by ':'
        lex.pos = save;
        TermPtr t = term();
        lex.expect(":", "after justification term");
        return Formula::just(t, formula_unary());
      }
      if (is_prop_name(id)) return Formula::prop(id);
      throw ParseError("'" + id + "' is not a propositional variable, term or keyword", at);
    }
    throw ParseError("expected formula", lex.pos);
  }

  FormulaPtr formula_and() {
    FormulaPtr f = formula_unary();
    while (lex.consume("&")) f = Formula::conj(f, formula_unary());
    return f;
  }

  FormulaPtr formula_or() {
    FormulaPtr f = formula_and();
    while (true) {
      // '|' but not '|='
      lex.skip_ws();
      if (lex.lookahead("|=") || !lex.consume("|")) break;
      f = Formula::disj(f, formula_and());
    }
    return f;
  }

  FormulaPtr formula() {  // '->', right-assoc
    FormulaPtr f = formula_or();
    if (lex.consume("->")) return Formula::imp(f, formula());
    return f;
  }

  // ---- sequents ----

  SequentItem item() {
    std::size_t at = lex.pos;
    std::string w = lex.ident();
    if (!is_label_name(w)) throw ParseError("'" + w + "' is not a label", at);
    if (lex.consume("|=")) return SequentItem::labeled(w, formula());
    if (lex.ident_ahead()) {
      std::size_t mid = lex.pos;
      std::string op = lex.ident();
      if (op == "R") {
        std::size_t vat = lex.pos;
        std::string v = lex.ident();
        if (!is_label_name(v)) throw ParseError("'" + v + "' is not a label", vat);
        return SequentItem::rel(w, v);
      }
      if (op == "E" && lex.lookahead("(")) {
        lex.consume("(");
        TermPtr t = term();
        lex.expect(",", "between term and formula in evidence atom");
        FormulaPtr f = formula();
        lex.expect(")", "after evidence atom");
        return SequentItem::ev(w, t, f);
      }
      lex.pos = mid;
    }
    throw ParseError("malformed atom: expected '|=', 'R' or 'E(' after label", lex.pos);
  }

  Sequent sequent() {
    Sequent s;
    if (!lex.lookahead("=>")) {
      s.insert_ante(item());
      while (lex.consume(",")) s.insert_ante(item());
    }
    lex.expect("=>", "between antecedent and succedent");
    if (!lex.eof()) {
      s.insert_succ(item());
      while (lex.consume(",")) s.insert_succ(item());
    }
    return s;
  }

  void end(const std::string& what) {
    if (!lex.eof()) throw ParseError("trailing input after " + what, lex.pos);
  }
};

}  // namespace

TermPtr parse_term(const std::string& text) {
  Parser p(text);
  TermPtr t = p.term();
  p.end("term");
  return t;
}

FormulaPtr parse_formula(const std::string& text) {
  Parser p(text);
  FormulaPtr f = p.formula();
  p.end("formula");
  return f;
}

SequentItem parse_item(const std::string& text) {
  Parser p(text);
  SequentItem it = p.item();
  p.end("atom");
  return it;
}

Sequent parse_sequent(const std::string& text) {
  Parser p(text);
  Sequent s = p.sequent();
  p.end("sequent");
  return s;
}

}  // namespace jseq
