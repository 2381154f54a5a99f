#include "xrpt/constraint/parser.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "xrpt/error.hpp"

namespace xrpt {

namespace {

enum class Tok { Int, Ident, And, Or, Not, LParen, RParen, Plus, Minus, Star, Rel, End };

struct Token {
  Tok kind;
  std::string text;
  std::int64_t value = 0;
  Relation rel = Relation::Eq;
  std::size_t offset = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len, Relation r = Relation::Eq) {
    out.push_back(Token{k, std::string(s.substr(i, len)), 0, r, i});
    i += len;
  };
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::int64_t v = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, s[j] - '0', &v))
          throw ParseError("integer literal out of range", i);
        ++j;
      }
      out.push_back(Token{Tok::Int, std::string(s.substr(i, j - i)), v, Relation::Eq, i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
      push(Tok::Ident, j - i);
      continue;
    }
    const auto two = s.substr(i, 2);
    if (two == "&&") { push(Tok::And, 2); continue; }
    if (two == "||") { push(Tok::Or, 2); continue; }
    if (two == "<=") { push(Tok::Rel, 2, Relation::Le); continue; }
    if (two == ">=") { push(Tok::Rel, 2, Relation::Ge); continue; }
    if (two == "!=") { push(Tok::Rel, 2, Relation::Ne); continue; }
    if (two == "==") { push(Tok::Rel, 2, Relation::Eq); continue; }
    switch (c) {
      case '=': push(Tok::Rel, 1, Relation::Eq); continue;
      case '<': push(Tok::Rel, 1, Relation::Lt); continue;
      case '>': push(Tok::Rel, 1, Relation::Gt); continue;
      case '!': push(Tok::Not, 1); continue;
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      default: throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back(Token{Tok::End, "", 0, Relation::Eq, s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const VarTable& vars, const SymbolConstants* constants)
      : toks_(tokenize(text)), vars_(vars), constants_(constants) {}

  Constraint formula_to_end() {
    Constraint c = disjunction();
    expect(Tok::End, "end of input");
    return c;
  }

  LinearExpr sum_to_end() {
    LinearExpr e = sum();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k)) throw ParseError(std::string("expected ") + what, peek().offset);
  }

  Constraint disjunction() {
    std::vector<Constraint> parts{conjunction()};
    while (accept(Tok::Or)) parts.push_back(conjunction());
    return Constraint::disjunction(std::move(parts));
  }

  Constraint conjunction() {
    std::vector<Constraint> parts{unary()};
    while (accept(Tok::And)) parts.push_back(unary());
    return Constraint::conjunction(std::move(parts));
  }

  Constraint unary() {
    if (accept(Tok::Not)) return Constraint::negation(unary());
    // A parenthesis may open either a sub-formula or an arithmetic operand of
    // a comparison; try the comparison reading first and rewind on failure.
    if (peek().kind == Tok::LParen) {
      const std::size_t save = pos_;
      try {
        return comparison();
      } catch (const ParseError&) {
        pos_ = save;
      }
      expect(Tok::LParen, "'('");
      Constraint inner = disjunction();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (peek().kind == Tok::Ident && peek(1).kind != Tok::Rel && !is_arith_continuation(peek(1).kind)) {
      const Token& t = peek();
      if (t.text == "true") { ++pos_; return Constraint::truth(); }
      if (t.text == "false") { ++pos_; return Constraint::falsity(); }
      if (auto v = vars_.find(t.text)) {
        const auto& d = vars_[*v];
        if (d.lower == 0 && d.upper == 1) {
          ++pos_;
          return Constraint::compare(LinearExpr::variable(*v), Relation::Eq, LinearExpr::constant(1));
        }
        throw ParseError("variable '" + t.text + "' is not boolean and cannot stand alone", t.offset);
      }
    }
    return comparison();
  }

  static bool is_arith_continuation(Tok k) { return k == Tok::Plus || k == Tok::Minus || k == Tok::Star; }

  Constraint comparison() {
    LinearExpr lhs = sum();
    if (peek().kind != Tok::Rel) throw ParseError("expected comparison operator", peek().offset);
    const Relation rel = peek().rel;
    ++pos_;
    LinearExpr rhs = sum();
    return Constraint::compare(lhs, rel, rhs);
  }

  LinearExpr sum() {
    LinearExpr e = product();
    for (;;) {
      if (accept(Tok::Plus))
        e = e + product();
      else if (accept(Tok::Minus))
        e = e - product();
      else
        return e;
    }
  }

  LinearExpr product() {
    const std::size_t at = peek().offset;
    LinearExpr e = factor();
    while (accept(Tok::Star)) {
      LinearExpr rhs = factor();
      if (e.is_constant())
        e = rhs.scaled(e.constant_term());
      else if (rhs.is_constant())
        e = e.scaled(rhs.constant_term());
      else
        throw NonlinearError("product of two non-constant terms at offset " + std::to_string(at));
    }
    return e;
  }

  LinearExpr factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: ++pos_; return LinearExpr::constant(t.value);
      case Tok::Minus: ++pos_; return -factor();
      case Tok::LParen: {
        ++pos_;
        LinearExpr e = sum();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        ++pos_;
        if (auto v = vars_.find(t.text)) return LinearExpr::variable(*v);
        if (constants_) {
          if (auto it = constants_->find(t.text); it != constants_->end()) return LinearExpr::constant(it->second);
        }
        if (t.text == "true") return LinearExpr::constant(1);
        if (t.text == "false") return LinearExpr::constant(0);
        throw ParseError("unknown identifier '" + t.text + "'", t.offset);
      }
      default: throw ParseError("expected operand", t.offset);
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const VarTable& vars_;
  const SymbolConstants* constants_;
};

}  // namespace

Constraint parse_constraint(std::string_view text, const VarTable& vars, const SymbolConstants* constants) {
  return Parser(text, vars, constants).formula_to_end();
}

LinearExpr parse_linear_expr(std::string_view text, const VarTable& vars, const SymbolConstants* constants) {
  return Parser(text, vars, constants).sum_to_end();
}

}  // namespace xrpt
