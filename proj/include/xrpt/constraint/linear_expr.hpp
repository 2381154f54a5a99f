#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "xrpt/constraint/assignment.hpp"
#include "xrpt/constraint/var_table.hpp"
#include "xrpt/ids.hpp"

namespace xrpt {

class Substitution;

/// Overflow-checked 64-bit helpers. Results that do not fit raise
/// ArithmeticOverflowError; nothing wraps around.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_sub(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_abs(std::int64_t a);

struct Term {
  VarId var;
  std::int64_t coef = 0;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Linear integer expression kept in canonical form: a constant plus terms
/// sorted by variable with non-zero coefficients. Sums, differences and
/// constant multiples fold on construction, so two expressions that denote the
/// same polynomial compare equal.
class LinearExpr {
 public:
  LinearExpr() = default;
  static LinearExpr constant(std::int64_t value);
  static LinearExpr variable(VarId var, std::int64_t coef = 1);

  std::int64_t constant_term() const { return constant_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_constant() const { return terms_.empty(); }
  std::int64_t coefficient(VarId var) const;
  bool mentions(VarId var) const { return coefficient(var) != 0; }

  LinearExpr operator+(const LinearExpr& rhs) const;
  LinearExpr operator-(const LinearExpr& rhs) const;
  LinearExpr operator-() const { return scaled(-1); }
  LinearExpr scaled(std::int64_t factor) const;
  LinearExpr plus_constant(std::int64_t c) const;

  /// Simultaneous substitution; variables outside the substitution stay.
  LinearExpr substitute(const Substitution& s) const;
  /// Replaces bound variables by their values, leaving the rest symbolic.
  LinearExpr partially_evaluate(const Assignment& a) const;
  /// Throws UnboundVariableError if a variable has no value.
  std::int64_t evaluate(const Assignment& a) const;

  std::string to_string(const VarTable& vars) const;

  friend bool operator==(const LinearExpr&, const LinearExpr&) = default;
  friend auto operator<=>(const LinearExpr& a, const LinearExpr& b) {
    if (auto c = a.constant_ <=> b.constant_; c != 0) return c;
    return std::lexicographical_compare_three_way(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(), [](const Term& x, const Term& y) {
          if (auto c = x.var <=> y.var; c != 0) return c;
          return x.coef <=> y.coef;
        });
  }

 private:
  void add_term(VarId var, std::int64_t coef);

  std::int64_t constant_ = 0;
  std::vector<Term> terms_;
};

/// Simultaneous replacement of variables by linear expressions.
class Substitution {
 public:
  Substitution() = default;

  void assign(VarId var, LinearExpr value);
  const LinearExpr* find(VarId var) const;
  bool empty() const { return entries_.empty(); }
  const std::vector<std::pair<VarId, LinearExpr>>& entries() const { return entries_; }

  /// The substitution equivalent to applying *this first and `next` second.
  Substitution then(const Substitution& next) const;

  static Substitution from_assignment(const Assignment& a);

 private:
  std::vector<std::pair<VarId, LinearExpr>> entries_;  // sorted by variable
};

}  // namespace xrpt
