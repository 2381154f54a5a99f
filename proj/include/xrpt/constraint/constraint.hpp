#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "xrpt/constraint/assignment.hpp"
#include "xrpt/constraint/linear_expr.hpp"
#include "xrpt/constraint/var_table.hpp"

namespace xrpt {

/// Comparison as written by a user.
enum class Relation { Eq, Ne, Lt, Le, Gt, Ge };

/// Canonical comparison against zero. `<`, `>` and `>=` are rewritten into
/// `<=` over integers (a < b  <=>  a - b + 1 <= 0), which leaves the violations
/// degree of the comparison unchanged.
enum class AtomOp { Eq, Le, Ne };

struct Atom {
  LinearExpr expr;  // compared against 0
  AtomOp op = AtomOp::Eq;

  static Atom make(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs);
  Atom negated() const;
  bool holds(std::int64_t value) const;
  /// Fig.-6 violations degree of the comparison for an evaluated left side.
  std::int64_t violation(std::int64_t value) const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.op <=> b.op; c != 0) return c;
    return a.expr <=> b.expr;
  }
};

/// Immutable quantifier-free formula over linear integer comparisons.
/// Handles share structure, so copying is cheap and values can be shared
/// across threads.
class Constraint {
 public:
  enum class Kind { True, False, Atom, And, Or, Not };

  Constraint();  // TRUE

  static Constraint truth();
  static Constraint falsity();
  static Constraint boolean(bool value) { return value ? truth() : falsity(); }
  /// Ground atoms fold to TRUE/FALSE.
  static Constraint atom(Atom a);
  static Constraint compare(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs);
  /// Flattens nested conjunctions, drops TRUE, collapses on FALSE.
  static Constraint conjunction(std::vector<Constraint> parts);
  static Constraint disjunction(std::vector<Constraint> parts);
  /// Builds a NOT node; constants fold. push_negations removes the rest.
  static Constraint negation(const Constraint& c);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const Atom& atom() const;
  std::span<const Constraint> children() const;
  const Constraint& operand() const;

  std::vector<VarId> free_variables() const;
  bool mentions(VarId var) const;

  friend bool operator==(const Constraint& a, const Constraint& b);

 private:
  struct Node;
  explicit Constraint(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline Constraint operator&&(const Constraint& a, const Constraint& b) { return Constraint::conjunction({a, b}); }
inline Constraint operator||(const Constraint& a, const Constraint& b) { return Constraint::disjunction({a, b}); }
inline Constraint operator!(const Constraint& a) { return Constraint::negation(a); }

/// Standard semantics over the integers. Throws UnboundVariableError if a free
/// variable has no value.
bool evaluate(const Constraint& c, const Assignment& a);

/// Negation normal form: no NOT node remains; negated comparisons become the
/// arithmetic complement.
Constraint push_negations(const Constraint& c);

/// Simultaneous substitution followed by constant folding.
Constraint substitute(const Constraint& c, const Substitution& s);
/// Replaces the bound variables of `a` by their values and folds.
Constraint partially_evaluate(const Constraint& c, const Assignment& a);

/// Violations degree. `c` must be in NNF (NotInNnfError otherwise) and `a`
/// must bind every free variable.
std::int64_t violations_degree(const Constraint& c, const Assignment& a);

/// Conjunction of `lower <= v <= upper` for the given variables.
Constraint domain_constraint(const VarTable& vars, std::span<const VarId> which);
Constraint domain_constraint(const VarTable& vars);

std::string to_string(const Constraint& c, const VarTable& vars);

}  // namespace xrpt
