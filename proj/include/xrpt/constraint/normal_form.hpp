#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xrpt/constraint/constraint.hpp"
#include "xrpt/constraint/var_table.hpp"

namespace xrpt {

/// Conjunction of canonical atoms. An empty clause is TRUE.
struct Clause {
  std::vector<Atom> atoms;
  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Disjunction of clauses. An empty DNF is FALSE.
using Dnf = std::vector<Clause>;

/// Expands a formula into disjunctive normal form. Throws Error when more than
/// `max_clauses` clauses would be produced.
Dnf to_dnf(const Constraint& c, std::size_t max_clauses = 1 << 14);
Constraint to_constraint(const Dnf& dnf);
Constraint to_constraint(const Clause& clause);

/// Folds ground atoms, collects single-variable bounds against the declared
/// domains, substitutes variables pinned to one value, and drops bounds the
/// domain already implies. Returns nullopt for a clause found contradictory.
/// The result is in canonical order, so equal clauses compare equal.
std::optional<Clause> simplify_clause(const Clause& clause, const VarTable& vars);

/// Syntactic sufficient check for `a` implies `b` over the declared domains.
/// Both clauses must be simplified.
bool clause_implies(const Clause& a, const Clause& b, const VarTable& vars);

/// Adds `c` to `dnf` unless it is implied by a clause already present;
/// removes clauses it implies. Returns true if the DNF changed.
bool add_clause_subsuming(Dnf& dnf, Clause c, const VarTable& vars);

struct ProjectionOptions {
  /// Domain width up to which a variable with non-unit coefficients is
  /// eliminated by enumerating its values; wider domains fall back to a
  /// disjunction of evenly spaced witnesses (an under-approximation).
  std::int64_t enumeration_cap = 64;
};

/// Existentially eliminates `eliminated` (each over its declared domain) from
/// the clause. Unit-coefficient variables go through equality substitution or
/// integer Fourier-Motzkin, both exact; disequalities split into two strict
/// bounds. Returned clauses are simplified and free of `eliminated`.
Dnf project_clause(const Clause& clause, std::span<const VarId> eliminated, const VarTable& vars,
                   const ProjectionOptions& options = {});

/// project_clause over every clause of the DNF of `c`.
Constraint project(const Constraint& c, std::span<const VarId> eliminated, const VarTable& vars,
                   const ProjectionOptions& options = {});

}  // namespace xrpt
