#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "xrpt/constraint/assignment.hpp"
#include "xrpt/constraint/constraint.hpp"
#include "xrpt/constraint/var_table.hpp"

namespace xrpt {

struct SolveOptions {
  /// When set, branching order is randomised and the lexicographic guarantee
  /// no longer holds. Used by the randomised baselines.
  std::mt19937_64* rng = nullptr;
  /// Search nodes before SolverBudgetError is raised.
  std::uint64_t node_limit = 20'000'000;
};

/// Finds a model for `c` over the `free` variables (each ranging over its
/// declared domain) with `fixed` pinned. Returns the lexicographically
/// smallest model in the canonical search order (label selector first, then
/// by name), or nullopt when unsatisfiable. Any variable of `c` that is neither
/// free nor fixed raises UnboundVariableError.
std::optional<Assignment> sat_model(const VarTable& vars, std::span<const VarId> free, const Assignment& fixed,
                                    const Constraint& c, const SolveOptions& options = {});

/// Among models of `feasibility`, returns one minimising the violations degree
/// of `objective`; ties go to the lexicographically smallest model.
std::optional<Assignment> optimize_model(const VarTable& vars, std::span<const VarId> free, const Assignment& fixed,
                                         const Constraint& feasibility, const Constraint& objective,
                                         const SolveOptions& options = {});

/// True iff (domain && d) implies c, i.e. domain && d && !c has no model.
/// Every variable mentioned is free over its declared bounds.
bool is_weaker_or_equal(const VarTable& vars, const Constraint& c, const Constraint& d, const Constraint& domain,
                        const SolveOptions& options = {});

/// Satisfiability with every mentioned variable free.
bool satisfiable(const VarTable& vars, const Constraint& c, const SolveOptions& options = {});

}  // namespace xrpt
