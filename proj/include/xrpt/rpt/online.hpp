#pragma once

#include <optional>

#include "xrpt/constraint/solver.hpp"
#include "xrpt/rpt/reachability.hpp"
#include "xrpt/sut/session.hpp"

namespace xrpt {

struct RptMove {
  TransitionId transition;
  Assignment input;
  /// Length of the remaining covering path, this move included.
  int remaining = 0;
  /// False when the negated rival guards had to be dropped.
  bool forced = true;
};

/// Next move towards the trap from (state, trap values): a transition
/// starting a shortest covering path, with an input that excludes its rivals
/// when possible. nullopt when no layer holds in the current state.
std::optional<RptMove> rpt_plan_move(const EfsmModel& m, const ReachabilitySet& rs, const EfsmState& state,
                                     const Assignment& trap_values, const SolveOptions& solve = {});

enum class RptOutcome { Covered, Stuck, Failed };

struct RptResult {
  RptOutcome outcome = RptOutcome::Stuck;
  std::size_t steps = 0;
};

/// Drives the SUT along planned moves until the trap is covered, the SUT
/// leaves every layer (Stuck) or a nonconformance is observed (Failed).
/// Gives up as Stuck after 4 * (depth + 1) steps without coverage.
RptResult rpt_online_step(const EfsmModel& m, const ReachabilitySet& rs, Session& session,
                          const SolveOptions& solve = {});

}  // namespace xrpt
