#include "xrpt/rpt/online.hpp"

#include <chrono>

namespace xrpt {

std::optional<RptMove> rpt_plan_move(const EfsmModel& m, const ReachabilitySet& rs, const EfsmState& state,
                                     const Assignment& trap_values, const SolveOptions& solve) {
  const Assignment context = state.alpha.merged(trap_values);
  const auto j = rs.satisfied_length(state.location, context);
  if (!j) return std::nullopt;
  const TransitionId trap_t = m.trap(rs.trap()).transition;
  const std::vector<VarId> inputs = m.input_vars();

  std::vector<std::pair<TransitionId, Constraint>> options;
  for (TransitionId t : m.out(state.location)) {
    if (*j == 1) {
      if (t == trap_t) options.emplace_back(t, rs.base());
      continue;
    }
    const Constraint& target = rs.layer(*j - 1, m.transition(t).target);
    if (!target.is_false()) options.emplace_back(t, backward_step(m, t, target));
  }
  for (bool forced : {true, false}) {
    for (const auto& [t, formula] : options) {
      Constraint f = formula;
      if (forced) {
        for (TransitionId r : m.rivals(t)) f = f && !m.guard_full(r);
      } else if (m.rivals(t).empty()) {
        continue;
      }
      if (auto input = sat_model(m.vars(), inputs, context, f, solve)) return RptMove{t, *input, *j, forced};
    }
  }
  return std::nullopt;
}

RptResult rpt_online_step(const EfsmModel& m, const ReachabilitySet& rs, Session& session, const SolveOptions& solve) {
  RptResult result;
  const std::size_t cap = 4 * (static_cast<std::size_t>(rs.depth_reached()) + 1);
  while (session.status(rs.trap()) == TrapStatus::Uncovered) {
    if (result.steps >= cap) {
      result.outcome = RptOutcome::Stuck;
      return result;
    }
    const auto start = std::chrono::steady_clock::now();
    const auto move = rpt_plan_move(m, rs, session.state(), session.trap_values(), solve);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!move) {
      result.outcome = RptOutcome::Stuck;
      return result;
    }
    const auto step = session.execute(move->transition, move->input, StepOrigin::Rpt, ms);
    ++result.steps;
    if (!step.conformed()) {
      result.outcome = RptOutcome::Failed;
      return result;
    }
  }
  result.outcome = session.status(rs.trap()) == TrapStatus::Covered ? RptOutcome::Covered : RptOutcome::Stuck;
  return result;
}

}  // namespace xrpt
