#include "xrpt/baselines/baselines.hpp"

#include <algorithm>
#include <chrono>

#include "xrpt/error.hpp"
#include "xrpt/rpt/online.hpp"

namespace xrpt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::size_t uniform_index(std::size_t n, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool all_done(const TestGoal& goal, const Session& session) {
  return std::all_of(goal.traps.begin(), goal.traps.end(),
                     [&](TrapId t) { return session.status(t) == TrapStatus::Covered; });
}

}  // namespace

std::vector<Move> enabled_moves(const EfsmModel& m, const EfsmState& s, std::mt19937_64& rng) {
  const auto inputs = m.input_vars();
  SolveOptions options;
  options.rng = &rng;
  std::vector<Move> moves;
  for (TransitionId t : m.out(s.location)) {
    if (auto in = sat_model(m.vars(), inputs, s.alpha, m.guard_full(t) && m.post_domain(t), options))
      moves.emplace_back(t, std::move(*in));
  }
  return moves;
}

Move anti_ant_step(const EfsmModel& m, const EfsmState& s, PheromoneMap& ph, std::mt19937_64& rng) {
  std::vector<Move> moves = enabled_moves(m, s, rng);
  if (moves.empty()) throw DeadEndError("no enabled transition at " + m.location_name(s.location));
  std::uint64_t least = ph.count(moves.front().first);
  for (const Move& mv : moves) least = std::min(least, ph.count(mv.first));
  std::erase_if(moves, [&](const Move& mv) { return ph.count(mv.first) != least; });
  Move pick = std::move(moves[uniform_index(moves.size(), rng)]);
  ph.visit(pick.first);
  return pick;
}

Move random_step(const EfsmModel& m, const EfsmState& s, std::mt19937_64& rng) {
  std::vector<Move> moves = enabled_moves(m, s, rng);
  if (moves.empty()) throw DeadEndError("no enabled transition at " + m.location_name(s.location));
  return std::move(moves[uniform_index(moves.size(), rng)]);
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Xrpt: return "xrpt";
    case Strategy::RptOnly: return "rpt-only";
    case Strategy::AntiAnt: return "anti-ant";
    case Strategy::Random: return "random";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  for (Strategy s : {Strategy::Xrpt, Strategy::RptOnly, Strategy::AntiAnt, Strategy::Random})
    if (to_string(s) == text) return s;
  throw Error("unknown strategy '" + std::string(text) + "'");
}

TestReport run_baseline(const EfsmModel& m, const TestGoal& goal, Strategy strategy, const OfflineArtifacts* offline,
                        SutPort& sut, const BaselineConfig& config) {
  if (strategy == Strategy::Xrpt) throw Error("run_baseline does not run the xrpt strategy");
  if (strategy == Strategy::RptOnly && !offline) throw Error("rpt-only needs off-line artifacts");
  TestReport report;
  report.strategy = std::string(to_string(strategy));
  if (offline) report.offline_ms = offline->elapsed_ms;
  std::mt19937_64 rng(config.seed);
  PheromoneMap ph(m.transitions().size());
  Session session(m, sut, config.max_steps);
  const auto start = Clock::now();
  const StepOrigin origin = strategy == Strategy::Random ? StepOrigin::Random : StepOrigin::AntiAnt;
  try {
    while (!all_done(goal, session)) {
      if (strategy == Strategy::RptOnly) {
        const TrapPartition part = update_neighbourhood(m, goal, session.statuses());
        const Assignment context = session.state().alpha.merged(session.trap_values());
        std::optional<RptOutcome> outcome;
        for (TrapId tr : part.plus) {
          const ReachabilitySet& rs = offline->reachability(tr);
          if (!rs.satisfied_length(session.state().location, context)) continue;
          outcome = rpt_online_step(m, rs, session).outcome;
          break;
        }
        if (outcome == RptOutcome::Failed) {
          report.verdict = Verdict::Failed;
          break;
        }
        if (outcome == RptOutcome::Covered) continue;
      }
      const auto t0 = Clock::now();
      const Move mv = strategy == Strategy::Random ? random_step(m, session.state(), rng)
                                                   : anti_ant_step(m, session.state(), ph, rng);
      ++report.decisions;
      if (!session.execute(mv.first, mv.second, origin, elapsed_ms(t0)).conformed()) {
        report.verdict = Verdict::Failed;
        break;
      }
    }
  } catch (const StepBudgetExceeded& e) {
    report.verdict = Verdict::Error;
    report.error = e.what();
  } catch (const DeadEndError& e) {
    report.verdict = Verdict::Finished;
    report.error = e.what();
  }
  report.online_ms = elapsed_ms(start);
  summarize(report, m, goal, session);
  return report;
}

}  // namespace xrpt
