#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "xrpt/analysis/offline.hpp"
#include "xrpt/engine/engine.hpp"

namespace xrpt {

/// Visit count per transition.
class PheromoneMap {
 public:
  explicit PheromoneMap(std::size_t transitions = 0) : counts_(transitions, 0) {}
  std::uint64_t count(TransitionId t) const { return counts_.at(t.index()); }
  void visit(TransitionId t) { ++counts_.at(t.index()); }

 private:
  std::vector<std::uint64_t> counts_;
};

using Move = std::pair<TransitionId, Assignment>;

/// Enabled transitions of out(s.location), each with a random input that
/// satisfies its guard and keeps the successor in domain.
std::vector<Move> enabled_moves(const EfsmModel& m, const EfsmState& s, std::mt19937_64& rng);

/// Least-visited enabled transition, ties uniformly at random; increments
/// its count. Throws DeadEndError when nothing is enabled.
Move anti_ant_step(const EfsmModel& m, const EfsmState& s, PheromoneMap& ph, std::mt19937_64& rng);
/// Uniformly random enabled transition. Throws DeadEndError.
Move random_step(const EfsmModel& m, const EfsmState& s, std::mt19937_64& rng);

enum class Strategy { Xrpt, RptOnly, AntiAnt, Random };
std::string_view to_string(Strategy s);
/// Throws Error on an unknown name.
Strategy parse_strategy(std::string_view text);

struct BaselineConfig {
  std::uint64_t seed = 0;
  std::size_t max_steps = 10'000;
};

/// Walks with the baseline strategy until every goal trap is covered.
/// RptOnly hands over to the RPT on-line algorithm whenever a reachability
/// layer holds and moves like anti-ant otherwise; `offline` is only read for
/// RptOnly.
TestReport run_baseline(const EfsmModel& m, const TestGoal& goal, Strategy strategy, const OfflineArtifacts* offline,
                        SutPort& sut, const BaselineConfig& config);

}  // namespace xrpt
