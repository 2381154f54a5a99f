#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>

#include "models.hpp"
#include "xrpt/baselines/baselines.hpp"
#include "xrpt/error.hpp"
#include "xrpt/sut/simulated_sut.hpp"

namespace xrpt {
namespace {

using testing::tid;

EfsmModel fork_model() {
  ModelBuilder b;
  b.add_variable("p", VarKind::Input, 0, 9);
  b.add_location("a");
  b.set_initial("a");
  b.add_input("GO", {"p"});
  b.add_output("A");
  b.add_output("B");
  b.add_output("C");
  b.add_transition("ta", "a", "a", "GO", "A", "p <= 2", {});
  b.add_transition("tb", "a", "a", "GO", "B", "p >= 3 && p <= 5", {});
  b.add_transition("tc", "a", "a", "GO", "C", "p = 9", {});
  return b.build();
}

TEST(AntiAnt, EqualCountsGiveUniformChoice) {
  const EfsmModel m = fork_model();
  std::mt19937_64 rng(11);
  std::array<int, 3> hits{};
  for (int k = 0; k < 3000; ++k) {
    PheromoneMap ph(m.transitions().size());
    ++hits[anti_ant_step(m, m.initial_state(), ph, rng).first.index()];
  }
  // Chi-squared with 2 degrees of freedom, 0.999 quantile.
  double chi2 = 0;
  for (int h : hits) chi2 += std::pow(h - 1000.0, 2) / 1000.0;
  EXPECT_LT(chi2, 13.82);
}

TEST(AntiAnt, LeastVisitedWins) {
  const EfsmModel m = fork_model();
  std::mt19937_64 rng(3);
  PheromoneMap ph(m.transitions().size());
  for (int k = 0; k < 5; ++k) {
    ph.visit(tid(m, "ta"));
    ph.visit(tid(m, "tc"));
  }
  const Move mv = anti_ant_step(m, m.initial_state(), ph, rng);
  EXPECT_EQ(mv.first, tid(m, "tb"));
  EXPECT_EQ(ph.count(tid(m, "tb")), 1u);
  const std::int64_t p = mv.second.at(m.vars().require("p"));
  EXPECT_GE(p, 3);
  EXPECT_LE(p, 5);
}

TEST(AntiAnt, NeverPicksADisabledTransition) {
  const EfsmModel m = testing::bundled_model("m1_counter");
  std::mt19937_64 rng(5);
  PheromoneMap ph(m.transitions().size());
  EfsmState s = m.initial_state();
  // The walk ends in the dead state (l1, {25, 25, 25}).
  for (int k = 0; k < 300; ++k) {
    if (enabled_moves(m, s, rng).empty()) {
      EXPECT_EQ(s, testing::make_state(m, "l1", {{"x", 25}, {"y", 25}, {"z", 25}}));
      EXPECT_THROW(anti_ant_step(m, s, ph, rng), DeadEndError);
      return;
    }
    const Move mv = anti_ant_step(m, s, ph, rng);
    ASSERT_TRUE(is_enabled(m, s, mv.first, mv.second));
    s = apply_transition(m, s, mv.first, mv.second);
  }
}

TEST(RandomStep, UniformOverEnabledInputsAndTransitions) {
  const EfsmModel m = fork_model();
  std::mt19937_64 rng(21);
  std::array<int, 3> hits{};
  std::array<int, 10> values{};
  for (int k = 0; k < 3000; ++k) {
    const Move mv = random_step(m, m.initial_state(), rng);
    ++hits[mv.first.index()];
    ++values[mv.second.at(m.vars().require("p"))];
  }
  double chi2 = 0;
  for (int h : hits) chi2 += std::pow(h - 1000.0, 2) / 1000.0;
  EXPECT_LT(chi2, 13.82);
  EXPECT_GT(values[0], 0);
  EXPECT_GT(values[2], 0);
}

TEST(RandomStep, DeadEndIsReported) {
  ModelBuilder b;
  b.add_variable("x", VarKind::State, 0, 1);
  b.add_location("a");
  b.set_initial("a");
  b.add_input("GO");
  b.add_output("A");
  b.add_transition("t", "a", "a", "GO", "A", "x = 1", {});
  const EfsmModel m = b.build();
  std::mt19937_64 rng(1);
  EXPECT_THROW(random_step(m, m.initial_state(), rng), DeadEndError);
}

TEST(Baselines, RandomCoversAOneStepTrap) {
  const EfsmModel m = testing::bundled_model("m2_inres");
  const TestGoal& goal = m.goals().at("trap_t5");
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SimulatedSut sut(m, RivalPolicy::Uniform, seed);
    BaselineConfig config;
    config.seed = seed;
    const TestReport r = run_baseline(m, goal, Strategy::Random, nullptr, sut, config);
    EXPECT_EQ(r.verdict, Verdict::Finished);
    EXPECT_TRUE(r.all_covered());
  }
}

TEST(Baselines, AntiAntOnM2TrapT5NeverBeatsTheOptimum) {
  const EfsmModel m = testing::bundled_model("m2_inres");
  const TestGoal& goal = m.goals().at("trap_t5");
  double total = 0;
  std::size_t shortest = SIZE_MAX;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SimulatedSut sut(m, RivalPolicy::Uniform, seed);
    BaselineConfig config;
    config.seed = seed;
    const TestReport r = run_baseline(m, goal, Strategy::AntiAnt, nullptr, sut, config);
    ASSERT_TRUE(r.all_covered());
    total += static_cast<double>(r.path.size());
    shortest = std::min(shortest, r.path.size());
  }
  EXPECT_GE(shortest, 6u);
  EXPECT_GE(total / 100, 6.0);
}

TEST(Baselines, RptOnlyCoversM2TrapT8) {
  const EfsmModel m = testing::bundled_model("m2_inres");
  const TestGoal& goal = m.goals().at("trap_t8");
  ReachabilityOptions opts;
  opts.depth_bound = 2;
  const OfflineArtifacts offline = run_offline(m, goal, opts);
  SimulatedSut sut(m, RivalPolicy::Uniform, 1);
  BaselineConfig config;
  config.seed = 1;
  const TestReport r = run_baseline(m, goal, Strategy::RptOnly, &offline, sut, config);
  EXPECT_EQ(r.verdict, Verdict::Finished);
  EXPECT_TRUE(r.all_covered());
  EXPECT_GT(r.rpt_steps, 0u);
}

TEST(Strategy, NamesRoundTrip) {
  for (Strategy s : {Strategy::Xrpt, Strategy::RptOnly, Strategy::AntiAnt, Strategy::Random})
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("greedy"), Error);
}

}  // namespace
}  // namespace xrpt
