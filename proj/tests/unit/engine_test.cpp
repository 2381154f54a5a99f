#include <gtest/gtest.h>

#include <algorithm>

#include "models.hpp"
#include "xrpt/engine/engine.hpp"
#include "xrpt/error.hpp"
#include "xrpt/sut/simulated_sut.hpp"

namespace xrpt {
namespace {

using testing::make_state;
using testing::tid;

ReachabilityOptions depth(int d) {
  ReachabilityOptions o;
  o.depth_bound = d;
  return o;
}

const Decision* decision_at(const std::vector<Decision>& log, const EfsmState& s, Decision::Kind kind) {
  for (const Decision& d : log)
    if (d.kind == kind && d.state == s) return &d;
  return nullptr;
}

const Candidate* best_for(const std::vector<Candidate>& cs, TransitionId t) {
  const Candidate* best = nullptr;
  for (const Candidate& c : cs)
    if (c.transition == t && (!best || c.f < best->f)) best = &c;
  return best;
}

class M1Engine : public ::testing::Test {
 protected:
  void SetUp() override {
    offline = run_offline(m, goal, depth(2));
    SimulatedSut sut(m, RivalPolicy::Uniform, 7);
    Engine engine(m, offline, goal);
    report = engine.run(sut);
  }

  EfsmModel m = testing::bundled_model("m1_counter");
  const TestGoal& goal = m.goals().at("trap_t3");
  OfflineArtifacts offline;
  TestReport report;
  VarId i = m.vars().require("i");
};

TEST_F(M1Engine, InitialDecisionValues) {
  const Decision* d = decision_at(report.log, m.initial_state(), Decision::Kind::Candidates);
  ASSERT_NE(d, nullptr);
  ASSERT_FALSE(d->generated.empty());
  const Candidate& pre = d->generated.front();
  EXPECT_EQ(pre.transition, tid(m, "t1"));
  EXPECT_EQ(pre.input.at(i), 0);
  EXPECT_EQ(pre.viol, 18);
  EXPECT_EQ(pre.f, 325);
  ASSERT_TRUE(d->chosen);
  EXPECT_EQ(d->chosen->input.at(i), 10);
  EXPECT_EQ(d->chosen->viol, 8);
  EXPECT_EQ(d->chosen->f, 65);
}

TEST_F(M1Engine, SecondDecisionSelectsTz) {
  const Decision* d =
      decision_at(report.log, make_state(m, "l1", {{"x", 10}, {"y", 0}, {"z", 0}}), Decision::Kind::Candidates);
  ASSERT_NE(d, nullptr);
  std::vector<TransitionId> excluded;
  for (const auto& [tr, t] : d->excluded) excluded.push_back(t);
  EXPECT_NE(std::find(excluded.begin(), excluded.end(), tid(m, "t_x")), excluded.end());
  EXPECT_NE(std::find(excluded.begin(), excluded.end(), tid(m, "t_2")), excluded.end());
  const Candidate* fy = best_for(d->optimized, tid(m, "t_y"));
  const Candidate* fz = best_for(d->optimized, tid(m, "t_z"));
  ASSERT_NE(fy, nullptr);
  ASSERT_NE(fz, nullptr);
  EXPECT_EQ(fy->f, 65);
  EXPECT_EQ(fz->f, 50);
  ASSERT_TRUE(d->chosen);
  EXPECT_EQ(d->chosen->transition, tid(m, "t_z"));
}

TEST_F(M1Engine, HandoffAtGoldenState) {
  std::vector<EfsmState> handoffs;
  for (const Decision& d : report.log)
    if (d.kind == Decision::Kind::Handoff) handoffs.push_back(d.state);
  ASSERT_EQ(handoffs.size(), 1u);
  EXPECT_EQ(handoffs.front(), make_state(m, "l1", {{"x", 10}, {"y", 6}, {"z", 2}}));
}

TEST_F(M1Engine, EndToEndCoverage) {
  EXPECT_EQ(report.verdict, Verdict::Finished);
  EXPECT_TRUE(report.all_covered());
  EXPECT_EQ(report.exit_code(), 0);
  EXPECT_LE(report.path.size(), 30u);
  EXPECT_EQ(report.rpt_steps, 2u);
  ASSERT_GE(report.path.size(), 2u);
  EXPECT_EQ(report.path[report.path.size() - 1].origin, StepOrigin::Rpt);
  EXPECT_EQ(report.path[report.path.size() - 2].origin, StepOrigin::Rpt);
  EXPECT_EQ(report.strategy_steps + report.rpt_steps, report.path.size());
  EXPECT_LT(report.mean_decision_ms, 100.0);
}

TEST_F(M1Engine, ReportIsReproducible) {
  SimulatedSut sut(m, RivalPolicy::Uniform, 7);
  Engine engine(m, offline, goal);
  const TestReport again = engine.run(sut);
  EXPECT_EQ(again.path_ids, report.path_ids);
  EXPECT_EQ(again.verdict, report.verdict);
}

TEST(TabuElement, PrefersActualMoveUnlessRecorded) {
  const EfsmModel m = testing::bundled_model("m1_counter");
  const EfsmState s = m.initial_state();
  const TabuEntry actual = make_move(m, tid(m, "t1"), s.alpha, testing::make_input(m, "START", {{"i", 3}}));
  const TabuEntry best = make_move(m, tid(m, "t1"), s.alpha, testing::make_input(m, "START", {{"i", 10}}));
  EXPECT_EQ(make_tabu_element(actual, best, {}), actual);
  EXPECT_EQ(make_tabu_element(actual, best, {actual}), best);
}

TEST(TabuElement, NegationBlocksTheRecordedMove) {
  const EfsmModel m = testing::bundled_model("m1_counter");
  const TrapId tr = *m.find_trap("trap_t3");
  const EfsmState s = m.initial_state();
  const Assignment in = testing::make_input(m, "START", {{"i", 10}});
  TabuStore tabu;
  tabu.add(tr, s.location, make_move(m, tid(m, "t1"), s.alpha, in));
  const Constraint neg = tabu.negated_for(m, tr, s.location, tid(m, "t1"));
  EXPECT_FALSE(evaluate(neg, s.alpha.merged(in)));
  EXPECT_TRUE(evaluate(neg, s.alpha.merged(testing::make_input(m, "START", {{"i", 9}}))));
  EXPECT_TRUE(tabu.negated_for(m, tr, s.location, tid(m, "t_x")).is_true());
  tabu.clear(tr, s.location);
  EXPECT_TRUE(tabu.entries(tr, s.location).empty());
  EXPECT_TRUE(tabu.emptied(tr, s.location));
}

EfsmModel loop_model() {
  ModelBuilder b;
  b.add_variable("x", VarKind::State, 0, 3);
  b.add_location("a");
  b.add_location("b");
  b.set_initial("a");
  b.add_input("GO");
  b.add_input("JUMP");
  b.add_output("ok");
  b.add_output("never");
  b.add_transition("go", "a", "b", "GO", "ok", "true", {{"x", "0"}});
  b.add_transition("back", "b", "a", "GO", "ok", "true", {{"x", "0"}});
  b.add_transition("jump", "b", "b", "JUMP", "never", "x = 3", {});
  b.add_trap("trap_jump", "jump", "true");
  b.add_goal("trap_jump", {"trap_jump"});
  b.add_goal("empty", {});
  return b.build();
}

TEST(EngineEdges, UnreachableTrapIsDiscarded) {
  const EfsmModel m = loop_model();
  const TestGoal& goal = m.goals().at("trap_jump");
  const OfflineArtifacts offline = run_offline(m, goal, depth(2));
  SimulatedSut sut(m, RivalPolicy::First, 0);
  Engine engine(m, offline, goal);
  const TestReport r = engine.run(sut);
  EXPECT_EQ(r.verdict, Verdict::Finished);
  ASSERT_EQ(r.trap_status.size(), 1u);
  EXPECT_EQ(r.trap_status[0], TrapStatus::Discarded);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(EngineEdges, EmptyGoalGivesEmptyPath) {
  const EfsmModel m = loop_model();
  const TestGoal& goal = m.goals().at("empty");
  const OfflineArtifacts offline = run_offline(m, goal, depth(2));
  SimulatedSut sut(m, RivalPolicy::First, 0);
  Engine engine(m, offline, goal);
  const TestReport r = engine.run(sut);
  EXPECT_EQ(r.verdict, Verdict::Finished);
  EXPECT_TRUE(r.path.empty());
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(EngineEdges, ZeroCandidateBudgetIsRejected) {
  const EfsmModel m = loop_model();
  const TestGoal& goal = m.goals().at("empty");
  const OfflineArtifacts offline = run_offline(m, goal, depth(2));
  EngineConfig config;
  config.candidates = 0;
  EXPECT_THROW(Engine engine(m, offline, goal, config), xrpt::Error);
}

}  // namespace
}  // namespace xrpt
