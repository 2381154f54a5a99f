#include <gtest/gtest.h>

#include "models.hpp"
#include "xrpt/constraint/parser.hpp"
#include "xrpt/constraint/solver.hpp"
#include "xrpt/rpt/online.hpp"
#include "xrpt/sut/simulated_sut.hpp"

namespace xrpt {
namespace {

using testing::make_state;
using testing::tid;

bool equivalent(const EfsmModel& m, const Constraint& a, const Constraint& b) {
  return is_weaker_or_equal(m.vars(), a, b, m.domain()) && is_weaker_or_equal(m.vars(), b, a, m.domain());
}

ReachabilityOptions depth(int d) {
  ReachabilityOptions o;
  o.depth_bound = d;
  return o;
}

Constraint on_state(const EfsmModel& m, const Constraint& c) {
  const auto inputs = m.input_vars();
  return project(c, inputs, m.vars());
}

class M1Reach : public ::testing::Test {
 protected:
  EfsmModel m = testing::bundled_model("m1_counter");
  TrapId tr = *m.find_trap("trap_t3");
  ReachabilitySet rs = generate_reachability(m, tr, depth(2));
  Constraint parse(const char* text) { return parse_constraint(text, m.vars()); }
  LocationId loc(const char* name) { return m.require_location(name); }
};

TEST_F(M1Reach, GoldenDepthTwo) {
  EXPECT_TRUE(rs.c_star(loc("l0")).is_false());
  EXPECT_FALSE(rs.length(loc("l0")));
  EXPECT_TRUE(equivalent(m, rs.c_star(loc("l1")), parse("x = 10 && y = 6 && z = 2")));
  EXPECT_EQ(rs.length(loc("l1")), 2);
  EXPECT_TRUE(equivalent(m, rs.c_star(loc("l2")), Constraint::truth()));
  EXPECT_EQ(rs.length(loc("l2")), 1);
  EXPECT_TRUE(rs.c_guard(tid(m, "t1")).is_false());
  EXPECT_TRUE(equivalent(m, on_state(m, rs.c_guard(tid(m, "t_y"))), parse("x = 11 && y = 5 && z = 2")));
  EXPECT_TRUE(equivalent(m, on_state(m, rs.c_guard(tid(m, "t_z"))), parse("x = 10 && y = 6 && z = 1")));
  EXPECT_TRUE(equivalent(m, on_state(m, rs.c_guard(tid(m, "t_2"))), parse("x = 10 && y = 6 && z = 2")));
  EXPECT_TRUE(equivalent(m, on_state(m, rs.c_guard(tid(m, "t_3"))), Constraint::truth()));
  EXPECT_EQ(rs.stop_reason(), StopReason::DepthBound);
}

TEST_F(M1Reach, JsonRoundTrip) {
  const ReachabilitySet again = ReachabilitySet::from_json(m, rs.to_json(m));
  EXPECT_EQ(again.to_json(m), rs.to_json(m));
}

TEST_F(M1Reach, DepthOneStopsAtTheTrapSource) {
  const ReachabilitySet one = generate_reachability(m, tr, depth(1));
  EXPECT_EQ(one.depth_reached(), 1);
  EXPECT_TRUE(one.c_star(loc("l1")).is_false());
  EXPECT_TRUE(equivalent(m, one.c_star(loc("l2")), Constraint::truth()));
}

TEST_F(M1Reach, InitialLocationTerminates) {
  const ReachabilitySet deep = generate_reachability(m, tr, depth(50));
  EXPECT_EQ(deep.stop_reason(), StopReason::InitialReached);
  EXPECT_EQ(deep.length(loc("l0")), 3);
  EXPECT_TRUE(equivalent(m, deep.c_star(loc("l0")), parse("y = 6 && z = 2")));
  EXPECT_FALSE(evaluate(deep.c_star(loc("l0")), m.initial_values()));
}

TEST_F(M1Reach, OnlineStepCoversFromHandoffState) {
  SimulatedSut sut(m, RivalPolicy::Uniform, 1);
  Session session(m, sut);
  const std::vector<std::pair<const char*, Message>> prefix = {
      {"t1", {"START", {{"i", 10}}}}, {"t_z", {"COUNT", {{"i", 6}}}}, {"t_z", {"COUNT", {{"i", 6}}}}};
  for (const auto& [id, msg] : prefix) {
    // Drive the SUT to (l1, {10, 0, 2}), then along y.
    ASSERT_TRUE(session.execute(tid(m, id), input_assignment(m, msg), StepOrigin::Xrpt).conformed());
  }
  for (int k = 0; k < 6; ++k) {
    ASSERT_TRUE(session.execute(tid(m, "t_y"), testing::make_input(m, "COUNT", {{"i", 4}}), StepOrigin::Xrpt).conformed());
    ASSERT_TRUE(session.execute(tid(m, "t_x"), testing::make_input(m, "COUNT", {{"i", 0}}), StepOrigin::Xrpt).conformed());
    ASSERT_TRUE(session.execute(tid(m, "t_z"), testing::make_input(m, "COUNT", {{"i", 6}}), StepOrigin::Xrpt).conformed());
  }
  ASSERT_EQ(session.state(), make_state(m, "l1", {{"x", 10}, {"y", 6}, {"z", 2}}));
  const auto plan = rpt_plan_move(m, rs, session.state(), session.trap_values());
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->transition, tid(m, "t_2"));
  EXPECT_EQ(plan->remaining, 2);
  EXPECT_GT(plan->input.at(m.vars().require("i")), 12);  // excludes the rival t_z
  const std::size_t before = session.path().size();
  const RptResult r = rpt_online_step(m, rs, session);
  EXPECT_EQ(r.outcome, RptOutcome::Covered);
  EXPECT_EQ(r.steps, 2u);
  ASSERT_EQ(session.path().size(), before + 2);
  EXPECT_EQ(session.path()[before].transition, tid(m, "t_2"));
  EXPECT_EQ(session.path()[before + 1].transition, tid(m, "t_3"));
  EXPECT_EQ(session.status(tr), TrapStatus::Covered);
}

TEST_F(M1Reach, OnlineStepFromL2IsOneStep) {
  const EfsmState s = make_state(m, "l2", {{"x", 3}, {"y", 4}, {"z", 5}});
  const auto plan = rpt_plan_move(m, rs, s, {});
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->transition, tid(m, "t_3"));
  EXPECT_EQ(plan->remaining, 1);
}

TEST_F(M1Reach, OnlineStepIsStuckOutsideTheConstraints) {
  SimulatedSut sut(m);
  Session session(m, sut);
  EXPECT_FALSE(rpt_plan_move(m, rs, session.state(), session.trap_values()));
  EXPECT_EQ(rpt_online_step(m, rs, session).outcome, RptOutcome::Stuck);
  EXPECT_TRUE(session.path().empty());
}

}  // namespace
}  // namespace xrpt
