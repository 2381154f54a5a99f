#include <gtest/gtest.h>

#include "models.hpp"
#include "oracles.hpp"
#include "xrpt/constraint/solver.hpp"
#include "xrpt/error.hpp"

namespace xrpt {
namespace {

using testing::make_input;
using testing::make_state;
using testing::tid;

std::vector<std::string> ids(const EfsmModel& m, const std::vector<TransitionId>& ts) {
  std::vector<std::string> out;
  for (TransitionId t : ts) out.push_back(m.transition(t).id);
  return out;
}

class M1 : public ::testing::Test {
 protected:
  EfsmModel m = testing::bundled_model("m1_counter");
};

TEST_F(M1, OutgoingTransitions) {
  EXPECT_EQ(ids(m, m.out(m.require_location("l0"))), (std::vector<std::string>{"t1"}));
  EXPECT_EQ(ids(m, m.out(m.require_location("l1"))), (std::vector<std::string>{"t_x", "t_y", "t_z", "t_2"}));
  EXPECT_THROW(m.out(LocationId{std::size_t{7}}), UnknownLocationError);
}

TEST_F(M1, Rivals) {
  EXPECT_EQ(ids(m, m.rivals(tid(m, "t_y"))), (std::vector<std::string>{"t_x", "t_z"}));
  EXPECT_EQ(ids(m, m.rivals(tid(m, "t_2"))), (std::vector<std::string>{"t_z"}));
  EXPECT_TRUE(m.rivals(tid(m, "t1")).empty());
  EXPECT_TRUE(m.perfect_rivals(tid(m, "t_y")).empty());
}

TEST_F(M1, EnabledAndApply) {
  const EfsmState s0 = m.initial_state();
  const EfsmState s1 = apply_transition(m, s0, tid(m, "t1"), make_input(m, "START", {{"i", 10}}));
  EXPECT_EQ(s1, make_state(m, "l1", {{"x", 10}, {"y", 0}, {"z", 0}}));

  const auto en = enabled(m, s1, make_input(m, "COUNT", {{"i", 6}}));
  EXPECT_EQ(ids(m, en), (std::vector<std::string>{"t_z"}));
  // z - 1 would leave the domain.
  EXPECT_TRUE(enabled(m, s1, make_input(m, "COUNT", {{"i", 1}})).empty());
  EXPECT_THROW(apply_transition(m, s1, tid(m, "t_x"), make_input(m, "COUNT", {{"i", 1}})), DomainViolationError);
  EXPECT_THROW(apply_transition(m, s1, tid(m, "t_2"), make_input(m, "COUNT", {{"i", 10}})), NotEnabledError);
  EXPECT_TRUE(enabled(m, s1, make_input(m, "RESET")).empty());
}

TEST_F(M1, ReachesTheHandoffState) {
  EfsmState s = make_state(m, "l1", {{"x", 10}, {"y", 0}, {"z", 0}});
  const Assignment count_y = make_input(m, "COUNT", {{"i", 4}});
  const Assignment count_z = make_input(m, "COUNT", {{"i", 6}});
  s = apply_transition(m, s, tid(m, "t_z"), count_z);
  for (int k = 0; k < 6; ++k) {
    s = apply_transition(m, s, tid(m, "t_y"), count_y);
    s = apply_transition(m, s, tid(m, "t_x"), make_input(m, "COUNT", {{"i", 0}}));
    s = apply_transition(m, s, tid(m, "t_z"), count_z);
  }
  EXPECT_EQ(s, make_state(m, "l1", {{"x", 10}, {"y", 6}, {"z", 1}}));
  s = apply_transition(m, s, tid(m, "t_z"), count_z);
  EXPECT_EQ(s, make_state(m, "l1", {{"x", 10}, {"y", 6}, {"z", 2}}));
  EXPECT_EQ(ids(m, enabled(m, s, make_input(m, "COUNT", {{"i", 10}}))), (std::vector<std::string>{"t_z", "t_2"}));
}

TEST_F(M1, MessagesAndTraps) {
  const Assignment in = make_input(m, "START", {{"i", 10}});
  EXPECT_EQ(input_message(m, in), (Message{"START", {{"i", 10}}}));
  EXPECT_EQ(output_message(m, m.initial_state(), tid(m, "t1"), in), (Message{"T0", {}}));
  EXPECT_THROW(make_input(m, "STOP"), UnknownLabelError);
  EXPECT_THROW(make_input(m, "START"), DomainViolationError);
  EXPECT_THROW(make_input(m, "START", {{"i", 26}}), DomainViolationError);

  const TrapId tr = *m.find_trap("trap_t3");
  const EfsmState s2 = make_state(m, "l2", {{"x", 10}, {"y", 6}, {"z", 2}});
  const Assignment reset = make_input(m, "RESET");
  EXPECT_TRUE(trap_covered_by(m, s2, tid(m, "t_3"), reset, tr, {}));
  EXPECT_FALSE(trap_covered_by(m, s2, tid(m, "t_2"), reset, tr, {}));
}

TEST_F(M1, JsonRoundTrip) {
  const EfsmModel again = parse_model(to_json(m));
  ASSERT_EQ(again.transitions().size(), m.transitions().size());
  for (std::size_t k = 0; k < m.transitions().size(); ++k) {
    const TransitionId t{k};
    EXPECT_EQ(to_string(again.transition(t).guard, again.vars()), to_string(m.transition(t).guard, m.vars()));
    EXPECT_EQ(again.transition(t).source, m.transition(t).source);
    EXPECT_EQ(again.transition(t).target, m.transition(t).target);
    EXPECT_EQ(again.rivals(t), m.rivals(t));
  }
  EXPECT_EQ(to_json(again), to_json(m));
}

TEST(M2, GoalOneSequenceCoversTrapsInOrder) {
  const EfsmModel m = testing::bundled_model("m2_inres");
  const TestGoal& goal = m.goals().at("goal1");
  ASSERT_EQ(goal.traps.size(), 8u);
  const std::vector<std::pair<const char*, Message>> path = {
      {"t0", {"ICONreq", {}}}, {"t1", {"CC", {}}},          {"t4", {"IDATreq", {}}}, {"t7", {"AK", {{"num", 1}}}},
      {"t6", {"AK", {{"num", 0}}}}, {"t4", {"IDATreq", {}}}, {"t5", {"AK", {{"num", 1}}}}, {"t4", {"IDATreq", {}}}};
  EfsmState s = m.initial_state();
  Assignment traps;
  for (VarId v : m.trap_vars()) traps.set(v, 0);
  for (std::size_t k = 0; k < path.size(); ++k) {
    const auto& [id, msg] = path[k];
    const Assignment in = input_assignment(m, msg);
    const auto en = enabled(m, s, in);
    ASSERT_EQ(ids(m, en), std::vector<std::string>{id}) << "step " << k;
    for (std::size_t j = k; j < goal.traps.size(); ++j)
      EXPECT_EQ(trap_covered_by(m, s, en[0], in, goal.traps[j], traps), j == k) << "step " << k << " trap " << j;
    traps.set(m.trap(goal.traps[k]).var, 1);
    s = apply_transition(m, s, en[0], in);
  }
}

TEST(M2, DependenciesFormAChain) {
  const EfsmModel m = testing::bundled_model("m2_inres");
  const TestGoal& goal = m.goals().at("goal6");
  for (std::size_t k = 0; k < goal.traps.size(); ++k) EXPECT_EQ(m.dependencies(goal.traps[k]).size(), k);
}

ModelBuilder tiny() {
  ModelBuilder b;
  b.add_variable("x", VarKind::State, 0, 5);
  b.add_variable("p", VarKind::Input, 0, 5);
  b.add_variable("q", VarKind::Input, 0, 5);
  b.add_location("a");
  b.add_location("b");
  b.add_input("IN", {"p"});
  b.add_input("OTHER", {"q"});
  b.add_output("O1");
  b.add_output("O2");
  return b;
}

TEST(Validation, RejectsRivalsSharingAnOutput) {
  ModelBuilder b = tiny();
  b.add_transition("t1", "a", "b", "IN", "O1", "p <= 3", {});
  b.add_transition("t2", "a", "a", "IN", "O1", "p >= 3", {});
  EXPECT_THROW(b.build(), ModelError);
}

TEST(Validation, AcceptsDisjointGuardsSharingAnOutput) {
  ModelBuilder b = tiny();
  b.add_transition("t1", "a", "b", "IN", "O1", "p <= 2", {});
  b.add_transition("t2", "a", "a", "IN", "O1", "p >= 3", {});
  EXPECT_NO_THROW(b.build());
}

TEST(Validation, RejectsUnreachableLocation) {
  ModelBuilder b = tiny();
  b.add_transition("t1", "a", "a", "IN", "O1", "", {});
  EXPECT_THROW(b.build(), ModelError);
}

TEST(Validation, RejectsForeignParameterInGuard) {
  ModelBuilder b = tiny();
  b.add_transition("t1", "a", "b", "IN", "O1", "q = 1", {});
  EXPECT_THROW(b.build(), ModelError);
}

TEST(Validation, RejectsInputOnUpdateLeftHandSide) {
  ModelBuilder b = tiny();
  b.add_transition("t1", "a", "b", "IN", "O1", "", {{"p", "x"}});
  EXPECT_THROW(b.build(), ModelError);
}

TEST(Validation, RejectsCyclicTrapDependencies) {
  ModelBuilder b = tiny();
  b.add_transition("t1", "a", "b", "IN", "O1", "", {});
  b.add_trap("u", "t1", "v");
  b.add_trap("v", "t1", "u");
  EXPECT_THROW(b.build(), ModelError);
}

TEST(Validation, RejectsUnknownNames) {
  {
    ModelBuilder b = tiny();
    b.add_transition("t1", "a", "c", "IN", "O1", "", {});
    EXPECT_THROW(b.build(), UnknownLocationError);
  }
  {
    ModelBuilder b = tiny();
    b.add_transition("t1", "a", "b", "NOPE", "O1", "", {});
    EXPECT_THROW(b.build(), ModelError);
  }
  EXPECT_THROW(parse_model(nlohmann::json::parse(R"({"locations": ["a"]})")), ModelError);
}

TEST(PerfectRivals, TrueGuardIsWeakest) {
  ModelBuilder b = tiny();
  b.add_transition("t1", "a", "b", "IN", "O1", "x > 3", {});
  b.add_transition("t2", "a", "a", "IN", "O2", "true", {});
  const EfsmModel m = b.build();
  EXPECT_EQ(ids(m, m.perfect_rivals(tid(m, "t1"))), std::vector<std::string>{"t2"});
  EXPECT_TRUE(m.perfect_rivals(tid(m, "t2")).empty());
}

TEST(PerfectRivals, AgreeWithEnumeration) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 40; ++round) {
    ModelBuilder b = tiny();
    const std::vector<VarId> vs = {b.vars().require("x"), b.vars().require("p")};
    std::vector<std::string> guards;
    for (int k = 0; k < 3; ++k) guards.push_back(to_string(testing::random_formula(rng, vs, 1, 6), b.vars()));
    b.add_transition("t0", "a", "b", "IN", "O1", guards[0], {});
    b.add_transition("t1", "a", "b", "IN", "O2", guards[1], {});
    b.add_transition("t2", "a", "b", "OTHER", "O1", "", {});
    b.add_transition("t3", "b", "a", "IN", "O1", guards[2], {});
    EfsmModel m;
    try {
      m = b.build();
    } catch (const ModelError&) {
      continue;
    }
    const std::vector<VarId> all = {m.label_selector(), m.vars().require("p"), m.vars().require("q"),
                                    m.vars().require("x")};
    for (std::size_t i = 0; i < m.transitions().size(); ++i) {
      const TransitionId t{i};
      std::vector<std::string> expected_rivals, expected_perfect;
      for (TransitionId r : m.out(m.transition(t).source)) {
        if (r == t) continue;
        bool overlap = false, implied = true;
        testing::enumerate(m.vars(), all, {}, [&](const Assignment& a) {
          const bool gt = evaluate(m.guard_full(t), a), gr = evaluate(m.guard_full(r), a);
          overlap = overlap || (gt && gr);
          implied = implied && (!gt || gr);
          return true;
        });
        if (overlap) expected_rivals.push_back(m.transition(r).id);
        if (overlap && implied) expected_perfect.push_back(m.transition(r).id);
      }
      EXPECT_EQ(ids(m, m.rivals(t)), expected_rivals);
      EXPECT_EQ(ids(m, m.perfect_rivals(t)), expected_perfect);
    }
  }
}

}  // namespace
}  // namespace xrpt
