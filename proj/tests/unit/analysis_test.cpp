#include <gtest/gtest.h>

#include <random>

#include "models.hpp"
#include "xrpt/analysis/offline.hpp"

namespace xrpt {
namespace {

/// Floyd-Warshall over unit edges.
std::vector<std::vector<std::uint64_t>> floyd(const EfsmModel& m) {
  const std::size_t n = m.location_count();
  const std::uint64_t inf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::vector<std::uint64_t>> d(n, std::vector<std::uint64_t>(n, inf));
  for (std::size_t l = 0; l < n; ++l) d[l][l] = 0;
  for (const Transition& t : m.transitions())
    d[t.source.index()][t.target.index()] = std::min<std::uint64_t>(d[t.source.index()][t.target.index()], 1);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] != inf && d[k][j] != inf) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

EfsmModel random_graph(std::mt19937_64& rng, std::size_t n) {
  ModelBuilder b;
  b.add_variable("x", VarKind::State, 0, 1);
  b.add_input("GO");
  for (std::size_t l = 0; l < n; ++l) b.add_location("l" + std::to_string(l));
  b.set_initial("l0");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t l = 1; l < n; ++l) edges.emplace_back(std::uniform_int_distribution<std::size_t>(0, l - 1)(rng), l);
  for (std::size_t k = 0; k < n; ++k) edges.emplace_back(pick(rng), pick(rng));
  for (std::size_t k = 0; k < edges.size(); ++k) b.add_output("o" + std::to_string(k));
  for (std::size_t k = 0; k < edges.size(); ++k)
    b.add_transition("t" + std::to_string(k), "l" + std::to_string(edges[k].first), "l" + std::to_string(edges[k].second),
                     "GO", "o" + std::to_string(k), "true", {});
  return b.build();
}

TEST(Dist, MatchesFloydWarshallOnRandomGraphs) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 50; ++round) {
    const EfsmModel m = random_graph(rng, 2 + static_cast<std::size_t>(round % 9));
    const DistMatrix d = compute_dist(m);
    const auto oracle = floyd(m);
    for (std::size_t a = 0; a < m.location_count(); ++a)
      for (std::size_t b = 0; b < m.location_count(); ++b)
        ASSERT_EQ(d.at(LocationId{a}, LocationId{b}), oracle[a][b]) << "round " << round;
  }
}

TEST(Dist, M1ControlGraph) {
  const EfsmModel m = testing::bundled_model("m1_counter");
  const DistMatrix d = compute_dist(m);
  auto at = [&](const char* a, const char* b) { return d.at(m.require_location(a), m.require_location(b)); };
  EXPECT_EQ(at("l0", "l0"), 0u);
  EXPECT_EQ(at("l0", "l1"), 1u);
  EXPECT_EQ(at("l0", "l2"), 2u);
  EXPECT_EQ(at("l2", "l1"), 2u);
  EXPECT_EQ(at("l1", "l0"), 2u);
}

class M1Offline : public ::testing::Test {
 protected:
  void SetUp() override {
    ReachabilityOptions opts;
    opts.depth_bound = 2;
    offline = run_offline(m, goal, opts);
  }
  LocationId loc(const char* name) { return m.require_location(name); }

  EfsmModel m = testing::bundled_model("m1_counter");
  const TestGoal& goal = m.goals().at("trap_t3");
  TrapId tr = *m.find_trap("trap_t3");
  OfflineArtifacts offline;
};

TEST_F(M1Offline, NeighbourhoodsPointAtTheInformativeLocation) {
  const std::vector<LocationId> l1{loc("l1")};
  EXPECT_EQ(offline.neighbourhood.at(tr, loc("l0")), l1);
  EXPECT_EQ(offline.neighbourhood.at(tr, loc("l1")), l1);
  EXPECT_EQ(offline.neighbourhood.at(tr, loc("l2")), l1);
}

TEST_F(M1Offline, ArtifactsSerialize) {
  const nlohmann::json doc = offline.to_json(m);
  EXPECT_TRUE(doc.contains("dist"));
  EXPECT_TRUE(doc.contains("traps"));
  EXPECT_GE(offline.elapsed_ms, 0.0);
}

TEST(Partition, DependenciesGateThePlusSet) {
  const EfsmModel m = testing::bundled_model("m2_inres");
  const TestGoal& goal = m.goals().at("goal1");
  std::vector<TrapStatus> status(m.traps().size(), TrapStatus::Uncovered);
  TrapPartition p = update_neighbourhood(m, goal, status);
  ASSERT_EQ(p.plus.size(), 1u);
  EXPECT_EQ(p.plus.front(), goal.traps.front());
  EXPECT_EQ(p.minus.size(), goal.traps.size() - 1);
  status[goal.traps[0].index()] = TrapStatus::Covered;
  p = update_neighbourhood(m, goal, status);
  ASSERT_EQ(p.plus.size(), 1u);
  EXPECT_EQ(p.plus.front(), goal.traps[1]);
  status[goal.traps[1].index()] = TrapStatus::Discarded;
  p = update_neighbourhood(m, goal, status);
  EXPECT_TRUE(p.plus.empty());
  EXPECT_EQ(p.minus.size(), goal.traps.size() - 2);
}

}  // namespace
}  // namespace xrpt
