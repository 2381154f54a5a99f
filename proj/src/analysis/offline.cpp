#include "xrpt/analysis/offline.hpp"

#include <algorithm>
#include <chrono>
#include <deque>

#include "xrpt/constraint/solver.hpp"
#include "xrpt/error.hpp"

namespace xrpt {

DistMatrix compute_dist(const EfsmModel& m) {
  const std::size_t n = m.location_count();
  DistMatrix dist(n);
  for (std::size_t from = 0; from < n; ++from) {
    const LocationId a{from};
    dist.set(a, a, 0);
    std::deque<LocationId> queue{a};
    while (!queue.empty()) {
      const LocationId l = queue.front();
      queue.pop_front();
      for (TransitionId t : m.out(l)) {
        const LocationId next = m.transition(t).target;
        if (dist.at(a, next) != DistMatrix::kInfinity) continue;
        dist.set(a, next, dist.at(a, l) + 1);
        queue.push_back(next);
      }
    }
  }
  return dist;
}

SearchNeighbourhood compute_neighbourhoods(const EfsmModel& m, const std::vector<std::optional<ReachabilitySet>>& reach,
                                           const DistMatrix& dist) {
  const std::size_t n = m.location_count();
  SearchNeighbourhood nb;
  nb.sets_.assign(m.traps().size(), std::vector<std::vector<LocationId>>(n));
  for (std::size_t k = 0; k < m.traps().size() && k < reach.size(); ++k) {
    if (!reach[k]) continue;
    const ReachabilitySet& rs = *reach[k];
    std::vector<LocationId> informative, defined;
    for (std::size_t l = 0; l < n; ++l) {
      const Constraint& c = rs.c_star(LocationId{l});
      if (c.is_false()) continue;
      defined.emplace_back(l);
      if (!is_weaker_or_equal(m.vars(), c, Constraint::truth(), m.domain())) informative.emplace_back(l);
    }
    const std::vector<LocationId>& qualifying = informative.empty() ? defined : informative;
    for (std::size_t l = 0; l < n; ++l) {
      const LocationId from{l};
      std::vector<std::uint32_t> tiers;
      for (LocationId q : qualifying)
        if (dist.at(from, q) != DistMatrix::kInfinity) tiers.push_back(dist.at(from, q));
      std::sort(tiers.begin(), tiers.end());
      tiers.erase(std::unique(tiers.begin(), tiers.end()), tiers.end());
      if (tiers.empty()) continue;
      const std::size_t take = tiers.front() == 0 && tiers.size() > 1 ? 2 : 1;
      std::vector<LocationId>& out = nb.sets_[k][l];
      for (std::size_t tier = 0; tier < take; ++tier)
        for (LocationId q : qualifying)
          if (dist.at(from, q) == tiers[tier]) out.push_back(q);
    }
  }
  return nb;
}

TrapPartition update_neighbourhood(const EfsmModel& m, const TestGoal& goal, const std::vector<TrapStatus>& status) {
  TrapPartition p;
  for (TrapId tr : goal.traps) {
    if (status.at(tr.index()) != TrapStatus::Uncovered) continue;
    const auto& deps = m.dependencies(tr);
    const bool ready = std::all_of(deps.begin(), deps.end(),
                                   [&](TrapId d) { return status.at(d.index()) == TrapStatus::Covered; });
    (ready ? p.plus : p.minus).push_back(tr);
  }
  return p;
}

const ReachabilitySet& OfflineArtifacts::reachability(TrapId tr) const {
  if (tr.index() >= reach.size() || !reach[tr.index()]) throw Error("no reachability constraints for trap");
  return *reach[tr.index()];
}

nlohmann::json OfflineArtifacts::to_json(const EfsmModel& m) const {
  using nlohmann::json;
  json traps = json::array();
  for (std::size_t k = 0; k < reach.size(); ++k) {
    if (!reach[k]) continue;
    json rs = reach[k]->to_json(m);
    json lc = json::object();
    for (std::size_t l = 0; l < m.location_count(); ++l) {
      json names = json::array();
      for (LocationId q : neighbourhood.at(TrapId{k}, LocationId{l})) names.push_back(m.location_name(q));
      lc[m.location_name(LocationId{l})] = names;
    }
    rs["neighbourhood"] = lc;
    traps.push_back(rs);
  }
  json d = json::object();
  for (std::size_t a = 0; a < m.location_count(); ++a) {
    json row = json::object();
    for (std::size_t b = 0; b < m.location_count(); ++b) {
      const auto v = dist.at(LocationId{a}, LocationId{b});
      row[m.location_name(LocationId{b})] = v == DistMatrix::kInfinity ? json(nullptr) : json(v);
    }
    d[m.location_name(LocationId{a})] = row;
  }
  return json{{"traps", traps}, {"dist", d}, {"elapsed_ms", elapsed_ms}};
}

OfflineArtifacts run_offline(const EfsmModel& m, const TestGoal& goal, const ReachabilityOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  OfflineArtifacts a;
  a.reach.resize(m.traps().size());
  for (TrapId tr : goal.traps)
    if (!a.reach[tr.index()]) a.reach[tr.index()] = generate_reachability(m, tr, options);
  a.dist = compute_dist(m);
  a.neighbourhood = compute_neighbourhoods(m, a.reach, a.dist);
  a.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return a;
}

}  // namespace xrpt
