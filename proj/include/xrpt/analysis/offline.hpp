#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "xrpt/rpt/reachability.hpp"
#include "xrpt/sut/session.hpp"

namespace xrpt {

/// Unit-weight all-pairs shortest paths over the control graph.
class DistMatrix {
 public:
  static constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

  DistMatrix() = default;
  explicit DistMatrix(std::size_t n) : n_(n), d_(n * n, kInfinity) {}

  std::size_t size() const { return n_; }
  std::uint32_t at(LocationId a, LocationId b) const { return d_.at(a.index() * n_ + b.index()); }
  void set(LocationId a, LocationId b, std::uint32_t v) { d_.at(a.index() * n_ + b.index()) = v; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> d_;
};

DistMatrix compute_dist(const EfsmModel& m);

/// L^C: per trap and location, the closest locations with informative
/// reachability constraints, ordered by distance then index.
class SearchNeighbourhood {
 public:
  const std::vector<LocationId>& at(TrapId tr, LocationId l) const { return sets_.at(tr.index()).at(l.index()); }

 private:
  friend SearchNeighbourhood compute_neighbourhoods(const EfsmModel&, const std::vector<std::optional<ReachabilitySet>>&,
                                                    const DistMatrix&);
  std::vector<std::vector<std::vector<LocationId>>> sets_;
};

/// A location qualifies for trap tr when C*_{l,tr} is neither FALSE nor
/// implied by the domain. When no location qualifies, locations with a
/// non-FALSE constraint are used instead. The first distance tier is taken,
/// plus the next tier when l itself qualifies. `reach` is indexed by trap;
/// traps without a set get empty neighbourhoods.
SearchNeighbourhood compute_neighbourhoods(const EfsmModel& m, const std::vector<std::optional<ReachabilitySet>>& reach,
                                           const DistMatrix& dist);

struct TrapPartition {
  /// Uncovered traps whose dependencies are all covered.
  std::vector<TrapId> plus;
  /// Remaining uncovered traps.
  std::vector<TrapId> minus;
};

/// Partition of the goal's uncovered traps from the current statuses.
TrapPartition update_neighbourhood(const EfsmModel& m, const TestGoal& goal, const std::vector<TrapStatus>& status);

/// Everything the on-line engine reads: reachability per trap, Dist, L^C.
struct OfflineArtifacts {
  std::vector<std::optional<ReachabilitySet>> reach;
  DistMatrix dist;
  SearchNeighbourhood neighbourhood;
  double elapsed_ms = 0;

  const ReachabilitySet& reachability(TrapId tr) const;
  nlohmann::json to_json(const EfsmModel& m) const;
};

/// Reachability for every trap of the goal, then Dist and L^C.
OfflineArtifacts run_offline(const EfsmModel& m, const TestGoal& goal, const ReachabilityOptions& options);

}  // namespace xrpt
