#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xrpt/constraint/normal_form.hpp"
#include "xrpt/constraint/solver.hpp"
#include "xrpt/efsm/model.hpp"

namespace xrpt {

enum class StopReason { Fixpoint, InitialReached, DepthBound };
std::string_view to_string(StopReason r);

struct ReachabilityOptions {
  /// Maximum path length considered (>= 1).
  int depth_bound = 2;
  ProjectionOptions projection;
  /// Stop as soon as the initial location receives a constraint.
  bool stop_at_initial = true;
  /// Drop new clauses already implied by the previous layer (one solver call
  /// per clause) so that fixpoints are detected semantically.
  bool semantic_subsumption = true;
  /// Solver nodes per subsumption check; a clause whose check runs out is kept.
  std::uint64_t subsumption_node_limit = 20'000;
};

/// Bounded backward reachability constraints for one trap. Constraints range
/// over state and trap variables; trap variables are never eliminated and
/// are read from the run context when a constraint is evaluated.
class ReachabilitySet {
 public:
  TrapId trap() const { return trap_; }
  int depth_bound() const { return depth_bound_; }
  /// Number of computed layers.
  int depth_reached() const { return static_cast<int>(layers_.size()); }
  StopReason stop_reason() const { return stop_; }

  /// States of `l` with a covering path of length <= j (1 <= j <= depth_reached).
  const Constraint& layer(int j, LocationId l) const { return layers_.at(static_cast<std::size_t>(j - 1)).at(l.index()); }
  /// Weakest constraint C*: the last layer.
  const Constraint& c_star(LocationId l) const { return layers_.back().at(l.index()); }
  /// L*: the first layer in which `l` has a constraint.
  std::optional<int> length(LocationId l) const;
  /// Guarding constraint C^g over state, input and trap variables.
  const Constraint& c_guard(TransitionId t) const { return guards_.at(t.index()); }
  /// Base constraint guard(t_i) && P_tr && D[update(t_i)/X] of the trap transition.
  const Constraint& base() const { return base_; }

  /// Smallest j whose layer holds at `l` under `context` (state and trap
  /// values), or nullopt.
  std::optional<int> satisfied_length(LocationId l, const Assignment& context) const;

  nlohmann::json to_json(const EfsmModel& m) const;
  /// Throws ModelError or ParseError on a malformed document.
  static ReachabilitySet from_json(const EfsmModel& m, const nlohmann::json& doc);

 private:
  friend ReachabilitySet generate_reachability(const EfsmModel&, TrapId, const ReachabilityOptions&);

  TrapId trap_;
  int depth_bound_ = 0;
  StopReason stop_ = StopReason::DepthBound;
  std::vector<std::vector<Constraint>> layers_;
  std::vector<Constraint> guards_;
  Constraint base_;
};

ReachabilitySet generate_reachability(const EfsmModel& m, TrapId tr, const ReachabilityOptions& options = {});

/// guard(t) && D[update(t)/X] && target[update(t)/X] over state and input variables.
Constraint backward_step(const EfsmModel& m, TransitionId t, const Constraint& target);

}  // namespace xrpt
