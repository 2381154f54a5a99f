#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xrpt/constraint/assignment.hpp"
#include "xrpt/constraint/constraint.hpp"
#include "xrpt/constraint/linear_expr.hpp"
#include "xrpt/constraint/var_table.hpp"
#include "xrpt/ids.hpp"

namespace xrpt {

/// Input or output label with the ordered variables it carries.
struct Label {
  std::string name;
  std::vector<VarId> params;
};

struct Transition {
  std::string id;
  LocationId source;
  LocationId target;
  LabelId input;
  LabelId output;
  /// Over state variables and the parameters of the input label.
  Constraint guard;
  /// Simultaneous assignment of state/output variables.
  Substitution update;
};

struct Trap {
  std::string name;
  VarId var;
  TransitionId transition;
  /// Over state, input and trap variables.
  Constraint predicate;
};

/// Named set of traps; the dependency order follows from the predicates.
struct TestGoal {
  std::string name;
  std::vector<TrapId> traps;
};

/// (location, state assignment) pair. Trap variables are tracked by the run
/// context, not here.
struct EfsmState {
  LocationId location;
  Assignment alpha;
  friend bool operator==(const EfsmState&, const EfsmState&) = default;
};

/// I/O EFSM (L, l0, X, D, I, O, G, U, T) plus its traps and goals. Built
/// through ModelBuilder or load_model and immutable afterwards.
class EfsmModel {
 public:
  const VarTable& vars() const { return vars_; }
  VarId label_selector() const { return label_selector_; }

  std::size_t location_count() const { return locations_.size(); }
  const std::string& location_name(LocationId l) const { return locations_.at(l.index()); }
  std::optional<LocationId> find_location(std::string_view name) const;
  /// Throws UnknownLocationError.
  LocationId require_location(std::string_view name) const;
  LocationId initial() const { return initial_; }
  const Assignment& initial_values() const { return initial_values_; }
  EfsmState initial_state() const { return EfsmState{initial_, initial_values_}; }

  const std::vector<Label>& inputs() const { return inputs_; }
  const std::vector<Label>& outputs() const { return outputs_; }
  std::optional<LabelId> find_input(std::string_view name) const;
  std::optional<LabelId> find_output(std::string_view name) const;

  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition& transition(TransitionId t) const { return transitions_.at(t.index()); }
  std::optional<TransitionId> find_transition(std::string_view id) const;

  const std::vector<Trap>& traps() const { return traps_; }
  const Trap& trap(TrapId t) const { return traps_.at(t.index()); }
  std::optional<TrapId> find_trap(std::string_view name) const;
  std::optional<TrapId> trap_of_var(VarId var) const;
  const std::map<std::string, TestGoal, std::less<>>& goals() const { return goals_; }

  std::vector<VarId> state_vars() const { return vars_.of_kind(VarKind::State); }
  std::vector<VarId> input_vars() const { return vars_.of_kind(VarKind::Input); }
  std::vector<VarId> trap_vars() const { return vars_.of_kind(VarKind::Trap); }

  /// Conjunction of all declared bounds (D).
  const Constraint& domain() const { return domain_; }
  /// Bounds of the state and input variables only.
  const Constraint& state_input_domain() const { return state_input_domain_; }

  /// Transitions leaving `l`, in declaration order. Throws UnknownLocationError.
  const std::vector<TransitionId>& out(LocationId l) const;
  /// guard(t) && iLabel = index(input(t)).
  const Constraint& guard_full(TransitionId t) const { return guard_full_.at(t.index()); }
  /// D[update(t)/X] for the updated state variables: keeps the successor in domain.
  const Constraint& post_domain(TransitionId t) const { return post_domain_.at(t.index()); }
  /// Transitions of the same source whose full guards overlap with t's under D.
  const std::vector<TransitionId>& rivals(TransitionId t) const { return rivals_.at(t.index()); }
  /// Rivals whose guard is implied by guard(t) under D.
  std::vector<TransitionId> perfect_rivals(TransitionId t) const;

  /// Traps whose variables occur in the predicate of `tr`.
  const std::vector<TrapId>& dependencies(TrapId tr) const { return dependencies_.at(tr.index()); }

 private:
  friend class ModelBuilder;

  VarTable vars_;
  VarId label_selector_;
  std::vector<std::string> locations_;
  LocationId initial_;
  Assignment initial_values_;
  std::vector<Label> inputs_;
  std::vector<Label> outputs_;
  std::vector<Transition> transitions_;
  std::vector<Trap> traps_;
  std::map<std::string, TestGoal, std::less<>> goals_;

  Constraint domain_;
  Constraint state_input_domain_;
  std::vector<std::vector<TransitionId>> out_;
  std::vector<Constraint> guard_full_;
  std::vector<Constraint> post_domain_;
  std::vector<std::vector<TransitionId>> rivals_;
  std::vector<std::vector<TrapId>> dependencies_;
};

/// Incremental construction with full validation in build(). Constraint and
/// expression text uses the syntax of parse_constraint; input label names are
/// visible as constants equal to their index.
class ModelBuilder {
 public:
  ModelBuilder();

  VarId add_variable(const std::string& name, VarKind kind, std::int64_t lower, std::int64_t upper);
  LocationId add_location(const std::string& name);
  void set_initial(const std::string& location);
  void set_initial_value(const std::string& var, std::int64_t value);
  LabelId add_input(const std::string& name, const std::vector<std::string>& params = {});
  LabelId add_output(const std::string& name, const std::vector<std::string>& params = {});
  TransitionId add_transition(const std::string& id, const std::string& source, const std::string& target,
                              const std::string& input, const std::string& output, const std::string& guard,
                              const std::vector<std::pair<std::string, std::string>>& update);
  /// Declares a trap variable named `name` together with its trap.
  TrapId add_trap(const std::string& name, const std::string& transition, const std::string& predicate);
  void add_goal(const std::string& name, const std::vector<std::string>& traps);
  /// Chain of traps, one per transition, each depending on all earlier ones.
  /// Trap variables are named `<goal>_<k>`.
  void add_sequence_goal(const std::string& name, const std::vector<std::string>& transitions);

  const VarTable& vars() const { return model_.vars_; }

  /// Validates and finalizes. Throws ModelError (or a subclass) on any
  /// violated invariant.
  EfsmModel build();

 private:
  struct PendingLabel {
    std::string name;
    std::vector<std::string> params;
  };
  struct PendingTransition {
    std::string id, source, target, input, output, guard;
    std::vector<std::pair<std::string, std::string>> update;
  };
  struct PendingTrap {
    std::string name, transition, predicate;
  };

  void finalize();
  void validate() const;

  EfsmModel model_;
  std::optional<std::string> initial_location_;
  std::vector<std::pair<std::string, std::int64_t>> initial_values_;
  std::vector<PendingLabel> inputs_;
  std::vector<PendingLabel> outputs_;
  std::vector<PendingTransition> transitions_;
  std::vector<PendingTrap> traps_;
  std::vector<std::pair<std::string, std::vector<std::string>>> goals_;
  std::vector<std::pair<std::string, std::vector<std::string>>> sequences_;
  bool built_ = false;
};

}  // namespace xrpt
