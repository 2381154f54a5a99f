#include "xrpt/efsm/model.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "xrpt/constraint/parser.hpp"
#include "xrpt/constraint/solver.hpp"
#include "xrpt/error.hpp"

namespace xrpt {

namespace {

template <class T, class Pred>
std::optional<std::size_t> index_where(const std::vector<T>& items, Pred pred) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (pred(items[i])) return i;
  return std::nullopt;
}

}  // namespace

std::optional<LocationId> EfsmModel::find_location(std::string_view name) const {
  if (auto i = index_where(locations_, [&](const std::string& l) { return l == name; })) return LocationId{*i};
  return std::nullopt;
}

LocationId EfsmModel::require_location(std::string_view name) const {
  if (auto l = find_location(name)) return *l;
  throw UnknownLocationError("unknown location '" + std::string(name) + "'");
}

std::optional<LabelId> EfsmModel::find_input(std::string_view name) const {
  if (auto i = index_where(inputs_, [&](const Label& l) { return l.name == name; })) return LabelId{*i};
  return std::nullopt;
}

std::optional<LabelId> EfsmModel::find_output(std::string_view name) const {
  if (auto i = index_where(outputs_, [&](const Label& l) { return l.name == name; })) return LabelId{*i};
  return std::nullopt;
}

std::optional<TransitionId> EfsmModel::find_transition(std::string_view id) const {
  if (auto i = index_where(transitions_, [&](const Transition& t) { return t.id == id; })) return TransitionId{*i};
  return std::nullopt;
}

std::optional<TrapId> EfsmModel::find_trap(std::string_view name) const {
  if (auto i = index_where(traps_, [&](const Trap& t) { return t.name == name; })) return TrapId{*i};
  return std::nullopt;
}

std::optional<TrapId> EfsmModel::trap_of_var(VarId var) const {
  if (auto i = index_where(traps_, [&](const Trap& t) { return t.var == var; })) return TrapId{*i};
  return std::nullopt;
}

const std::vector<TransitionId>& EfsmModel::out(LocationId l) const {
  if (!l.valid() || l.index() >= out_.size())
    throw UnknownLocationError("unknown location #" + std::to_string(l.value));
  return out_[l.index()];
}

std::vector<TransitionId> EfsmModel::perfect_rivals(TransitionId t) const {
  std::vector<TransitionId> out;
  for (TransitionId r : rivals(t))
    if (is_weaker_or_equal(vars_, guard_full(r), guard_full(t), state_input_domain_)) out.push_back(r);
  return out;
}

ModelBuilder::ModelBuilder() = default;

VarId ModelBuilder::add_variable(const std::string& name, VarKind kind, std::int64_t lower, std::int64_t upper) {
  if (name == "iLabel") throw ModelError("'iLabel' is reserved for the input label selector");
  return model_.vars_.add(VarDecl{name, kind, lower, upper});
}

LocationId ModelBuilder::add_location(const std::string& name) {
  if (name.empty()) throw ModelError("location with empty name");
  if (model_.find_location(name)) throw ModelError("duplicate location '" + name + "'");
  model_.locations_.push_back(name);
  return LocationId{model_.locations_.size() - 1};
}

void ModelBuilder::set_initial(const std::string& location) { initial_location_ = location; }

void ModelBuilder::set_initial_value(const std::string& var, std::int64_t value) {
  initial_values_.emplace_back(var, value);
}

LabelId ModelBuilder::add_input(const std::string& name, const std::vector<std::string>& params) {
  inputs_.push_back(PendingLabel{name, params});
  return LabelId{inputs_.size() - 1};
}

LabelId ModelBuilder::add_output(const std::string& name, const std::vector<std::string>& params) {
  outputs_.push_back(PendingLabel{name, params});
  return LabelId{outputs_.size() - 1};
}

TransitionId ModelBuilder::add_transition(const std::string& id, const std::string& source, const std::string& target,
                                          const std::string& input, const std::string& output,
                                          const std::string& guard,
                                          const std::vector<std::pair<std::string, std::string>>& update) {
  transitions_.push_back(PendingTransition{id, source, target, input, output, guard, update});
  return TransitionId{transitions_.size() - 1};
}

TrapId ModelBuilder::add_trap(const std::string& name, const std::string& transition, const std::string& predicate) {
  traps_.push_back(PendingTrap{name, transition, predicate});
  return TrapId{traps_.size() - 1};
}

void ModelBuilder::add_goal(const std::string& name, const std::vector<std::string>& traps) {
  goals_.emplace_back(name, traps);
}

void ModelBuilder::add_sequence_goal(const std::string& name, const std::vector<std::string>& transitions) {
  sequences_.emplace_back(name, transitions);
}

EfsmModel ModelBuilder::build() {
  if (built_) throw ModelError("ModelBuilder::build called twice");
  built_ = true;
  EfsmModel& m = model_;
  VarTable& vars = m.vars_;

  auto resolve_label = [&](const PendingLabel& p, VarKind kind, std::vector<Label>& out) {
    if (std::any_of(out.begin(), out.end(), [&](const Label& l) { return l.name == p.name; }))
      throw ModelError("duplicate label '" + p.name + "'");
    Label label{p.name, {}};
    for (const auto& param : p.params) {
      const auto v = vars.find(param);
      if (!v || vars[*v].kind != kind)
        throw ModelError("parameter '" + param + "' of label '" + p.name + "' must be an " +
                         std::string(to_string(kind)) + " variable");
      label.params.push_back(*v);
    }
    out.push_back(std::move(label));
  };
  if (inputs_.empty()) throw ModelError("model declares no input labels");
  for (const auto& p : inputs_) resolve_label(p, VarKind::Input, m.inputs_);
  for (const auto& p : outputs_) resolve_label(p, VarKind::Output, m.outputs_);

  m.label_selector_ =
      vars.add(VarDecl{"iLabel", VarKind::Input, 0, static_cast<std::int64_t>(m.inputs_.size()) - 1});
  vars.set_label_selector(m.label_selector_);

  SymbolConstants symbols;
  for (std::size_t i = 0; i < m.inputs_.size(); ++i) symbols.emplace(m.inputs_[i].name, static_cast<std::int64_t>(i));

  for (const auto& p : transitions_) {
    if (m.find_transition(p.id)) throw ModelError("duplicate transition '" + p.id + "'");
    Transition t;
    t.id = p.id;
    t.source = m.require_location(p.source);
    t.target = m.require_location(p.target);
    const auto in = m.find_input(p.input);
    if (!in) throw ModelError("transition '" + p.id + "' uses unknown input label '" + p.input + "'");
    const auto out = m.find_output(p.output);
    if (!out) throw ModelError("transition '" + p.id + "' uses unknown output label '" + p.output + "'");
    t.input = *in;
    t.output = *out;
    t.guard = p.guard.empty() ? Constraint::truth() : parse_constraint(p.guard, vars, &symbols);
    for (const auto& [lhs, rhs] : p.update) {
      const auto v = vars.find(lhs);
      if (!v) throw ModelError("transition '" + p.id + "' updates unknown variable '" + lhs + "'");
      if (t.update.find(*v)) throw ModelError("transition '" + p.id + "' updates '" + lhs + "' twice");
      t.update.assign(*v, parse_linear_expr(rhs, vars, &symbols));
    }
    m.transitions_.push_back(std::move(t));
  }

  auto declare_trap = [&](const std::string& name, TransitionId t) {
    if (m.find_trap(name)) throw ModelError("duplicate trap '" + name + "'");
    VarId var;
    if (auto existing = vars.find(name)) {
      if (vars[*existing].kind != VarKind::Trap) throw ModelError("trap '" + name + "' clashes with a variable");
      var = *existing;
    } else {
      var = vars.add(VarDecl{name, VarKind::Trap, 0, 1});
    }
    m.traps_.push_back(Trap{name, var, t, Constraint::truth()});
    return TrapId{m.traps_.size() - 1};
  };

  // Trap variables must all exist before predicates can be parsed.
  std::vector<std::pair<TrapId, std::string>> predicate_texts;
  for (const auto& p : traps_) {
    const auto t = m.find_transition(p.transition);
    if (!t) throw ModelError("trap '" + p.name + "' refers to unknown transition '" + p.transition + "'");
    predicate_texts.emplace_back(declare_trap(p.name, *t), p.predicate);
  }
  for (const auto& [goal, sequence] : sequences_) {
    if (sequence.empty()) throw ModelError("sequence goal '" + goal + "' is empty");
    TestGoal g{goal, {}};
    std::vector<Constraint> previous;
    for (std::size_t k = 0; k < sequence.size(); ++k) {
      const auto t = m.find_transition(sequence[k]);
      if (!t) throw ModelError("goal '" + goal + "' refers to unknown transition '" + sequence[k] + "'");
      const TrapId id = declare_trap(goal + "_" + std::to_string(k + 1), *t);
      m.traps_[id.index()].predicate = Constraint::conjunction(previous);
      previous.push_back(
          Constraint::compare(LinearExpr::variable(m.traps_[id.index()].var), Relation::Eq, LinearExpr::constant(1)));
      g.traps.push_back(id);
    }
    if (!m.goals_.emplace(goal, std::move(g)).second) throw ModelError("duplicate goal '" + goal + "'");
  }
  for (const auto& [id, text] : predicate_texts)
    m.traps_[id.index()].predicate = text.empty() ? Constraint::truth() : parse_constraint(text, vars, &symbols);

  for (const auto& [goal, names] : goals_) {
    TestGoal g{goal, {}};
    for (const auto& n : names) {
      const auto tr = m.find_trap(n);
      if (!tr) throw ModelError("goal '" + goal + "' refers to unknown trap '" + n + "'");
      g.traps.push_back(*tr);
    }
    if (!m.goals_.emplace(goal, std::move(g)).second) throw ModelError("duplicate goal '" + goal + "'");
  }

  if (m.locations_.empty()) throw ModelError("model declares no locations");
  m.initial_ = initial_location_ ? m.require_location(*initial_location_) : LocationId{std::size_t{0}};
  for (VarId v : vars.of_kind(VarKind::State)) m.initial_values_.set(v, vars[v].lower);
  for (const auto& [name, value] : initial_values_) {
    const auto v = vars.find(name);
    if (!v || vars[*v].kind != VarKind::State) throw ModelError("initial value for non-state variable '" + name + "'");
    if (value < vars[*v].lower || value > vars[*v].upper)
      throw ModelError("initial value of '" + name + "' is outside its domain");
    m.initial_values_.set(*v, value);
  }

  finalize();
  validate();
  return std::move(model_);
}

void ModelBuilder::finalize() {
  EfsmModel& m = model_;
  const VarTable& vars = m.vars_;
  m.domain_ = domain_constraint(vars);
  std::vector<VarId> si = vars.of_kind(VarKind::State);
  for (VarId v : vars.of_kind(VarKind::Input)) si.push_back(v);
  m.state_input_domain_ = domain_constraint(vars, si);

  m.out_.assign(m.locations_.size(), {});
  for (std::size_t i = 0; i < m.transitions_.size(); ++i) {
    const Transition& t = m.transitions_[i];
    m.out_[t.source.index()].emplace_back(i);
    m.guard_full_.push_back(
        t.guard && Constraint::compare(LinearExpr::variable(m.label_selector_), Relation::Eq,
                                       LinearExpr::constant(static_cast<std::int64_t>(t.input.index()))));
    std::vector<Constraint> post;
    for (const auto& [v, e] : t.update.entries()) {
      if (vars[v].kind != VarKind::State) continue;
      post.push_back(Constraint::compare(e, Relation::Ge, LinearExpr::constant(vars[v].lower)));
      post.push_back(Constraint::compare(e, Relation::Le, LinearExpr::constant(vars[v].upper)));
    }
    m.post_domain_.push_back(Constraint::conjunction(std::move(post)));
  }

  m.rivals_.assign(m.transitions_.size(), {});
  for (std::size_t i = 0; i < m.transitions_.size(); ++i) {
    for (TransitionId j : m.out_[m.transitions_[i].source.index()]) {
      if (j.index() == i) continue;
      if (satisfiable(vars, m.guard_full_[i] && m.guard_full_[j.index()])) m.rivals_[i].push_back(j);
    }
  }

  m.dependencies_.assign(m.traps_.size(), {});
  for (std::size_t i = 0; i < m.traps_.size(); ++i)
    for (VarId v : m.traps_[i].predicate.free_variables())
      if (vars[v].kind == VarKind::Trap)
        if (auto dep = m.trap_of_var(v)) m.dependencies_[i].push_back(*dep);
}

void ModelBuilder::validate() const {
  const EfsmModel& m = model_;
  const VarTable& vars = m.vars_;

  for (const Transition& t : m.transitions_) {
    const Label& in = m.inputs_[t.input.index()];
    auto is_param = [&](VarId v) {
      return v == m.label_selector_ || std::find(in.params.begin(), in.params.end(), v) != in.params.end();
    };
    for (VarId v : t.guard.free_variables()) {
      const auto kind = vars[v].kind;
      if (kind == VarKind::State || (kind == VarKind::Input && is_param(v))) continue;
      throw ModelError("guard of '" + t.id + "' uses '" + vars[v].name + "', which is not a state variable or " +
                       "parameter of input '" + in.name + "'");
    }
    for (const auto& [lhs, rhs] : t.update.entries()) {
      const auto kind = vars[lhs].kind;
      if (kind != VarKind::State && kind != VarKind::Output)
        throw ModelError("update of '" + t.id + "' assigns '" + vars[lhs].name + "', which is not a state or output variable");
      for (const Term& term : rhs.terms()) {
        const auto k = vars[term.var].kind;
        if (k == VarKind::State || (k == VarKind::Input && is_param(term.var))) continue;
        throw ModelError("update of '" + t.id + "' reads '" + vars[term.var].name + "'");
      }
    }
    for (VarId p : m.outputs_[t.output.index()].params)
      if (!t.update.find(p))
        throw ModelError("transition '" + t.id + "' does not assign output parameter '" + vars[p].name + "'");
  }

  for (std::size_t i = 0; i < m.transitions_.size(); ++i)
    for (TransitionId r : m.rivals_[i])
      if (m.transitions_[i].output == m.transitions_[r.index()].output)
        throw ModelError("rival transitions '" + m.transitions_[i].id + "' and '" + m.transitions_[r.index()].id +
                         "' share output label '" + m.outputs_[m.transitions_[i].output.index()].name +
                         "'; the model is not output-observable");

  std::vector<char> seen(m.locations_.size(), 0);
  std::deque<LocationId> queue{m.initial_};
  seen[m.initial_.index()] = 1;
  while (!queue.empty()) {
    const LocationId l = queue.front();
    queue.pop_front();
    for (TransitionId t : m.out_[l.index()]) {
      const LocationId n = m.transitions_[t.index()].target;
      if (!seen[n.index()]) {
        seen[n.index()] = 1;
        queue.push_back(n);
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ModelError("location '" + m.locations_[i] + "' is not reachable from the initial location");

  for (std::size_t i = 0; i < m.traps_.size(); ++i) {
    const Trap& tr = m.traps_[i];
    const Transition& t = m.transitions_[tr.transition.index()];
    const Label& in = m.inputs_[t.input.index()];
    for (VarId v : tr.predicate.free_variables()) {
      const auto kind = vars[v].kind;
      if (v == tr.var) throw ModelError("trap '" + tr.name + "' depends on itself");
      if (kind == VarKind::State || kind == VarKind::Trap) continue;
      if (kind == VarKind::Input &&
          (v == m.label_selector_ || std::find(in.params.begin(), in.params.end(), v) != in.params.end()))
        continue;
      throw ModelError("predicate of trap '" + tr.name + "' uses '" + vars[v].name + "'");
    }
    for (VarId v : tr.predicate.free_variables())
      if (vars[v].kind == VarKind::Trap && !m.trap_of_var(v))
        throw ModelError("predicate of trap '" + tr.name + "' uses '" + vars[v].name + "', which belongs to no trap");
  }

  // Dependency graph must be acyclic.
  std::vector<int> mark(m.traps_.size(), 0);
  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    if (mark[i] == 2) return;
    if (mark[i] == 1) throw ModelError("trap dependencies form a cycle through '" + m.traps_[i].name + "'");
    mark[i] = 1;
    for (TrapId d : m.dependencies_[i]) visit(d.index());
    mark[i] = 2;
  };
  for (std::size_t i = 0; i < m.traps_.size(); ++i) visit(i);
}

}  // namespace xrpt
