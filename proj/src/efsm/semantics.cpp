#include "xrpt/efsm/semantics.hpp"

#include "xrpt/error.hpp"

namespace xrpt {

Message input_message(const EfsmModel& m, const Assignment& input) {
  const std::int64_t idx = input.at(m.label_selector());
  if (idx < 0 || static_cast<std::size_t>(idx) >= m.inputs().size())
    throw UnknownLabelError("iLabel value " + std::to_string(idx) + " names no input label");
  const Label& label = m.inputs()[static_cast<std::size_t>(idx)];
  Message msg{label.name, {}};
  for (VarId p : label.params) msg.params.emplace(m.vars()[p].name, input.at(p));
  return msg;
}

Assignment input_assignment(const EfsmModel& m, const Message& msg) {
  const auto id = m.find_input(msg.label);
  if (!id) throw UnknownLabelError("unknown input label '" + msg.label + "'");
  Assignment a;
  a.set(m.label_selector(), static_cast<std::int64_t>(id->index()));
  for (VarId p : m.inputs()[id->index()].params) {
    const auto& d = m.vars()[p];
    auto it = msg.params.find(d.name);
    if (it == msg.params.end()) throw DomainViolationError("input '" + msg.label + "' lacks parameter '" + d.name + "'");
    if (it->second < d.lower || it->second > d.upper)
      throw DomainViolationError("parameter '" + d.name + "' is outside its domain");
    a.set(p, it->second);
  }
  return a;
}

Assignment update_values(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input) {
  const Assignment context = s.alpha.merged(input);
  Assignment out;
  for (const auto& [v, e] : m.transition(t).update.entries()) out.set(v, e.evaluate(context));
  return out;
}

namespace {

bool update_in_domain(const EfsmModel& m, const Assignment& values) {
  for (VarId v : values.variables()) {
    const auto& d = m.vars()[v];
    const std::int64_t x = values.at(v);
    if (x < d.lower || x > d.upper) return false;
  }
  return true;
}

}  // namespace

bool is_enabled(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input) {
  const Transition& tr = m.transition(t);
  if (tr.source != s.location) return false;
  if (input.at(m.label_selector()) != static_cast<std::int64_t>(tr.input.index())) return false;
  if (!evaluate(tr.guard, s.alpha.merged(input))) return false;
  return update_in_domain(m, update_values(m, s, t, input));
}

std::vector<TransitionId> enabled(const EfsmModel& m, const EfsmState& s, const Assignment& input) {
  std::vector<TransitionId> out;
  for (TransitionId t : m.out(s.location))
    if (is_enabled(m, s, t, input)) out.push_back(t);
  return out;
}

EfsmState apply_transition(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input) {
  const Transition& tr = m.transition(t);
  if (tr.source != s.location || input.at(m.label_selector()) != static_cast<std::int64_t>(tr.input.index()) ||
      !evaluate(tr.guard, s.alpha.merged(input)))
    throw NotEnabledError("transition '" + tr.id + "' is not enabled");
  const Assignment values = update_values(m, s, t, input);
  if (!update_in_domain(m, values))
    throw DomainViolationError("update of '" + tr.id + "' leaves the variable domains");
  EfsmState next{tr.target, s.alpha};
  for (VarId v : values.variables())
    if (m.vars()[v].kind == VarKind::State) next.alpha.set(v, values.at(v));
  return next;
}

Message output_message(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input) {
  const Transition& tr = m.transition(t);
  const Label& label = m.outputs()[tr.output.index()];
  Message msg{label.name, {}};
  if (label.params.empty()) return msg;
  const Assignment values = update_values(m, s, t, input);
  for (VarId p : label.params) msg.params.emplace(m.vars()[p].name, values.at(p));
  return msg;
}

bool trap_covered_by(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input, TrapId tr,
                     const Assignment& trap_values) {
  const Trap& trap = m.trap(tr);
  if (trap.transition != t) return false;
  return evaluate(trap.predicate, s.alpha.merged(input).merged(trap_values));
}

}  // namespace xrpt
