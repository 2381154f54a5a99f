#include "xrpt/sut/session.hpp"

#include "xrpt/error.hpp"

namespace xrpt {

std::string_view to_string(TrapStatus s) {
  switch (s) {
    case TrapStatus::Uncovered: return "uncovered";
    case TrapStatus::Covered: return "covered";
    case TrapStatus::Discarded: return "discarded";
  }
  return "?";
}

std::string_view to_string(StepOrigin o) {
  switch (o) {
    case StepOrigin::Xrpt: return "xrpt";
    case StepOrigin::Rpt: return "rpt";
    case StepOrigin::AntiAnt: return "anti-ant";
    case StepOrigin::Random: return "random";
  }
  return "?";
}

Session::Session(const EfsmModel& m, SutPort& sut, std::size_t max_steps)
    : m_(m), sut_(sut), max_steps_(max_steps), state_(m.initial_state()), status_(m.traps().size(), TrapStatus::Uncovered) {
  for (VarId v : m.trap_vars()) trap_values_.set(v, 0);
}

void Session::set_discarded(TrapId t) {
  if (status_.at(t.index()) == TrapStatus::Uncovered) status_[t.index()] = TrapStatus::Discarded;
}

void Session::restore_discarded() {
  for (auto& s : status_)
    if (s == TrapStatus::Discarded) s = TrapStatus::Uncovered;
}

void Session::reset() {
  sut_.reset();
  state_ = m_.initial_state();
}

Session::StepResult Session::execute(TransitionId intended, const Assignment& input, StepOrigin origin,
                                     double decision_ms) {
  if (failure_) throw Error("session already failed");
  if (path_.size() >= max_steps_) throw StepBudgetExceeded("step budget of " + std::to_string(max_steps_) + " exhausted");
  const Message msg = input_message(m_, input);
  sut_.expect(output_message(m_, state_, intended, input));
  const Message observed = sut_.send(msg);
  StepResult result;
  result.actual = conforms(m_, state_, input, observed);
  if (!result.actual) {
    failure_ = Nonconformance{state_, msg, observed, intended};
    return result;
  }
  for (std::size_t k = 0; k < status_.size(); ++k) {
    if (status_[k] != TrapStatus::Uncovered) continue;
    if (trap_covered_by(m_, state_, *result.actual, input, TrapId{k}, trap_values_)) result.covered.emplace_back(k);
  }
  for (TrapId t : result.covered) {
    status_[t.index()] = TrapStatus::Covered;
    trap_values_.set(m_.trap(t).var, 1);
  }
  state_ = apply_transition(m_, state_, *result.actual, input);
  path_.push_back(ExecutedStep{*result.actual, msg, observed, origin, decision_ms, result.covered});
  return result;
}

}  // namespace xrpt
