#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xrpt/sut/sut_port.hpp"

namespace xrpt {

enum class TrapStatus { Uncovered, Covered, Discarded };
std::string_view to_string(TrapStatus s);

/// Which strategy produced a step.
enum class StepOrigin { Xrpt, Rpt, AntiAnt, Random };
std::string_view to_string(StepOrigin o);

struct ExecutedStep {
  TransitionId transition;
  Message input;
  Message output;
  StepOrigin origin = StepOrigin::Xrpt;
  double decision_ms = 0;
  std::vector<TrapId> covered;
};

struct Nonconformance {
  EfsmState state;
  Message input;
  Message observed;
  TransitionId intended;
};

/// Tester-side view of one test run: the simulated model state, trap
/// statuses and values, and the executed path. Owns no SUT.
class Session {
 public:
  Session(const EfsmModel& m, SutPort& sut, std::size_t max_steps = 10'000);

  const EfsmModel& model() const { return m_; }
  const EfsmState& state() const { return state_; }
  /// Current 0/1 value of every trap variable.
  const Assignment& trap_values() const { return trap_values_; }
  TrapStatus status(TrapId t) const { return status_.at(t.index()); }
  const std::vector<TrapStatus>& statuses() const { return status_; }
  void set_discarded(TrapId t);
  /// Discarded traps become uncovered again.
  void restore_discarded();

  /// Resets the SUT and the simulated state; trap statuses are kept.
  void reset();

  struct StepResult {
    std::optional<TransitionId> actual;
    std::vector<TrapId> covered;
    bool conformed() const { return actual.has_value(); }
  };
  /// Sends the input for `intended`, checks the observed output and
  /// simulates the move. On nonconformance the session is marked failed and
  /// nothing else changes. Throws StepBudgetExceeded once max_steps steps
  /// have been executed.
  StepResult execute(TransitionId intended, const Assignment& input, StepOrigin origin, double decision_ms = 0);

  const std::vector<ExecutedStep>& path() const { return path_; }
  const std::optional<Nonconformance>& failure() const { return failure_; }
  std::size_t max_steps() const { return max_steps_; }

 private:
  const EfsmModel& m_;
  SutPort& sut_;
  std::size_t max_steps_;
  EfsmState state_;
  Assignment trap_values_;
  std::vector<TrapStatus> status_;
  std::vector<ExecutedStep> path_;
  std::optional<Nonconformance> failure_;
};

}  // namespace xrpt
