#pragma once

#include "xrpt/efsm/semantics.hpp"

namespace xrpt {

/// Black-box system under test. send() is synchronous.
class SutPort {
 public:
  virtual ~SutPort() = default;
  /// Returns the SUT to its initial state.
  virtual void reset() = 0;
  /// Feeds one input and returns the observed output. An SUT with no enabled
  /// transition answers kNoResponse.
  virtual Message send(const Message& input) = 0;
  /// Output the tester expects for the next send(). Simulated SUTs may use it
  /// to resolve non-determinism against the tester; others ignore it.
  virtual void expect(const Message& /*output*/) {}
};

/// The unique transition enabled at (s, input) whose output label and emitted
/// parameters equal `observed`; nullopt when none matches.
std::optional<TransitionId> conforms(const EfsmModel& m, const EfsmState& s, const Assignment& input,
                                     const Message& observed);

}  // namespace xrpt
