#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "xrpt/efsm/model.hpp"

namespace xrpt {

/// Label plus named parameter values, as exchanged with a SUT.
struct Message {
  std::string label;
  std::map<std::string, std::int64_t> params;
  friend bool operator==(const Message&, const Message&) = default;
};

/// Output label reported when the SUT has no enabled transition for an input.
inline constexpr const char* kNoResponse = "NO_RESPONSE";

/// Get_ILabel plus parameter extraction: the message for an input
/// assignment that binds iLabel and the label's parameters.
Message input_message(const EfsmModel& m, const Assignment& input);
/// Inverse of input_message. Throws UnknownLabelError for a label outside I,
/// DomainViolationError for a missing or out-of-range parameter.
Assignment input_assignment(const EfsmModel& m, const Message& msg);

/// Transitions of s.location whose label matches iLabel, whose guard holds
/// under s.alpha and the input, and whose update stays within D.
std::vector<TransitionId> enabled(const EfsmModel& m, const EfsmState& s, const Assignment& input);
bool is_enabled(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input);

/// Values of every variable assigned by update(t), read simultaneously from
/// the pre-state.
Assignment update_values(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input);

/// Throws NotEnabledError if t is not enabled; DomainViolationError if the
/// update leaves D.
EfsmState apply_transition(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input);

/// Output label of t with the emitted parameter values.
Message output_message(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input);

/// True iff t is the trap's transition and its predicate holds under the
/// pre-state, the input and the current trap values.
bool trap_covered_by(const EfsmModel& m, const EfsmState& s, TransitionId t, const Assignment& input, TrapId tr,
                     const Assignment& trap_values);

}  // namespace xrpt
