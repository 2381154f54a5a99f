#include "xrpt/sut/sut_port.hpp"

namespace xrpt {

std::optional<TransitionId> conforms(const EfsmModel& m, const EfsmState& s, const Assignment& input,
                                     const Message& observed) {
  std::optional<TransitionId> match;
  for (TransitionId t : enabled(m, s, input)) {
    if (output_message(m, s, t, input) != observed) continue;
    if (match) return std::nullopt;
    match = t;
  }
  return match;
}

}  // namespace xrpt
