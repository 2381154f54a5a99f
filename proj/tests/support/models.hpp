#pragma once

#include <string>

#include "xrpt/efsm/io.hpp"
#include "xrpt/efsm/semantics.hpp"

namespace xrpt::testing {

inline EfsmModel bundled_model(const std::string& name) {
  return load_model(std::string(XRPT_MODEL_DIR) + "/" + name + ".json");
}

inline TransitionId tid(const EfsmModel& m, const char* id) { return *m.find_transition(id); }

inline Assignment make_input(const EfsmModel& m, const std::string& label,
                             std::map<std::string, std::int64_t> params = {}) {
  return input_assignment(m, Message{label, std::move(params)});
}

inline EfsmState make_state(const EfsmModel& m, const char* location, std::map<std::string, std::int64_t> values) {
  EfsmState s = m.initial_state();
  s.location = m.require_location(location);
  for (const auto& [name, v] : values) s.alpha.set(m.vars().require(name), v);
  return s;
}

}  // namespace xrpt::testing
