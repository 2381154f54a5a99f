#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "xrpt/efsm/model.hpp"

namespace xrpt {

/// Model document:
///
///   {
///     "locations": ["l0", ...],
///     "initial": "l0",                      optional, default first location
///     "initial_values": {"x": 0},           optional, default lower bounds
///     "variables": [{"name": "x", "kind": "state", "lower": 0, "upper": 25}],
///     "input_labels": ["RESET", {"name": "START", "params": ["i"]}],
///     "output_labels": ["T0", {"name": "OUT", "params": ["o"]}],
///     "transitions": [{"id": "t1", "source": "l0", "target": "l1",
///                      "input": "START", "output": "T0",
///                      "guard": "i >= 0", "update": {"x": "i"}}],
///     "traps": [{"var": "trap_t3", "transition": "t3", "predicate": "true"}],
///     "goals": {"g1": {"traps": ["trap_t3"]},
///               "g2": {"sequence": ["t0", "t1"]}}
///   }
///
/// "guard", "update", "predicate", "initial", "initial_values", "traps" and
/// "goals" may be omitted. A transition may list "params"; they must equal the
/// parameters of its input label. Throws ModelError on malformed documents.
EfsmModel parse_model(const nlohmann::json& doc);
EfsmModel load_model(const std::filesystem::path& path);

/// Inverse of parse_model. Sequence goals come back as explicit trap lists.
nlohmann::json to_json(const EfsmModel& m);

}  // namespace xrpt
