#include "xrpt/efsm/io.hpp"

#include <fstream>

#include "xrpt/error.hpp"

namespace xrpt {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ModelError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ModelError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::int64_t int_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_number_integer()) throw ModelError(where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ModelError(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const json& item : v) {
    if (!item.is_string()) throw ModelError(where + " must be an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::pair<std::string, std::vector<std::string>> label_entry(const json& v, const std::string& where) {
  if (v.is_string()) return {v.get<std::string>(), {}};
  std::vector<std::string> params;
  if (v.contains("params")) params = string_list(v.at("params"), where + ".params");
  return {string_field(v, "name", where), params};
}

std::string optional_text(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) return {};
  const json& v = obj.at(key);
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (!v.is_string()) throw ModelError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

json label_json(const Label& l, const VarTable& vars) {
  if (l.params.empty()) return l.name;
  json params = json::array();
  for (VarId p : l.params) params.push_back(vars[p].name);
  return json{{"name", l.name}, {"params", params}};
}

}  // namespace

EfsmModel parse_model(const json& doc) {
  if (!doc.is_object()) throw ModelError("model document must be an object");
  ModelBuilder b;

  for (const json& v : field(doc, "variables", "model")) {
    const std::string name = string_field(v, "name", "variable");
    const std::string where = "variable '" + name + "'";
    const auto kind = parse_var_kind(string_field(v, "kind", where));
    if (!kind) throw ModelError(where + ": unknown kind");
    b.add_variable(name, *kind, int_field(v, "lower", where), int_field(v, "upper", where));
  }
  for (const auto& l : string_list(field(doc, "locations", "model"), "locations")) b.add_location(l);
  if (doc.contains("initial")) b.set_initial(string_field(doc, "initial", "model"));
  if (doc.contains("initial_values")) {
    const json& iv = doc.at("initial_values");
    if (!iv.is_object()) throw ModelError("initial_values must be an object");
    for (const auto& [name, value] : iv.items()) {
      if (!value.is_number_integer()) throw ModelError("initial value of '" + name + "' must be an integer");
      b.set_initial_value(name, value.get<std::int64_t>());
    }
  }

  std::map<std::string, std::vector<std::string>> input_params;
  for (const json& v : field(doc, "input_labels", "model")) {
    auto [name, params] = label_entry(v, "input label");
    input_params[name] = params;
    b.add_input(name, params);
  }
  if (doc.contains("output_labels"))
    for (const json& v : doc.at("output_labels")) {
      auto [name, params] = label_entry(v, "output label");
      b.add_output(name, params);
    }

  for (const json& t : field(doc, "transitions", "model")) {
    const std::string id = string_field(t, "id", "transition");
    const std::string where = "transition '" + id + "'";
    const std::string input = string_field(t, "input", where);
    if (t.contains("params")) {
      auto it = input_params.find(input);
      if (it != input_params.end() && string_list(t.at("params"), where + ".params") != it->second)
        throw ModelError(where + ": params differ from those of input label '" + input + "'");
    }
    std::vector<std::pair<std::string, std::string>> update;
    if (t.contains("update")) {
      const json& u = t.at("update");
      if (!u.is_object()) throw ModelError(where + ": update must be an object");
      for (const auto& [lhs, rhs] : u.items()) {
        if (rhs.is_number_integer())
          update.emplace_back(lhs, std::to_string(rhs.get<std::int64_t>()));
        else if (rhs.is_string())
          update.emplace_back(lhs, rhs.get<std::string>());
        else
          throw ModelError(where + ": update of '" + lhs + "' must be an expression string or integer");
      }
    }
    b.add_transition(id, string_field(t, "source", where), string_field(t, "target", where), input,
                     string_field(t, "output", where), optional_text(t, "guard", where), update);
  }

  if (doc.contains("traps"))
    for (const json& t : doc.at("traps")) {
      const std::string name = string_field(t, "var", "trap");
      const std::string where = "trap '" + name + "'";
      b.add_trap(name, string_field(t, "transition", where), optional_text(t, "predicate", where));
    }

  if (doc.contains("goals")) {
    const json& goals = doc.at("goals");
    if (!goals.is_object()) throw ModelError("goals must be an object");
    for (const auto& [name, g] : goals.items()) {
      const std::string where = "goal '" + name + "'";
      if (g.is_object() && g.contains("sequence"))
        b.add_sequence_goal(name, string_list(g.at("sequence"), where + ".sequence"));
      else if (g.is_object() && g.contains("traps"))
        b.add_goal(name, string_list(g.at("traps"), where + ".traps"));
      else
        throw ModelError(where + " needs 'sequence' or 'traps'");
    }
  }

  return b.build();
}

EfsmModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ModelError("model file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_model(doc);
}

json to_json(const EfsmModel& m) {
  const VarTable& vars = m.vars();
  json doc;
  json locations = json::array();
  for (std::size_t i = 0; i < m.location_count(); ++i) locations.push_back(m.location_name(LocationId{i}));
  doc["locations"] = locations;
  doc["initial"] = m.location_name(m.initial());

  json variables = json::array();
  json initial_values = json::object();
  for (VarId v : vars.all()) {
    const VarDecl& d = vars[v];
    if (v == m.label_selector()) continue;
    if (d.kind == VarKind::Trap && m.trap_of_var(v)) continue;
    variables.push_back({{"name", d.name}, {"kind", std::string(to_string(d.kind))}, {"lower", d.lower}, {"upper", d.upper}});
    if (d.kind == VarKind::State) initial_values[d.name] = m.initial_values().at(v);
  }
  doc["variables"] = variables;
  doc["initial_values"] = initial_values;

  json inputs = json::array();
  for (const Label& l : m.inputs()) inputs.push_back(label_json(l, vars));
  doc["input_labels"] = inputs;
  json outputs = json::array();
  for (const Label& l : m.outputs()) outputs.push_back(label_json(l, vars));
  doc["output_labels"] = outputs;

  json transitions = json::array();
  for (const Transition& t : m.transitions()) {
    json update = json::object();
    for (const auto& [v, e] : t.update.entries()) update[vars[v].name] = e.to_string(vars);
    transitions.push_back({{"id", t.id},
                           {"source", m.location_name(t.source)},
                           {"target", m.location_name(t.target)},
                           {"input", m.inputs()[t.input.index()].name},
                           {"output", m.outputs()[t.output.index()].name},
                           {"guard", to_string(t.guard, vars)},
                           {"update", update}});
  }
  doc["transitions"] = transitions;

  json traps = json::array();
  for (const Trap& tr : m.traps())
    traps.push_back({{"var", tr.name},
                     {"transition", m.transition(tr.transition).id},
                     {"predicate", to_string(tr.predicate, vars)}});
  doc["traps"] = traps;

  json goals = json::object();
  for (const auto& [name, g] : m.goals()) {
    json names = json::array();
    for (TrapId t : g.traps) names.push_back(m.trap(t).name);
    goals[name] = {{"traps", names}};
  }
  doc["goals"] = goals;
  return doc;
}

}  // namespace xrpt
