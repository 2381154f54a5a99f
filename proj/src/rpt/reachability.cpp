#include "xrpt/rpt/reachability.hpp"

#include "xrpt/constraint/parser.hpp"
#include "xrpt/constraint/solver.hpp"
#include "xrpt/error.hpp"

namespace xrpt {

namespace {

Constraint simplified(const Constraint& c, const VarTable& vars) {
  Dnf out;
  for (const Clause& clause : to_dnf(c))
    if (auto s = simplify_clause(clause, vars)) add_clause_subsuming(out, std::move(*s), vars);
  return to_constraint(out);
}

}  // namespace

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Fixpoint: return "fixpoint";
    case StopReason::InitialReached: return "initial";
    case StopReason::DepthBound: return "depth";
  }
  return "?";
}

std::optional<int> ReachabilitySet::length(LocationId l) const {
  for (std::size_t j = 0; j < layers_.size(); ++j)
    if (!layers_[j].at(l.index()).is_false()) return static_cast<int>(j + 1);
  return std::nullopt;
}

std::optional<int> ReachabilitySet::satisfied_length(LocationId l, const Assignment& context) const {
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    const Constraint& c = layers_[j].at(l.index());
    if (!c.is_false() && evaluate(c, context)) return static_cast<int>(j + 1);
  }
  return std::nullopt;
}

Constraint backward_step(const EfsmModel& m, TransitionId t, const Constraint& target) {
  return m.guard_full(t) && m.post_domain(t) && substitute(target, m.transition(t).update);
}

ReachabilitySet generate_reachability(const EfsmModel& m, TrapId tr, const ReachabilityOptions& options) {
  if (options.depth_bound < 1) throw Error("depth bound must be at least 1");
  const VarTable& vars = m.vars();
  const std::vector<VarId> inputs = m.input_vars();
  const std::size_t n = m.location_count();
  const Trap& trap = m.trap(tr);

  ReachabilitySet rs;
  rs.trap_ = tr;
  rs.depth_bound_ = options.depth_bound;
  rs.base_ = simplified(m.guard_full(trap.transition) && trap.predicate && m.post_domain(trap.transition), vars);

  // Layer 1: the trap transition itself.
  std::vector<Dnf> current(n);
  std::vector<Dnf> delta(n);
  const LocationId src = m.transition(trap.transition).source;
  for (const Clause& c : to_dnf(rs.base_))
    for (Clause& p : project_clause(c, inputs, vars, options.projection))
      add_clause_subsuming(current[src.index()], std::move(p), vars);
  delta = current;

  auto snapshot = [&] {
    std::vector<Constraint> layer;
    layer.reserve(n);
    for (const Dnf& d : current) layer.push_back(to_constraint(d));
    rs.layers_.push_back(std::move(layer));
  };
  snapshot();
  rs.stop_ = StopReason::DepthBound;

  SolveOptions bounded;
  bounded.node_limit = options.subsumption_node_limit;
  auto implied = [&](const Constraint& previous, const Clause& p) {
    try {
      return is_weaker_or_equal(vars, previous, to_constraint(p), m.domain(), bounded);
    } catch (const SolverBudgetError&) {
      return false;
    }
  };

  auto initial_reached = [&] { return options.stop_at_initial && !current[m.initial().index()].empty(); };

  if (initial_reached()) {
    rs.stop_ = StopReason::InitialReached;
  } else {
    for (int j = 2; j <= options.depth_bound; ++j) {
      std::vector<Dnf> next = current;
      std::vector<Dnf> next_delta(n);
      bool changed = false;
      for (std::size_t k = 0; k < m.transitions().size(); ++k) {
        const TransitionId t{k};
        const Transition& tx = m.transition(t);
        const Dnf& fresh = delta[tx.target.index()];
        if (fresh.empty()) continue;
        const std::size_t s = tx.source.index();
        const Constraint previous = to_constraint(current[s]);
        for (const Clause& target_clause : fresh) {
          for (const Clause& c : to_dnf(backward_step(m, t, to_constraint(target_clause)))) {
            for (Clause& p : project_clause(c, inputs, vars, options.projection)) {
              if (options.semantic_subsumption && !current[s].empty() && implied(previous, p)) continue;
              const Clause added = p;
              if (add_clause_subsuming(next[s], std::move(p), vars)) {
                add_clause_subsuming(next_delta[s], added, vars);
                changed = true;
              }
            }
          }
        }
      }
      if (!changed) {
        rs.stop_ = StopReason::Fixpoint;
        break;
      }
      current = std::move(next);
      delta = std::move(next_delta);
      snapshot();
      if (initial_reached()) {
        rs.stop_ = StopReason::InitialReached;
        break;
      }
    }
  }

  rs.guards_.assign(m.transitions().size(), Constraint::falsity());
  for (std::size_t k = 0; k < m.transitions().size(); ++k) {
    const TransitionId t{k};
    const Transition& tx = m.transition(t);
    if (t == trap.transition) {
      rs.guards_[k] = rs.base_;
      continue;
    }
    const Constraint& at_source = rs.c_star(tx.source);
    const Constraint& at_target = rs.c_star(tx.target);
    if (at_source.is_false() || at_target.is_false()) continue;
    rs.guards_[k] = simplified(backward_step(m, t, at_target), vars);
  }
  return rs;
}

nlohmann::json ReachabilitySet::to_json(const EfsmModel& m) const {
  using nlohmann::json;
  const VarTable& vars = m.vars();
  json locations = json::object();
  for (std::size_t l = 0; l < m.location_count(); ++l) {
    const LocationId id{l};
    json layers = json::array();
    for (const auto& layer : layers_) layers.push_back(xrpt::to_string(layer[l], vars));
    const auto len = length(id);
    locations[m.location_name(id)] = {{"constraint", xrpt::to_string(c_star(id), vars)},
                                      {"length", len ? json(*len) : json(nullptr)},
                                      {"layers", layers}};
  }
  json guards = json::object();
  for (std::size_t k = 0; k < guards_.size(); ++k)
    guards[m.transition(TransitionId{k}).id] = xrpt::to_string(guards_[k], vars);
  return json{{"trap", m.trap(trap_).name},
              {"depth_bound", depth_bound_},
              {"depth_reached", depth_reached()},
              {"stop", std::string(xrpt::to_string(stop_))},
              {"base", xrpt::to_string(base_, vars)},
              {"locations", locations},
              {"guards", guards}};
}

ReachabilitySet ReachabilitySet::from_json(const EfsmModel& m, const nlohmann::json& doc) {
  const VarTable& vars = m.vars();
  try {
    ReachabilitySet rs;
    const auto tr = m.find_trap(doc.at("trap").get<std::string>());
    if (!tr) throw ModelError("reachability document names an unknown trap");
    rs.trap_ = *tr;
    rs.depth_bound_ = doc.at("depth_bound").get<int>();
    const int depth = doc.at("depth_reached").get<int>();
    const std::string stop = doc.at("stop").get<std::string>();
    rs.stop_ = stop == "fixpoint" ? StopReason::Fixpoint
               : stop == "initial" ? StopReason::InitialReached
                                   : StopReason::DepthBound;
    rs.base_ = parse_constraint(doc.at("base").get<std::string>(), vars);
    rs.layers_.assign(static_cast<std::size_t>(depth), std::vector<Constraint>(m.location_count()));
    for (std::size_t l = 0; l < m.location_count(); ++l) {
      const auto& layers = doc.at("locations").at(m.location_name(LocationId{l})).at("layers");
      if (layers.size() != static_cast<std::size_t>(depth)) throw ModelError("reachability layers are incomplete");
      for (int j = 0; j < depth; ++j) rs.layers_[j][l] = parse_constraint(layers[j].get<std::string>(), vars);
    }
    rs.guards_.assign(m.transitions().size(), Constraint::falsity());
    for (std::size_t k = 0; k < m.transitions().size(); ++k)
      rs.guards_[k] = parse_constraint(doc.at("guards").at(m.transition(TransitionId{k}).id).get<std::string>(), vars);
    return rs;
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("malformed reachability document: ") + e.what());
  }
}

}  // namespace xrpt
