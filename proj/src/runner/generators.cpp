#include "xrpt/runner/generators.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "xrpt/baselines/baselines.hpp"
#include "xrpt/efsm/io.hpp"
#include "xrpt/efsm/semantics.hpp"

namespace xrpt {

namespace {

using nlohmann::json;

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

std::size_t index_below(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

json variable(const std::string& name, const char* kind, std::int64_t lo, std::int64_t hi) {
  return {{"name", name}, {"kind", kind}, {"lower", lo}, {"upper", hi}};
}

/// Source/target pairs: a chain or Hamiltonian cycle through all locations,
/// then random extra edges.
std::vector<std::pair<std::size_t, std::size_t>> control_edges(std::size_t n, std::size_t count, bool cycle,
                                                               std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin() + 1, order.end(), rng);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k + 1 < n; ++k) edges.emplace_back(order[k], order[k + 1]);
  if (cycle && edges.size() < count) edges.emplace_back(order[n - 1], order[0]);
  while (edges.size() < count) edges.emplace_back(index_below(rng, n), index_below(rng, n));
  return edges;
}

/// Chain goal along a random feasible walk; empty when the walk cannot move.
std::vector<std::string> chain_along_walk(const EfsmModel& m, std::size_t traps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  EfsmState s = m.initial_state();
  std::vector<std::string> walk;
  for (std::size_t k = 0; k < 40 * traps; ++k) {
    const std::vector<Move> moves = enabled_moves(m, s, rng);
    if (moves.empty()) break;
    const Move& mv = moves[index_below(rng, moves.size())];
    walk.push_back(m.transition(mv.first).id);
    s = apply_transition(m, s, mv.first, mv.second);
  }
  if (walk.size() < traps) return walk;
  std::vector<std::size_t> picks(walk.size());
  std::iota(picks.begin(), picks.end(), 0);
  std::shuffle(picks.begin(), picks.end(), rng);
  picks.resize(traps);
  std::sort(picks.begin(), picks.end());
  std::vector<std::string> chain;
  for (std::size_t k : picks) chain.push_back(walk[k]);
  return chain;
}

}  // namespace

EfsmModel generate_synthetic_model(const SyntheticShape& shape) {
  if (shape.locations == 0) throw InfeasibleShape("at least one location is required");
  if (shape.transitions + 1 < shape.locations)
    throw InfeasibleShape(fmt::format("{} transitions cannot connect {} locations", shape.transitions, shape.locations));
  if (shape.transitions == 0) throw InfeasibleShape("at least one transition is required");
  if (shape.vars == 0) throw InfeasibleShape("at least one state variable is required");
  if (shape.domain_width < 1) throw InfeasibleShape("domain width must be positive");
  if (shape.guard_atoms < 0) throw InfeasibleShape("guard atom mean must be non-negative");

  std::mt19937_64 rng(shape.seed);
  const std::int64_t w = shape.domain_width;
  const std::size_t labels = std::max<std::size_t>(1, std::min<std::size_t>(shape.transitions, 1 + shape.transitions / 4));
  json doc;
  doc["locations"] = json::array();
  for (std::size_t l = 0; l < shape.locations; ++l) doc["locations"].push_back(fmt::format("l{}", l));
  doc["initial"] = "l0";
  doc["variables"] = json::array();
  std::vector<std::string> xs;
  for (std::size_t v = 0; v < shape.vars; ++v) {
    xs.push_back(fmt::format("x{}", v));
    doc["variables"].push_back(variable(xs.back(), "state", 0, w));
  }
  doc["input_labels"] = json::array();
  for (std::size_t k = 0; k < labels; ++k) {
    const std::string p = fmt::format("p{}", k), q = fmt::format("q{}", k);
    doc["variables"].push_back(variable(p, "input", 0, w));
    doc["variables"].push_back(variable(q, "input", 0, w));
    doc["input_labels"].push_back({{"name", fmt::format("IN{}", k)}, {"params", {p, q}}});
  }
  doc["output_labels"] = json::array();
  doc["transitions"] = json::array();
  const auto edges = control_edges(shape.locations, shape.transitions, shape.transitions >= shape.locations, rng);
  const std::size_t backbone = std::min(edges.size(), shape.locations);
  std::poisson_distribution<int> atoms_per_guard(shape.guard_atoms);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::size_t label = index_below(rng, labels);
    const std::string p = fmt::format("p{}", label), q = fmt::format("q{}", label);
    auto x = [&] { return xs[index_below(rng, xs.size())]; };
    std::vector<std::string> atoms;
    const int n_atoms = atoms_per_guard(rng);
    for (int a = 0; a < n_atoms; ++a) {
      // Backbone edges only get atoms an input can satisfy.
      const int kind = static_cast<int>(uniform(rng, 0, k < backbone ? 2 : 4));
      const std::int64_t c = uniform(rng, 0, w / 2);
      switch (kind) {
        case 0: atoms.push_back(fmt::format("{} - {} <= {}", x(), p, c)); break;
        case 1: atoms.push_back(fmt::format("{} + {} >= {}", x(), q, c)); break;
        case 2: atoms.push_back(fmt::format("{} <= {} + {}", x(), x(), q)); break;
        case 3: atoms.push_back(fmt::format("{} >= {}", x(), uniform(rng, 1, std::max<std::int64_t>(1, w / 8)))); break;
        default: atoms.push_back(fmt::format("{} - {} <= {}", x(), x(), uniform(rng, 0, w / 4))); break;
      }
    }
    json update = json::object();
    const std::size_t updates = 1 + index_below(rng, std::min<std::size_t>(2, xs.size()));
    for (std::size_t u = 0; u < updates; ++u) {
      const std::string target = x();
      switch (uniform(rng, 0, 3)) {
        case 0: update[target] = p; break;
        case 1: update[target] = fmt::format("{} + 1", target); break;
        case 2: update[target] = q; break;
        default: update[target] = x(); break;
      }
    }
    const std::string out = fmt::format("O{}", k);
    doc["output_labels"].push_back(out);
    doc["transitions"].push_back({{"id", fmt::format("t{}", k)},
                                  {"source", fmt::format("l{}", edges[k].first)},
                                  {"target", fmt::format("l{}", edges[k].second)},
                                  {"input", fmt::format("IN{}", label)},
                                  {"output", out},
                                  {"guard", atoms.empty() ? std::string("true") : join(atoms, " && ")},
                                  {"update", update}});
  }
  EfsmModel m = parse_model(doc);
  if (shape.chain == 0) return m;
  const std::vector<std::string> chain = chain_along_walk(m, shape.chain, shape.seed ^ 0x9e3779b97f4a7c15ULL);
  if (chain.size() < shape.chain) throw InfeasibleShape("the generated model dead-ends before the chain goal");
  doc["goals"] = {{"chain", {{"sequence", chain}}}};
  return parse_model(doc);
}

EfsmModel generate_small_model(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 1 + index_below(rng, 6);
  const std::size_t nvars = 1 + index_below(rng, 2);
  const bool has_param = coin(rng, 0.7);
  const std::size_t count = std::max<std::size_t>(n - 1, 1) + index_below(rng, n + 3);
  json doc;
  doc["locations"] = json::array();
  for (std::size_t l = 0; l < n; ++l) doc["locations"].push_back(fmt::format("l{}", l));
  doc["variables"] = json::array();
  std::vector<std::string> xs;
  for (std::size_t v = 0; v < nvars; ++v) {
    xs.push_back(fmt::format("x{}", v));
    doc["variables"].push_back(variable(xs.back(), "state", 0, 5));
  }
  if (has_param) doc["variables"].push_back(variable("p", "input", 0, 5));
  doc["input_labels"] = json::array({has_param ? json{{"name", "A"}, {"params", {"p"}}} : json("A"), "B"});
  doc["output_labels"] = json::array();
  doc["transitions"] = json::array();
  const auto edges = control_edges(n, count, coin(rng, 0.5), rng);
  auto term = [&](bool with_param) {
    std::vector<std::string> pool = xs;
    if (with_param) pool.push_back("p");
    return pool[index_below(rng, pool.size())];
  };
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const bool label_a = coin(rng, 0.6);
    const bool with_param = label_a && has_param;
    std::vector<std::string> atoms;
    const std::size_t n_atoms = index_below(rng, 3);
    static const char* ops[] = {"<=", ">=", "=", "!="};
    for (std::size_t a = 0; a < n_atoms; ++a) {
      const std::string lhs = term(with_param);
      if (coin(rng, 0.5)) {
        atoms.push_back(fmt::format("{} {} {}", lhs, ops[index_below(rng, 4)], uniform(rng, 0, 5)));
      } else {
        atoms.push_back(fmt::format("{} - {} {} {}", lhs, term(with_param), ops[index_below(rng, 3)], uniform(rng, -2, 2)));
      }
    }
    std::string guard = atoms.empty() ? std::string("true") : join(atoms, " && ");
    if (atoms.size() == 2 && coin(rng, 0.3)) guard = atoms[0] + " || " + atoms[1];
    json update = json::object();
    if (coin(rng, 0.8)) {
      const std::string target = xs[index_below(rng, xs.size())];
      switch (uniform(rng, 0, 3)) {
        case 0: update[target] = fmt::format("{} + 1", target); break;
        case 1: update[target] = fmt::format("{} - 1", target); break;
        case 2: update[target] = with_param ? std::string("p") : std::to_string(uniform(rng, 0, 5)); break;
        default: update[target] = term(false); break;
      }
    }
    const std::string out = fmt::format("o{}", k);
    doc["output_labels"].push_back(out);
    doc["transitions"].push_back({{"id", fmt::format("t{}", k)},
                                  {"source", fmt::format("l{}", edges[k].first)},
                                  {"target", fmt::format("l{}", edges[k].second)},
                                  {"input", label_a ? "A" : "B"},
                                  {"output", out},
                                  {"guard", guard},
                                  {"update", update}});
  }
  const std::size_t trap_t = index_below(rng, edges.size());
  std::string predicate = "true";
  if (coin(rng, 0.4)) predicate = fmt::format("{} >= {}", xs[index_below(rng, xs.size())], uniform(rng, 0, 3));
  doc["traps"] = json::array({{{"var", "trap"}, {"transition", fmt::format("t{}", trap_t)}, {"predicate", predicate}}});
  doc["goals"] = {{"trap", {{"traps", {"trap"}}}}};
  return parse_model(doc);
}

std::optional<Mutant> make_mutant(const EfsmModel& m, const std::vector<ExecutedStep>& path, MutantKind kind,
                                  std::mt19937_64& rng) {
  struct Site {
    TransitionId executed;
    TransitionId mutated;
  };
  std::vector<Site> sites;
  EfsmState s = m.initial_state();
  for (const ExecutedStep& step : path) {
    const Assignment in = input_assignment(m, step.input);
    const std::vector<TransitionId> en = enabled(m, s, in);
    if (en.size() == 1 && en.front() == step.transition) {
      const Transition& t = m.transition(step.transition);
      if (kind == MutantKind::LabelSwap) {
        sites.push_back({step.transition, step.transition});
      } else {
        for (TransitionId sib : m.out(t.source)) {
          const Transition& st = m.transition(sib);
          if (sib == step.transition || st.input != t.input || st.output == t.output) continue;
          if (!evaluate(m.post_domain(sib), s.alpha.merged(in))) continue;
          sites.push_back({step.transition, sib});
        }
      }
    }
    s = apply_transition(m, s, step.transition, in);
  }
  if (sites.empty()) return std::nullopt;
  const Site site = sites[index_below(rng, sites.size())];
  json doc = to_json(m);
  const Transition& target = m.transition(site.mutated);
  Mutant mutant{m, kind, target.id, ""};
  for (json& t : doc["transitions"]) {
    if (t["id"] != target.id) continue;
    if (kind == MutantKind::GuardWidening) {
      t["guard"] = "true";
      mutant.description = fmt::format("guard of {} widened to true (next to {})", target.id,
                                       m.transition(site.executed).id);
      continue;
    }
    std::vector<std::string> used;
    for (TransitionId sib : m.out(target.source)) used.push_back(m.outputs()[m.transition(sib).output.index()].name);
    std::vector<std::string> fresh;
    for (const Label& l : m.outputs())
      if (l.params.empty() && std::find(used.begin(), used.end(), l.name) == used.end()) fresh.push_back(l.name);
    std::string label;
    if (fresh.empty()) {
      label = "MUTANT";
      doc["output_labels"].push_back(label);
    } else {
      label = fresh[index_below(rng, fresh.size())];
    }
    mutant.description = fmt::format("output of {} swapped from {} to {}", target.id,
                                     m.outputs()[target.output.index()].name, label);
    t["output"] = label;
  }
  mutant.model = parse_model(doc);
  return mutant;
}

}  // namespace xrpt
