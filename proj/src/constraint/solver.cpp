#include "xrpt/constraint/solver.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "xrpt/error.hpp"

namespace xrpt {

namespace {

using i128 = __int128;

// numeric_limits is not specialised for __int128 in strict mode.
constexpr i128 kInfinity = static_cast<i128>(1) << 120;

enum class Tri { False, True, Unknown };

struct Interval {
  std::int64_t lo;
  std::int64_t hi;
};

using Box = std::vector<Interval>;

struct CNode {
  Constraint::Kind kind = Constraint::Kind::True;
  AtomOp op = AtomOp::Le;
  std::int64_t constant = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> terms;  // local index, coefficient
  std::vector<std::size_t> children;
};

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

std::int64_t clamp64(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max()) return std::numeric_limits<std::int64_t>::max();
  if (v < std::numeric_limits<std::int64_t>::min()) return std::numeric_limits<std::int64_t>::min();
  return static_cast<std::int64_t>(v);
}

/// Formula lowered to dense local indices with the fixed values folded in.
class Compiled {
 public:
  Compiled(const VarTable& vars, std::span<const VarId> free, const Assignment& fixed, const Constraint& c) {
    std::vector<VarId> unpinned;
    for (VarId v : free)
      if (!fixed.contains(v)) unpinned.push_back(v);
    order_ = vars.search_order(unpinned);
    for (std::size_t i = 0; i < order_.size(); ++i) local_.emplace(order_[i], i);
    initial_.reserve(order_.size());
    for (VarId v : order_) initial_.push_back(Interval{vars[v].lower, vars[v].upper});
    used_.assign(order_.size(), 0);
    root_ = lower(push_negations(c), fixed, vars);
  }

  std::size_t add_formula(const Constraint& c, const Assignment& fixed, const VarTable& vars) {
    return lower(push_negations(c), fixed, vars);
  }

  const std::vector<VarId>& order() const { return order_; }
  const Box& initial_box() const { return initial_; }
  /// Whether the local variable occurs in a lowered formula.
  bool used(std::size_t i) const { return used_[i] != 0; }
  std::size_t root() const { return root_; }
  const CNode& node(std::size_t i) const { return nodes_[i]; }

 private:
  // Fixed values fold into the atom constants. Ground atoms stay atoms so
  // their violations degree is still counted by an objective.
  std::size_t lower(const Constraint& c, const Assignment& fixed, const VarTable& vars) {
    CNode n;
    n.kind = c.kind();
    switch (c.kind()) {
      case Constraint::Kind::True:
      case Constraint::Kind::False: break;
      case Constraint::Kind::Atom:
        n.op = c.atom().op;
        n.constant = c.atom().expr.constant_term();
        for (const Term& t : c.atom().expr.terms()) {
          if (auto v = fixed.get(t.var)) {
            n.constant = checked_add(n.constant, checked_mul(t.coef, *v));
            continue;
          }
          auto it = local_.find(t.var);
          if (it == local_.end())
            throw UnboundVariableError("variable '" + (t.var.index() < vars.size() ? vars[t.var].name : "?") +
                                       "' is neither free nor fixed");
          n.terms.emplace_back(it->second, t.coef);
          used_[it->second] = 1;
        }
        break;
      case Constraint::Kind::And:
      case Constraint::Kind::Or:
        for (const auto& ch : c.children()) n.children.push_back(lower(ch, fixed, vars));
        break;
      case Constraint::Kind::Not: throw NotInNnfError("solver");
    }
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }

  std::vector<VarId> order_;
  std::unordered_map<VarId, std::size_t> local_;
  Box initial_;
  std::vector<char> used_;
  std::vector<CNode> nodes_;
  std::size_t root_ = 0;
};

struct Range {
  i128 lo;
  i128 hi;
};

Range expr_range(const CNode& n, const Box& box) {
  Range r{n.constant, n.constant};
  for (const auto& [i, coef] : n.terms) {
    const i128 a = static_cast<i128>(coef) * box[i].lo;
    const i128 b = static_cast<i128>(coef) * box[i].hi;
    r.lo += std::min(a, b);
    r.hi += std::max(a, b);
  }
  return r;
}

class Engine {
 public:
  Engine(const Compiled& f, const SolveOptions& opts) : f_(f), opts_(opts) {}

  Tri eval3(std::size_t idx, const Box& box) const {
    const CNode& n = f_.node(idx);
    switch (n.kind) {
      case Constraint::Kind::True: return Tri::True;
      case Constraint::Kind::False: return Tri::False;
      case Constraint::Kind::Atom: {
        const Range r = expr_range(n, box);
        switch (n.op) {
          case AtomOp::Le: return r.hi <= 0 ? Tri::True : (r.lo > 0 ? Tri::False : Tri::Unknown);
          case AtomOp::Eq:
            if (r.lo == 0 && r.hi == 0) return Tri::True;
            return (r.lo > 0 || r.hi < 0) ? Tri::False : Tri::Unknown;
          case AtomOp::Ne:
            if (r.lo == 0 && r.hi == 0) return Tri::False;
            return (r.lo > 0 || r.hi < 0) ? Tri::True : Tri::Unknown;
        }
        return Tri::Unknown;
      }
      case Constraint::Kind::And: {
        Tri out = Tri::True;
        for (std::size_t ch : n.children) {
          const Tri t = eval3(ch, box);
          if (t == Tri::False) return Tri::False;
          if (t == Tri::Unknown) out = Tri::Unknown;
        }
        return out;
      }
      case Constraint::Kind::Or: {
        Tri out = Tri::False;
        for (std::size_t ch : n.children) {
          const Tri t = eval3(ch, box);
          if (t == Tri::True) return Tri::True;
          if (t == Tri::Unknown) out = Tri::Unknown;
        }
        return out;
      }
      case Constraint::Kind::Not: break;
    }
    return Tri::Unknown;
  }

  /// Lower and upper bounds of the violations degree over the box.
  std::pair<i128, i128> nu_bounds(std::size_t idx, const Box& box) const {
    const CNode& n = f_.node(idx);
    switch (n.kind) {
      case Constraint::Kind::True: return {0, 0};
      case Constraint::Kind::False: return {1, 1};
      case Constraint::Kind::Atom: {
        const Range r = expr_range(n, box);
        switch (n.op) {
          case AtomOp::Le: return {std::max<i128>(0, r.lo), std::max<i128>(0, r.hi)};
          case AtomOp::Eq: {
            const i128 far = std::max(r.lo < 0 ? -r.lo : r.lo, r.hi < 0 ? -r.hi : r.hi);
            if (r.lo <= 0 && r.hi >= 0) return {0, far};
            return {std::min(r.lo < 0 ? -r.lo : r.lo, r.hi < 0 ? -r.hi : r.hi), far};
          }
          case AtomOp::Ne: {
            const bool has_zero = r.lo <= 0 && r.hi >= 0;
            return {(r.lo == 0 && r.hi == 0) ? 1 : 0, has_zero ? 1 : 0};
          }
        }
        return {0, 0};
      }
      case Constraint::Kind::And: {
        i128 lo = 0, hi = 0;
        // Le/Eq atoms with a single open variable are grouped per variable;
        // each group sums to a convex piecewise-linear function of it.
        std::vector<std::pair<std::size_t, std::vector<std::size_t>>> groups;
        for (std::size_t ch : n.children) {
          if (const auto v = single_open(ch, box)) {
            auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == *v; });
            if (it == groups.end()) {
              groups.push_back({*v, {ch}});
            } else {
              it->second.push_back(ch);
            }
            continue;
          }
          auto [a, b] = nu_bounds(ch, box);
          lo += a;
          hi += b;
        }
        for (const auto& [v, atoms] : groups) {
          auto [a, b] = group_bounds(v, atoms, box);
          lo += a;
          hi += b;
        }
        return {lo, hi};
      }
      case Constraint::Kind::Or: {
        i128 lo = kInfinity, hi = kInfinity;
        for (std::size_t ch : n.children) {
          auto [a, b] = nu_bounds(ch, box);
          lo = std::min(lo, a);
          hi = std::min(hi, b);
        }
        return {lo, hi};
      }
      case Constraint::Kind::Not: break;
    }
    return {0, 0};
  }

  /// The open variable of a Le/Eq atom whose other variables are points.
  std::optional<std::size_t> single_open(std::size_t idx, const Box& box) const {
    const CNode& n = f_.node(idx);
    if (n.kind != Constraint::Kind::Atom || n.op == AtomOp::Ne) return std::nullopt;
    std::optional<std::size_t> open;
    for (const auto& [i, coef] : n.terms) {
      if (box[i].lo == box[i].hi) continue;
      if (open) return std::nullopt;
      open = i;
    }
    return open;
  }

  /// Exact range of the summed violations of `atoms` as variable v ranges
  /// over its interval: the minimum lies on a breakpoint, the maximum on an
  /// end point.
  std::pair<i128, i128> group_bounds(std::size_t v, const std::vector<std::size_t>& atoms, const Box& box) const {
    const i128 lo = box[v].lo, hi = box[v].hi;
    auto total = [&](i128 x) {
      i128 sum = 0;
      for (std::size_t idx : atoms) {
        const CNode& n = f_.node(idx);
        i128 e = n.constant;
        for (const auto& [i, coef] : n.terms) e += static_cast<i128>(coef) * (i == v ? x : box[i].lo);
        sum += n.op == AtomOp::Le ? std::max<i128>(0, e) : (e < 0 ? -e : e);
      }
      return sum;
    };
    std::vector<i128> points{lo, hi};
    for (std::size_t idx : atoms) {
      const CNode& n = f_.node(idx);
      i128 rest = n.constant, coef = 0;
      for (const auto& [i, c] : n.terms) {
        if (i == v) {
          coef += c;
        } else {
          rest += static_cast<i128>(c) * box[i].lo;
        }
      }
      if (coef == 0) continue;
      for (i128 x : {floor_div(-rest, coef), ceil_div(-rest, coef)})
        if (x > lo && x < hi) points.push_back(x);
    }
    i128 best = kInfinity;
    for (i128 x : points) best = std::min(best, total(x));
    return {best, std::max(total(lo), total(hi))};
  }

  /// Narrows the box to values that may satisfy the node. Returns false on
  /// a proven conflict.
  bool propagate(std::size_t idx, Box& box) const {
    const CNode& n = f_.node(idx);
    switch (n.kind) {
      case Constraint::Kind::True: return true;
      case Constraint::Kind::False: return false;
      case Constraint::Kind::Atom: {
        bool changed = false;
        return propagate_atom(n, box, changed);
      }
      case Constraint::Kind::And: {
        for (int round = 0; round < 16; ++round) {
          const Box before = box;
          for (std::size_t ch : n.children)
            if (!propagate(ch, box)) return false;
          if (before_equal(before, box)) break;
        }
        return true;
      }
      case Constraint::Kind::Or: {
        std::optional<Box> hull;
        for (std::size_t ch : n.children) {
          const Tri t = eval3(ch, box);
          if (t == Tri::True) return true;
          if (t == Tri::False) continue;
          Box copy = box;
          if (!propagate(ch, copy)) continue;
          if (!hull) {
            hull = std::move(copy);
          } else {
            for (std::size_t i = 0; i < copy.size(); ++i) {
              (*hull)[i].lo = std::min((*hull)[i].lo, copy[i].lo);
              (*hull)[i].hi = std::max((*hull)[i].hi, copy[i].hi);
            }
          }
        }
        if (!hull) return false;
        box = std::move(*hull);
        return true;
      }
      case Constraint::Kind::Not: break;
    }
    return true;
  }

  void count_node() {
    if (++nodes_ > opts_.node_limit) throw SolverBudgetError("solver node limit exceeded");
  }

  /// First variable to branch on. Variables no formula mentions are never
  /// split; they take their lower bound, or a random value when randomised.
  std::size_t first_open(const Box& box) const {
    for (std::size_t i = 0; i < box.size(); ++i)
      if (box[i].lo < box[i].hi && f_.used(i)) return i;
    return box.size();
  }

  /// Picks a point of the box: the lower corner, or a random point when
  /// randomised.
  std::vector<std::int64_t> corner(const Box& box) const {
    std::vector<std::int64_t> out(box.size());
    for (std::size_t i = 0; i < box.size(); ++i) {
      if (opts_.rng && box[i].lo < box[i].hi) {
        std::uniform_int_distribution<std::int64_t> d(box[i].lo, box[i].hi);
        out[i] = d(*opts_.rng);
      } else {
        out[i] = box[i].lo;
      }
    }
    return out;
  }

  bool low_first() const {
    if (!opts_.rng) return true;
    return ((*opts_.rng)() & 1U) == 0;
  }

 private:
  static bool before_equal(const Box& a, const Box& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].lo != b[i].lo || a[i].hi != b[i].hi) return false;
    return true;
  }

  static bool tighten_le(const CNode& n, Box& box, bool& changed, i128 constant, int sign) {
    // sign * (sum c_i x_i) + constant <= 0
    i128 minsum = constant;
    for (const auto& [i, coef] : n.terms) {
      const i128 c = static_cast<i128>(coef) * sign;
      minsum += std::min(c * box[i].lo, c * box[i].hi);
    }
    if (minsum > 0) return false;
    for (const auto& [i, coef] : n.terms) {
      const i128 c = static_cast<i128>(coef) * sign;
      const i128 own = std::min(c * box[i].lo, c * box[i].hi);
      const i128 rhs = own - minsum;  // c * x_i <= rhs
      if (c > 0) {
        const std::int64_t ub = clamp64(floor_div(rhs, c));
        if (ub < box[i].hi) {
          box[i].hi = ub;
          changed = true;
        }
      } else {
        const std::int64_t lb = clamp64(ceil_div(rhs, c));
        if (lb > box[i].lo) {
          box[i].lo = lb;
          changed = true;
        }
      }
      if (box[i].lo > box[i].hi) return false;
    }
    return true;
  }

  static bool propagate_atom(const CNode& n, Box& box, bool& changed) {
    switch (n.op) {
      case AtomOp::Le: return tighten_le(n, box, changed, n.constant, 1);
      case AtomOp::Eq:
        return tighten_le(n, box, changed, n.constant, 1) && tighten_le(n, box, changed, -static_cast<i128>(n.constant), -1);
      case AtomOp::Ne: {
        std::size_t open = n.terms.size();
        i128 rest = n.constant;
        for (std::size_t k = 0; k < n.terms.size(); ++k) {
          const auto& [i, coef] = n.terms[k];
          if (box[i].lo == box[i].hi) {
            rest += static_cast<i128>(coef) * box[i].lo;
          } else if (open == n.terms.size()) {
            open = k;
          } else {
            return true;  // two or more open variables
          }
        }
        if (open == n.terms.size()) return rest != 0;
        const auto& [i, coef] = n.terms[open];
        if ((-rest) % coef != 0) return true;
        const i128 hole = (-rest) / coef;
        if (hole == box[i].lo) {
          ++box[i].lo;
          changed = true;
        } else if (hole == box[i].hi) {
          --box[i].hi;
          changed = true;
        }
        return box[i].lo <= box[i].hi;
      }
    }
    return true;
  }

  const Compiled& f_;
  const SolveOptions& opts_;
  std::uint64_t nodes_ = 0;
};

Assignment to_assignment(const Compiled& f, const std::vector<std::int64_t>& point) {
  Assignment a;
  for (std::size_t i = 0; i < point.size(); ++i) a.set(f.order()[i], point[i]);
  return a;
}

bool search_sat(Engine& e, const Compiled& f, Box box, std::vector<std::int64_t>& out) {
  e.count_node();
  if (!e.propagate(f.root(), box)) return false;
  const Tri t = e.eval3(f.root(), box);
  if (t == Tri::False) return false;
  if (t == Tri::True) {
    out = e.corner(box);
    return true;
  }
  const std::size_t i = e.first_open(box);
  if (i == box.size()) return false;  // every atom is ground here; unreachable in practice
  const std::int64_t mid = box[i].lo + (box[i].hi - box[i].lo) / 2;
  Box low = box, high = box;
  low[i].hi = mid;
  high[i].lo = mid + 1;
  if (e.low_first()) return search_sat(e, f, std::move(low), out) || search_sat(e, f, std::move(high), out);
  return search_sat(e, f, std::move(high), out) || search_sat(e, f, std::move(low), out);
}

struct Incumbent {
  std::optional<std::vector<std::int64_t>> point;
  i128 value = kInfinity;
};

void search_opt(Engine& e, const Compiled& f, std::size_t objective, Box box, Incumbent& best) {
  e.count_node();
  if (!e.propagate(f.root(), box)) return;
  const Tri t = e.eval3(f.root(), box);
  if (t == Tri::False) return;
  const auto [lb, ub] = e.nu_bounds(objective, box);
  if (lb >= best.value) return;
  if (t == Tri::True && lb == ub) {
    best.point = e.corner(box);
    best.value = lb;
    return;
  }
  const std::size_t i = e.first_open(box);
  if (i == box.size()) return;
  const std::int64_t mid = box[i].lo + (box[i].hi - box[i].lo) / 2;
  Box low = box, high = box;
  low[i].hi = mid;
  high[i].lo = mid + 1;
  if (e.low_first()) {
    search_opt(e, f, objective, std::move(low), best);
    search_opt(e, f, objective, std::move(high), best);
  } else {
    search_opt(e, f, objective, std::move(high), best);
    search_opt(e, f, objective, std::move(low), best);
  }
}

}  // namespace

std::optional<Assignment> sat_model(const VarTable& vars, std::span<const VarId> free, const Assignment& fixed,
                                    const Constraint& c, const SolveOptions& options) {
  const Compiled f(vars, free, fixed, c);
  Engine e(f, options);
  std::vector<std::int64_t> point;
  if (!search_sat(e, f, f.initial_box(), point)) return std::nullopt;
  return to_assignment(f, point);
}

std::optional<Assignment> optimize_model(const VarTable& vars, std::span<const VarId> free, const Assignment& fixed,
                                         const Constraint& feasibility, const Constraint& objective,
                                         const SolveOptions& options) {
  Compiled f(vars, free, fixed, feasibility);
  const std::size_t obj = f.add_formula(objective, fixed, vars);
  Engine e(f, options);
  Incumbent best;
  search_opt(e, f, obj, f.initial_box(), best);
  if (!best.point) return std::nullopt;
  return to_assignment(f, *best.point);
}

bool satisfiable(const VarTable& vars, const Constraint& c, const SolveOptions& options) {
  const auto fv = c.free_variables();
  return sat_model(vars, fv, Assignment{}, c, options).has_value();
}

bool is_weaker_or_equal(const VarTable& vars, const Constraint& c, const Constraint& d, const Constraint& domain,
                        const SolveOptions& options) {
  if (c.is_true()) return true;
  return !satisfiable(vars, domain && d && !c, options);
}

}  // namespace xrpt
