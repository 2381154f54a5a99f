#include "xrpt/constraint/normal_form.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "xrpt/error.hpp"

namespace xrpt {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

LinearExpr rebuild(const std::vector<Term>& terms, std::int64_t constant) {
  LinearExpr e = LinearExpr::constant(constant);
  for (const Term& t : terms) e = e + LinearExpr::variable(t.var, t.coef);
  return e;
}

enum class Fold { Keep, True, False };

/// Divides an atom by the gcd of its coefficients and fixes the sign of
/// Eq/Ne atoms. Ground atoms and atoms made trivial by divisibility fold.
Fold normalize(Atom& a) {
  if (a.expr.is_constant()) return a.holds(a.expr.constant_term()) ? Fold::True : Fold::False;
  std::int64_t g = 0;
  for (const Term& t : a.expr.terms()) g = std::gcd(g, checked_abs(t.coef));
  const std::int64_t k = a.expr.constant_term();
  if (g > 1) {
    std::vector<Term> terms = a.expr.terms();
    for (Term& t : terms) t.coef /= g;
    switch (a.op) {
      case AtomOp::Le: a.expr = rebuild(terms, ceil_div(k, g)); break;
      case AtomOp::Eq:
        if (k % g != 0) return Fold::False;
        a.expr = rebuild(terms, k / g);
        break;
      case AtomOp::Ne:
        if (k % g != 0) return Fold::True;
        a.expr = rebuild(terms, k / g);
        break;
    }
  }
  if (a.op != AtomOp::Le && a.expr.terms().front().coef < 0) a.expr = -a.expr;
  return Fold::Keep;
}

struct Bounds {
  std::int64_t lo;
  std::int64_t hi;
  std::set<std::int64_t> excluded;

  bool pinned() const { return lo == hi; }
  bool empty() const { return lo > hi; }
  void trim() {
    while (lo <= hi && excluded.contains(lo)) ++lo;
    while (lo <= hi && excluded.contains(hi)) --hi;
  }
};

/// Per-variable box collected from the single-variable atoms of a clause.
class BoxState {
 public:
  explicit BoxState(const VarTable& vars) : vars_(vars) {}

  Bounds& of(VarId v) {
    auto it = boxes_.find(v);
    if (it == boxes_.end()) it = boxes_.emplace(v, Bounds{vars_[v].lower, vars_[v].upper, {}}).first;
    return it->second;
  }

  std::int64_t lo(VarId v) const {
    auto it = boxes_.find(v);
    return it == boxes_.end() ? vars_[v].lower : it->second.lo;
  }
  std::int64_t hi(VarId v) const {
    auto it = boxes_.find(v);
    return it == boxes_.end() ? vars_[v].upper : it->second.hi;
  }

  /// Applies a normalised single-variable atom. Returns false when the box
  /// becomes empty.
  bool apply(const Atom& a) {
    const Term t = a.expr.terms().front();
    const std::int64_t k = a.expr.constant_term();
    Bounds& b = of(t.var);
    switch (a.op) {
      case AtomOp::Le:
        if (t.coef > 0)
          b.hi = std::min(b.hi, floor_div(-k, t.coef));
        else
          b.lo = std::max(b.lo, ceil_div(-k, t.coef));
        break;
      case AtomOp::Eq: {
        const std::int64_t v = -k / t.coef;  // divisibility ensured by normalize
        b.lo = std::max(b.lo, v);
        b.hi = std::min(b.hi, v);
        break;
      }
      case AtomOp::Ne: b.excluded.insert(-k / t.coef); break;
    }
    b.trim();
    return !b.empty();
  }

  Assignment pinned() const {
    Assignment out;
    for (const auto& [v, b] : boxes_)
      if (b.pinned()) out.set(v, b.lo);
    return out;
  }

  const std::map<VarId, Bounds>& boxes() const { return boxes_; }

 private:
  const VarTable& vars_;
  std::map<VarId, Bounds> boxes_;
};

struct ExprRange {
  __int128 lo;
  __int128 hi;
};

ExprRange range_of(const LinearExpr& e, const BoxState& box) {
  ExprRange r{e.constant_term(), e.constant_term()};
  for (const Term& t : e.terms()) {
    const __int128 a = static_cast<__int128>(t.coef) * box.lo(t.var);
    const __int128 b = static_cast<__int128>(t.coef) * box.hi(t.var);
    r.lo += std::min(a, b);
    r.hi += std::max(a, b);
  }
  return r;
}

Fold entailment(const Atom& a, const BoxState& box) {
  const ExprRange r = range_of(a.expr, box);
  switch (a.op) {
    case AtomOp::Le: return r.hi <= 0 ? Fold::True : (r.lo > 0 ? Fold::False : Fold::Keep);
    case AtomOp::Eq:
      if (r.lo == 0 && r.hi == 0) return Fold::True;
      return (r.lo > 0 || r.hi < 0) ? Fold::False : Fold::Keep;
    case AtomOp::Ne:
      if (r.lo == 0 && r.hi == 0) return Fold::False;
      return (r.lo > 0 || r.hi < 0) ? Fold::True : Fold::Keep;
  }
  return Fold::Keep;
}

/// Bounds propagation of the multi-variable atoms on a scratch copy of the
/// box; only used to detect contradictions, nothing is emitted from it.
bool bounds_consistent(const std::vector<Atom>& multi, const BoxState& box) {
  std::map<VarId, std::pair<std::int64_t, std::int64_t>> iv;
  auto get = [&](VarId v) -> std::pair<std::int64_t, std::int64_t>& {
    auto it = iv.find(v);
    if (it == iv.end()) it = iv.emplace(v, std::make_pair(box.lo(v), box.hi(v))).first;
    return it->second;
  };
  for (int round = 0; round < 8; ++round) {
    bool changed = false;
    for (const Atom& a : multi) {
      if (a.op == AtomOp::Ne) continue;
      for (int sign : {1, -1}) {
        if (sign == -1 && a.op != AtomOp::Eq) break;
        __int128 minsum = static_cast<__int128>(a.expr.constant_term()) * sign;
        for (const Term& t : a.expr.terms()) {
          const __int128 c = static_cast<__int128>(t.coef) * sign;
          auto& [lo, hi] = get(t.var);
          minsum += std::min(c * lo, c * hi);
        }
        if (minsum > 0) return false;
        for (const Term& t : a.expr.terms()) {
          const __int128 c = static_cast<__int128>(t.coef) * sign;
          auto& [lo, hi] = get(t.var);
          const __int128 rhs = std::min(c * lo, c * hi) - minsum;
          if (c > 0) {
            __int128 ub = rhs / c;
            if (rhs % c != 0 && rhs < 0) --ub;
            if (ub < hi) {
              hi = static_cast<std::int64_t>(ub);
              changed = true;
            }
          } else {
            __int128 lb = rhs / c;
            if (rhs % c != 0 && ((rhs < 0) == (c < 0))) ++lb;
            if (lb > lo) {
              lo = static_cast<std::int64_t>(lb);
              changed = true;
            }
          }
          if (lo > hi) return false;
        }
      }
    }
    if (!changed) break;
  }
  return true;
}

Atom lower_bound_atom(VarId v, std::int64_t lo) { return Atom{LinearExpr::variable(v, -1).plus_constant(lo), AtomOp::Le}; }
Atom upper_bound_atom(VarId v, std::int64_t hi) { return Atom{LinearExpr::variable(v).plus_constant(-hi), AtomOp::Le}; }
Atom value_atom(VarId v, std::int64_t x, AtomOp op) { return Atom{LinearExpr::variable(v).plus_constant(-x), op}; }

}  // namespace

Dnf to_dnf(const Constraint& c, std::size_t max_clauses) {
  const Constraint n = push_negations(c);
  switch (n.kind()) {
    case Constraint::Kind::True: return Dnf{Clause{}};
    case Constraint::Kind::False: return Dnf{};
    case Constraint::Kind::Atom: return Dnf{Clause{{n.atom()}}};
    case Constraint::Kind::Or: {
      Dnf out;
      for (const auto& ch : n.children()) {
        Dnf part = to_dnf(ch, max_clauses);
        out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        if (out.size() > max_clauses) throw Error("DNF expansion exceeds " + std::to_string(max_clauses) + " clauses");
      }
      return out;
    }
    case Constraint::Kind::And: {
      Dnf out{Clause{}};
      for (const auto& ch : n.children()) {
        const Dnf part = to_dnf(ch, max_clauses);
        Dnf next;
        if (out.size() * part.size() > max_clauses)
          throw Error("DNF expansion exceeds " + std::to_string(max_clauses) + " clauses");
        for (const Clause& a : out)
          for (const Clause& b : part) {
            Clause merged = a;
            merged.atoms.insert(merged.atoms.end(), b.atoms.begin(), b.atoms.end());
            next.push_back(std::move(merged));
          }
        out = std::move(next);
        if (out.empty()) break;
      }
      return out;
    }
    case Constraint::Kind::Not: break;
  }
  throw NotInNnfError("to_dnf");
}

Constraint to_constraint(const Clause& clause) {
  std::vector<Constraint> parts;
  parts.reserve(clause.atoms.size());
  for (const Atom& a : clause.atoms) parts.push_back(Constraint::atom(a));
  return Constraint::conjunction(std::move(parts));
}

Constraint to_constraint(const Dnf& dnf) {
  std::vector<Constraint> parts;
  parts.reserve(dnf.size());
  for (const Clause& c : dnf) parts.push_back(to_constraint(c));
  return Constraint::disjunction(std::move(parts));
}

std::optional<Clause> simplify_clause(const Clause& clause, const VarTable& vars) {
  BoxState box(vars);
  std::vector<Atom> multi;
  std::deque<Atom> pending(clause.atoms.begin(), clause.atoms.end());
  std::set<VarId> pinned;

  while (!pending.empty()) {
    Atom a = std::move(pending.front());
    pending.pop_front();
    if (!pinned.empty()) {
      const Assignment fixed = box.pinned();
      a.expr = a.expr.partially_evaluate(fixed);
    }
    const Fold f = normalize(a);
    if (f == Fold::True) continue;
    if (f == Fold::False) return std::nullopt;
    if (a.expr.terms().size() > 1) {
      multi.push_back(std::move(a));
      continue;
    }
    const VarId v = a.expr.terms().front().var;
    if (!box.apply(a)) return std::nullopt;
    if (box.of(v).pinned() && !pinned.contains(v)) {
      pinned.insert(v);
      // Re-queue multi-variable atoms that mention the newly pinned variable.
      auto split = std::stable_partition(multi.begin(), multi.end(), [v](const Atom& m) { return !m.expr.mentions(v); });
      pending.insert(pending.end(), std::make_move_iterator(split), std::make_move_iterator(multi.end()));
      multi.erase(split, multi.end());
    }
  }

  std::sort(multi.begin(), multi.end());
  multi.erase(std::unique(multi.begin(), multi.end()), multi.end());
  std::vector<Atom> kept;
  for (Atom& a : multi) {
    switch (entailment(a, box)) {
      case Fold::True: break;
      case Fold::False: return std::nullopt;
      case Fold::Keep: kept.push_back(std::move(a));
    }
  }
  if (!bounds_consistent(kept, box)) return std::nullopt;

  Clause out;
  for (const auto& [v, b] : box.boxes()) {
    const auto& d = vars[v];
    if (b.pinned()) {
      out.atoms.push_back(value_atom(v, b.lo, AtomOp::Eq));
      continue;
    }
    if (b.lo > d.lower) out.atoms.push_back(lower_bound_atom(v, b.lo));
    if (b.hi < d.upper) out.atoms.push_back(upper_bound_atom(v, b.hi));
    for (std::int64_t x : b.excluded)
      if (x > b.lo && x < b.hi) out.atoms.push_back(value_atom(v, x, AtomOp::Ne));
  }
  out.atoms.insert(out.atoms.end(), kept.begin(), kept.end());
  std::sort(out.atoms.begin(), out.atoms.end());
  return out;
}

bool clause_implies(const Clause& a, const Clause& b, const VarTable& vars) {
  BoxState box(vars);
  std::set<Atom> multi;
  for (const Atom& at : a.atoms) {
    if (at.expr.terms().size() == 1) {
      if (!box.apply(at)) return true;  // contradictory clause implies anything
    } else {
      multi.insert(at);
    }
  }
  for (const Atom& at : b.atoms) {
    if (multi.contains(at)) continue;
    if (at.expr.terms().size() == 1 && at.op == AtomOp::Ne) {
      const Term t = at.expr.terms().front();
      const std::int64_t hole = -at.expr.constant_term() / t.coef;
      const auto it = box.boxes().find(t.var);
      const bool excluded = it != box.boxes().end() && it->second.excluded.contains(hole);
      if (excluded || hole < box.lo(t.var) || hole > box.hi(t.var)) continue;
      return false;
    }
    if (entailment(at, box) != Fold::True) return false;
  }
  return true;
}

bool add_clause_subsuming(Dnf& dnf, Clause c, const VarTable& vars) {
  for (const Clause& existing : dnf)
    if (clause_implies(c, existing, vars)) return false;
  std::erase_if(dnf, [&](const Clause& existing) { return clause_implies(existing, c, vars); });
  dnf.push_back(std::move(c));
  return true;
}

namespace {

void eliminate(const Clause& raw, VarId v, const VarTable& vars, const ProjectionOptions& opts, Dnf& out);

void emit(const Clause& c, const VarTable& vars, Dnf& out) {
  if (auto s = simplify_clause(c, vars)) add_clause_subsuming(out, std::move(*s), vars);
}

Clause with_value(const Clause& c, VarId v, const LinearExpr& value) {
  Substitution s;
  s.assign(v, value);
  Clause out;
  for (const Atom& a : c.atoms) out.atoms.push_back(Atom{a.expr.substitute(s), a.op});
  return out;
}

void eliminate(const Clause& raw, VarId v, const VarTable& vars, const ProjectionOptions& opts, Dnf& out) {
  const auto simplified = simplify_clause(raw, vars);
  if (!simplified) return;
  const Clause& c = *simplified;
  const auto& decl = vars[v];

  std::vector<Atom> with, without;
  for (const Atom& a : c.atoms) (a.expr.mentions(v) ? with : without).push_back(a);
  if (with.empty()) {
    add_clause_subsuming(out, c, vars);
    return;
  }

  // Unit-coefficient equality: substitute v away, keeping its domain.
  for (const Atom& a : with) {
    const std::int64_t coef = a.expr.coefficient(v);
    if (a.op != AtomOp::Eq || (coef != 1 && coef != -1)) continue;
    // coef * v + rest = 0  =>  v = -coef * rest
    const LinearExpr rest = a.expr - LinearExpr::variable(v, coef);
    const LinearExpr value = rest.scaled(-coef);
    Clause next = with_value(c, v, value);
    next.atoms.push_back(Atom::make(value, Relation::Ge, LinearExpr::constant(decl.lower)));
    next.atoms.push_back(Atom::make(value, Relation::Le, LinearExpr::constant(decl.upper)));
    emit(next, vars, out);
    return;
  }

  // Disequalities split into the two strict sides.
  for (std::size_t k = 0; k < c.atoms.size(); ++k) {
    const Atom& a = c.atoms[k];
    if (a.op != AtomOp::Ne || !a.expr.mentions(v)) continue;
    for (const Atom& side : {Atom{a.expr.plus_constant(1), AtomOp::Le}, Atom{(-a.expr).plus_constant(1), AtomOp::Le}}) {
      Clause next = c;
      next.atoms[k] = side;
      eliminate(next, v, vars, opts, out);
    }
    return;
  }

  const bool unit = std::all_of(with.begin(), with.end(), [v](const Atom& a) {
    const std::int64_t coef = a.expr.coefficient(v);
    return a.op == AtomOp::Le && (coef == 1 || coef == -1);
  });

  if (unit) {
    // Integer Fourier-Motzkin: exact for unit coefficients.
    std::vector<LinearExpr> lower{LinearExpr::constant(decl.lower)};  // v >= L
    std::vector<LinearExpr> upper{LinearExpr::constant(decl.upper)};  // v <= U
    for (const Atom& a : with) {
      const std::int64_t coef = a.expr.coefficient(v);
      const LinearExpr rest = a.expr - LinearExpr::variable(v, coef);
      if (coef == 1)
        upper.push_back(-rest);  // v + rest <= 0
      else
        lower.push_back(rest);  // -v + rest <= 0
    }
    Clause next{without};
    for (const LinearExpr& l : lower)
      for (const LinearExpr& u : upper) next.atoms.push_back(Atom{l - u, AtomOp::Le});
    emit(next, vars, out);
    return;
  }

  // Non-unit coefficients: enumerate the remaining range of v, or sample it.
  BoxState box(vars);
  for (const Atom& a : c.atoms)
    if (a.expr.terms().size() == 1 && a.expr.mentions(v)) box.apply(a);
  const std::int64_t lo = box.lo(v), hi = box.hi(v);
  const std::int64_t width = hi - lo + 1;
  std::vector<std::int64_t> values;
  if (width <= opts.enumeration_cap) {
    for (std::int64_t x = lo; x <= hi; ++x) values.push_back(x);
  } else {
    const std::int64_t n = std::max<std::int64_t>(opts.enumeration_cap, 2);
    for (std::int64_t k = 0; k < n; ++k) values.push_back(lo + static_cast<std::int64_t>((static_cast<__int128>(width - 1) * k) / (n - 1)));
    values.erase(std::unique(values.begin(), values.end()), values.end());
  }
  for (std::int64_t x : values) emit(with_value(c, v, LinearExpr::constant(x)), vars, out);
}

}  // namespace

Dnf project_clause(const Clause& clause, std::span<const VarId> eliminated, const VarTable& vars,
                   const ProjectionOptions& options) {
  Dnf current;
  emit(clause, vars, current);
  for (VarId v : vars.search_order(eliminated)) {
    Dnf next;
    for (const Clause& c : current) eliminate(c, v, vars, options, next);
    current = std::move(next);
    if (current.empty()) break;
  }
  return current;
}

Constraint project(const Constraint& c, std::span<const VarId> eliminated, const VarTable& vars,
                   const ProjectionOptions& options) {
  Dnf out;
  for (const Clause& clause : to_dnf(c))
    for (Clause& p : project_clause(clause, eliminated, vars, options)) add_clause_subsuming(out, std::move(p), vars);
  return to_constraint(out);
}

}  // namespace xrpt
