#include "xrpt/constraint/constraint.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "xrpt/error.hpp"

namespace xrpt {

namespace {

LinearExpr canonical_sign(LinearExpr e) {
  if (!e.terms().empty() && e.terms().front().coef < 0) return -e;
  return e;
}

}  // namespace

Atom Atom::make(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs) {
  const LinearExpr d = lhs - rhs;
  switch (rel) {
    case Relation::Eq: return Atom{canonical_sign(d), AtomOp::Eq};
    case Relation::Ne: return Atom{canonical_sign(d), AtomOp::Ne};
    case Relation::Le: return Atom{d, AtomOp::Le};
    case Relation::Lt: return Atom{d.plus_constant(1), AtomOp::Le};
    case Relation::Ge: return Atom{-d, AtomOp::Le};
    case Relation::Gt: return Atom{(-d).plus_constant(1), AtomOp::Le};
  }
  return Atom{d, AtomOp::Eq};
}

Atom Atom::negated() const {
  switch (op) {
    case AtomOp::Eq: return Atom{expr, AtomOp::Ne};
    case AtomOp::Ne: return Atom{expr, AtomOp::Eq};
    case AtomOp::Le: return Atom{(-expr).plus_constant(1), AtomOp::Le};  // e > 0  <=>  -e + 1 <= 0
  }
  return *this;
}

bool Atom::holds(std::int64_t value) const {
  switch (op) {
    case AtomOp::Eq: return value == 0;
    case AtomOp::Le: return value <= 0;
    case AtomOp::Ne: return value != 0;
  }
  return false;
}

std::int64_t Atom::violation(std::int64_t value) const {
  switch (op) {
    case AtomOp::Eq: return checked_abs(value);
    case AtomOp::Le: return value > 0 ? value : 0;
    // min(nu(d < 0), nu(d > 0)) = min(max(0, d + 1), max(0, 1 - d))
    case AtomOp::Ne: return value == 0 ? 1 : 0;
  }
  return 0;
}

struct Constraint::Node {
  Kind kind = Kind::True;
  Atom atom;
  std::vector<Constraint> children;
};

Constraint::Constraint() : node_(truth().node_) {}

Constraint Constraint::truth() {
  static const Constraint c{std::make_shared<const Node>(Node{Kind::True, {}, {}})};
  return c;
}

Constraint Constraint::falsity() {
  static const Constraint c{std::make_shared<const Node>(Node{Kind::False, {}, {}})};
  return c;
}

Constraint Constraint::atom(Atom a) {
  if (a.expr.is_constant()) return boolean(a.holds(a.expr.constant_term()));
  return Constraint{std::make_shared<const Node>(Node{Kind::Atom, std::move(a), {}})};
}

Constraint Constraint::compare(const LinearExpr& lhs, Relation rel, const LinearExpr& rhs) {
  return atom(Atom::make(lhs, rel, rhs));
}

Constraint Constraint::conjunction(std::vector<Constraint> parts) {
  std::vector<Constraint> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::True: break;
      case Kind::False: return falsity();
      case Kind::And:
        for (const auto& c : p.children()) flat.push_back(c);
        break;
      default: flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  return Constraint{std::make_shared<const Node>(Node{Kind::And, {}, std::move(flat)})};
}

Constraint Constraint::disjunction(std::vector<Constraint> parts) {
  std::vector<Constraint> flat;
  flat.reserve(parts.size());
  for (auto& p : parts) {
    switch (p.kind()) {
      case Kind::False: break;
      case Kind::True: return truth();
      case Kind::Or:
        for (const auto& c : p.children()) flat.push_back(c);
        break;
      default: flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat.front();
  return Constraint{std::make_shared<const Node>(Node{Kind::Or, {}, std::move(flat)})};
}

Constraint Constraint::negation(const Constraint& c) {
  if (c.is_true()) return falsity();
  if (c.is_false()) return truth();
  return Constraint{std::make_shared<const Node>(Node{Kind::Not, {}, {c}})};
}

Constraint::Kind Constraint::kind() const { return node_->kind; }

const Atom& Constraint::atom() const { return node_->atom; }

std::span<const Constraint> Constraint::children() const { return node_->children; }

const Constraint& Constraint::operand() const { return node_->children.front(); }

namespace {

void collect_vars(const Constraint& c, std::vector<VarId>& out) {
  switch (c.kind()) {
    case Constraint::Kind::Atom:
      for (const Term& t : c.atom().expr.terms()) out.push_back(t.var);
      break;
    case Constraint::Kind::And:
    case Constraint::Kind::Or:
    case Constraint::Kind::Not:
      for (const auto& ch : c.children()) collect_vars(ch, out);
      break;
    default: break;
  }
}

}  // namespace

std::vector<VarId> Constraint::free_variables() const {
  std::vector<VarId> out;
  collect_vars(*this, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool Constraint::mentions(VarId var) const {
  switch (kind()) {
    case Kind::Atom: return atom().expr.mentions(var);
    case Kind::And:
    case Kind::Or:
    case Kind::Not:
      return std::any_of(children().begin(), children().end(), [var](const Constraint& c) { return c.mentions(var); });
    default: return false;
  }
}

bool operator==(const Constraint& a, const Constraint& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Constraint::Kind::True:
    case Constraint::Kind::False: return true;
    case Constraint::Kind::Atom: return a.atom() == b.atom();
    default: break;
  }
  const auto ca = a.children();
  const auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

bool evaluate(const Constraint& c, const Assignment& a) {
  switch (c.kind()) {
    case Constraint::Kind::True: return true;
    case Constraint::Kind::False: return false;
    case Constraint::Kind::Atom: return c.atom().holds(c.atom().expr.evaluate(a));
    case Constraint::Kind::Not: return !evaluate(c.operand(), a);
    case Constraint::Kind::And: {
      // Every child is evaluated so unbound variables are reported
      // regardless of short-circuiting.
      bool value = true;
      for (const auto& ch : c.children()) value = evaluate(ch, a) && value;
      return value;
    }
    case Constraint::Kind::Or: {
      bool value = false;
      for (const auto& ch : c.children()) value = evaluate(ch, a) || value;
      return value;
    }
  }
  return false;
}

namespace {

Constraint nnf(const Constraint& c, bool negate) {
  using K = Constraint::Kind;
  switch (c.kind()) {
    case K::True: return Constraint::boolean(!negate);
    case K::False: return Constraint::boolean(negate);
    case K::Atom: return negate ? Constraint::atom(c.atom().negated()) : c;
    case K::Not: return nnf(c.operand(), !negate);
    case K::And:
    case K::Or: {
      std::vector<Constraint> parts;
      parts.reserve(c.children().size());
      for (const auto& ch : c.children()) parts.push_back(nnf(ch, negate));
      const bool conj = (c.kind() == K::And) != negate;
      return conj ? Constraint::conjunction(std::move(parts)) : Constraint::disjunction(std::move(parts));
    }
  }
  return c;
}

template <class F>
Constraint map_atoms(const Constraint& c, const F& f) {
  using K = Constraint::Kind;
  switch (c.kind()) {
    case K::True:
    case K::False: return c;
    case K::Atom: return Constraint::atom(f(c.atom()));
    case K::Not: return Constraint::negation(map_atoms(c.operand(), f));
    case K::And:
    case K::Or: {
      std::vector<Constraint> parts;
      parts.reserve(c.children().size());
      for (const auto& ch : c.children()) parts.push_back(map_atoms(ch, f));
      return c.kind() == K::And ? Constraint::conjunction(std::move(parts))
                                : Constraint::disjunction(std::move(parts));
    }
  }
  return c;
}

Atom recanonicalize(Atom a) {
  if (a.op != AtomOp::Le) a.expr = canonical_sign(std::move(a.expr));
  return a;
}

}  // namespace

Constraint push_negations(const Constraint& c) { return nnf(c, false); }

Constraint substitute(const Constraint& c, const Substitution& s) {
  if (s.empty()) return c;
  return map_atoms(c, [&](const Atom& a) { return recanonicalize(Atom{a.expr.substitute(s), a.op}); });
}

Constraint partially_evaluate(const Constraint& c, const Assignment& a) {
  return map_atoms(c, [&](const Atom& at) { return recanonicalize(Atom{at.expr.partially_evaluate(a), at.op}); });
}

std::int64_t violations_degree(const Constraint& c, const Assignment& a) {
  using K = Constraint::Kind;
  switch (c.kind()) {
    case K::True: return 0;
    // No rule exists for FALSE; it is reached only through an unsatisfiable
    // constant, and one unit is the smallest positive distance.
    case K::False: return 1;
    case K::Atom: return c.atom().violation(c.atom().expr.evaluate(a));
    case K::Not: throw NotInNnfError();
    case K::And: {
      std::int64_t sum = 0;
      for (const auto& ch : c.children()) sum = checked_add(sum, violations_degree(ch, a));
      return sum;
    }
    case K::Or: {
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (const auto& ch : c.children()) best = std::min(best, violations_degree(ch, a));
      return best;
    }
  }
  return 0;
}

Constraint domain_constraint(const VarTable& vars, std::span<const VarId> which) {
  std::vector<Constraint> parts;
  for (VarId v : which) {
    const auto& d = vars[v];
    parts.push_back(Constraint::compare(LinearExpr::variable(v), Relation::Ge, LinearExpr::constant(d.lower)));
    parts.push_back(Constraint::compare(LinearExpr::variable(v), Relation::Le, LinearExpr::constant(d.upper)));
  }
  return Constraint::conjunction(std::move(parts));
}

Constraint domain_constraint(const VarTable& vars) {
  const auto all = vars.all();
  return domain_constraint(vars, all);
}

namespace {

std::string atom_to_string(const Atom& a, const VarTable& vars) {
  LinearExpr lhs = a.expr.plus_constant(-a.expr.constant_term());
  std::int64_t rhs = -a.expr.constant_term();
  const char* op = "=";
  switch (a.op) {
    case AtomOp::Eq: op = "="; break;
    case AtomOp::Ne: op = "!="; break;
    case AtomOp::Le: {
      const bool all_negative = std::all_of(lhs.terms().begin(), lhs.terms().end(),
                                            [](const Term& t) { return t.coef < 0; });
      if (all_negative) {
        lhs = -lhs;
        rhs = -rhs;
        op = ">=";
      } else {
        op = "<=";
      }
      break;
    }
  }
  return lhs.to_string(vars) + " " + op + " " + std::to_string(rhs);
}

void print(const Constraint& c, const VarTable& vars, std::ostringstream& out, bool nested) {
  using K = Constraint::Kind;
  switch (c.kind()) {
    case K::True: out << "true"; return;
    case K::False: out << "false"; return;
    case K::Atom: out << atom_to_string(c.atom(), vars); return;
    case K::Not:
      out << "!(";
      print(c.operand(), vars, out, false);
      out << ')';
      return;
    case K::And:
    case K::Or: {
      const char* sep = c.kind() == K::And ? " && " : " || ";
      if (nested) out << '(';
      bool first = true;
      for (const auto& ch : c.children()) {
        if (!first) out << sep;
        first = false;
        print(ch, vars, out, true);
      }
      if (nested) out << ')';
      return;
    }
  }
}

}  // namespace

std::string to_string(const Constraint& c, const VarTable& vars) {
  std::ostringstream out;
  print(c, vars, out, false);
  return out.str();
}

}  // namespace xrpt
