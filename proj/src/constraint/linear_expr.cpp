#include "xrpt/constraint/linear_expr.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "xrpt/error.hpp"

namespace xrpt {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflowError("integer overflow in addition");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflowError("integer overflow in subtraction");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflowError("integer overflow in multiplication");
  return r;
}

std::int64_t checked_abs(std::int64_t a) {
  if (a == std::numeric_limits<std::int64_t>::min()) throw ArithmeticOverflowError("integer overflow in abs");
  return a < 0 ? -a : a;
}

LinearExpr LinearExpr::constant(std::int64_t value) {
  LinearExpr e;
  e.constant_ = value;
  return e;
}

LinearExpr LinearExpr::variable(VarId var, std::int64_t coef) {
  LinearExpr e;
  e.add_term(var, coef);
  return e;
}

std::int64_t LinearExpr::coefficient(VarId var) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), var, [](const Term& t, VarId v) { return t.var < v; });
  return (it != terms_.end() && it->var == var) ? it->coef : 0;
}

void LinearExpr::add_term(VarId var, std::int64_t coef) {
  if (coef == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), var, [](const Term& t, VarId v) { return t.var < v; });
  if (it != terms_.end() && it->var == var) {
    it->coef = checked_add(it->coef, coef);
    if (it->coef == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{var, coef});
  }
}

LinearExpr LinearExpr::operator+(const LinearExpr& rhs) const {
  LinearExpr out = *this;
  out.constant_ = checked_add(out.constant_, rhs.constant_);
  for (const Term& t : rhs.terms_) out.add_term(t.var, t.coef);
  return out;
}

LinearExpr LinearExpr::operator-(const LinearExpr& rhs) const { return *this + rhs.scaled(-1); }

LinearExpr LinearExpr::scaled(std::int64_t factor) const {
  if (factor == 0) return {};
  LinearExpr out;
  out.constant_ = checked_mul(constant_, factor);
  out.terms_.reserve(terms_.size());
  for (const Term& t : terms_) out.terms_.push_back(Term{t.var, checked_mul(t.coef, factor)});
  return out;
}

LinearExpr LinearExpr::plus_constant(std::int64_t c) const {
  LinearExpr out = *this;
  out.constant_ = checked_add(out.constant_, c);
  return out;
}

LinearExpr LinearExpr::substitute(const Substitution& s) const {
  if (s.empty()) return *this;
  LinearExpr out = LinearExpr::constant(constant_);
  for (const Term& t : terms_) {
    if (const LinearExpr* repl = s.find(t.var))
      out = out + repl->scaled(t.coef);
    else
      out.add_term(t.var, t.coef);
  }
  return out;
}

LinearExpr LinearExpr::partially_evaluate(const Assignment& a) const {
  LinearExpr out = LinearExpr::constant(constant_);
  for (const Term& t : terms_) {
    if (auto v = a.get(t.var))
      out.constant_ = checked_add(out.constant_, checked_mul(t.coef, *v));
    else
      out.terms_.push_back(t);
  }
  return out;
}

std::int64_t LinearExpr::evaluate(const Assignment& a) const {
  std::int64_t value = constant_;
  for (const Term& t : terms_) value = checked_add(value, checked_mul(t.coef, a.at(t.var)));
  return value;
}

std::string LinearExpr::to_string(const VarTable& vars) const {
  std::ostringstream out;
  bool first = true;
  for (const Term& t : terms_) {
    std::int64_t c = t.coef;
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    const std::int64_t mag = c < 0 ? -c : c;
    if (mag != 1) out << mag << '*';
    out << (t.var.index() < vars.size() ? vars[t.var].name : "#" + std::to_string(t.var.value));
    first = false;
  }
  if (first) {
    out << constant_;
  } else if (constant_ != 0) {
    out << (constant_ < 0 ? " - " : " + ") << (constant_ < 0 ? -constant_ : constant_);
  }
  return out.str();
}

void Substitution::assign(VarId var, LinearExpr value) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), var,
                             [](const auto& e, VarId v) { return e.first < v; });
  if (it != entries_.end() && it->first == var)
    it->second = std::move(value);
  else
    entries_.insert(it, {var, std::move(value)});
}

const LinearExpr* Substitution::find(VarId var) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), var,
                             [](const auto& e, VarId v) { return e.first < v; });
  return (it != entries_.end() && it->first == var) ? &it->second : nullptr;
}

Substitution Substitution::then(const Substitution& next) const {
  Substitution out;
  for (const auto& [var, expr] : entries_) out.assign(var, expr.substitute(next));
  for (const auto& [var, expr] : next.entries_)
    if (!find(var)) out.assign(var, expr);
  return out;
}

Substitution Substitution::from_assignment(const Assignment& a) {
  Substitution s;
  for (VarId v : a.variables()) s.assign(v, LinearExpr::constant(a.at(v)));
  return s;
}

}  // namespace xrpt
