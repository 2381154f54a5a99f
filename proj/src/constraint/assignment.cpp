#include "xrpt/constraint/assignment.hpp"

#include <algorithm>
#include <sstream>

#include "xrpt/error.hpp"

namespace xrpt {

void Assignment::set(VarId var, std::int64_t value) {
  const auto i = var.index();
  if (i >= values_.size()) {
    values_.resize(i + 1, 0);
    bound_.resize(i + 1, 0);
  }
  values_[i] = value;
  bound_[i] = 1;
}

void Assignment::erase(VarId var) {
  if (var.index() < bound_.size()) bound_[var.index()] = 0;
}

std::optional<std::int64_t> Assignment::get(VarId var) const {
  if (!contains(var)) return std::nullopt;
  return values_[var.index()];
}

std::int64_t Assignment::at(VarId var) const {
  if (!contains(var)) throw UnboundVariableError("variable #" + std::to_string(var.value) + " has no value");
  return values_[var.index()];
}

std::vector<VarId> Assignment::variables() const {
  std::vector<VarId> out;
  for (std::size_t i = 0; i < bound_.size(); ++i)
    if (bound_[i]) out.emplace_back(i);
  return out;
}

std::size_t Assignment::count() const { return static_cast<std::size_t>(std::count(bound_.begin(), bound_.end(), 1)); }

Assignment Assignment::merged(const Assignment& other) const {
  Assignment out = *this;
  out.merge_from(other);
  return out;
}

void Assignment::merge_from(const Assignment& other) {
  for (std::size_t i = 0; i < other.bound_.size(); ++i)
    if (other.bound_[i]) set(VarId{i}, other.values_[i]);
}

Assignment Assignment::restricted(const std::vector<VarId>& vars) const {
  Assignment out;
  for (VarId v : vars)
    if (contains(v)) out.set(v, values_[v.index()]);
  return out;
}

bool operator==(const Assignment& a, const Assignment& b) {
  const auto n = std::max(a.bound_.size(), b.bound_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const VarId v{i};
    if (a.get(v) != b.get(v)) return false;
  }
  return true;
}

std::string to_string(const Assignment& a, const VarTable& vars) {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (VarId v : a.variables()) {
    if (!first) out << ", ";
    first = false;
    if (v.index() < vars.size())
      out << vars[v].name;
    else
      out << '#' << v.value;
    out << ':' << a.at(v);
  }
  out << '}';
  return out.str();
}

}  // namespace xrpt
