#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xrpt/constraint/var_table.hpp"
#include "xrpt/ids.hpp"

namespace xrpt {

/// Partial map from variables to integer values, stored densely by VarId.
class Assignment {
 public:
  Assignment() = default;

  void set(VarId var, std::int64_t value);
  void erase(VarId var);
  bool contains(VarId var) const {
    return var.index() < bound_.size() && bound_[var.index()] != 0;
  }
  std::optional<std::int64_t> get(VarId var) const;
  /// Throws UnboundVariableError when the variable has no value.
  std::int64_t at(VarId var) const;

  std::vector<VarId> variables() const;
  std::size_t count() const;
  bool empty() const { return count() == 0; }

  /// Values of `other` override values of *this.
  Assignment merged(const Assignment& other) const;
  void merge_from(const Assignment& other);
  /// Only the listed variables are kept.
  Assignment restricted(const std::vector<VarId>& vars) const;

  friend bool operator==(const Assignment& a, const Assignment& b);

 private:
  std::vector<std::int64_t> values_;
  std::vector<char> bound_;
};

std::string to_string(const Assignment& a, const VarTable& vars);

}  // namespace xrpt
