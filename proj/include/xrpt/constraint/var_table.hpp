#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xrpt/ids.hpp"

namespace xrpt {

enum class VarKind { State, Input, Output, Trap };

std::string_view to_string(VarKind kind);
std::optional<VarKind> parse_var_kind(std::string_view text);

struct VarDecl {
  std::string name;
  VarKind kind = VarKind::State;
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  std::int64_t width() const { return upper - lower + 1; }
};

/// Declared variables of one model. Ids are dense and stable; names are unique.
class VarTable {
 public:
  /// Throws ModelError on a duplicate name, an empty domain, or a trap
  /// variable whose domain is not {0, 1}.
  VarId add(VarDecl decl);

  /// Marks an input variable as the label selector (iLabel). It sorts first
  /// in every solver search order.
  void set_label_selector(VarId id);
  std::optional<VarId> label_selector() const { return label_selector_; }

  std::optional<VarId> find(std::string_view name) const;
  /// Throws UnboundVariableError for an unknown name.
  VarId require(std::string_view name) const;

  const VarDecl& operator[](VarId id) const { return decls_[id.index()]; }
  std::size_t size() const { return decls_.size(); }
  bool empty() const { return decls_.empty(); }

  std::vector<VarId> of_kind(VarKind kind) const;
  std::vector<VarId> all() const;

  /// Canonical search order: label selector first, then by name.
  std::vector<VarId> search_order(std::span<const VarId> vars) const;

 private:
  std::vector<VarDecl> decls_;
  std::unordered_map<std::string, VarId> by_name_;
  std::optional<VarId> label_selector_;
};

}  // namespace xrpt
