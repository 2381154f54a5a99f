#include "xrpt/constraint/var_table.hpp"

#include <algorithm>

#include "xrpt/error.hpp"

namespace xrpt {

std::string_view to_string(VarKind kind) {
  switch (kind) {
    case VarKind::State: return "state";
    case VarKind::Input: return "input";
    case VarKind::Output: return "output";
    case VarKind::Trap: return "trap";
  }
  return "?";
}

std::optional<VarKind> parse_var_kind(std::string_view text) {
  if (text == "state") return VarKind::State;
  if (text == "input") return VarKind::Input;
  if (text == "output") return VarKind::Output;
  if (text == "trap") return VarKind::Trap;
  return std::nullopt;
}

VarId VarTable::add(VarDecl decl) {
  if (decl.name.empty()) throw ModelError("variable with empty name");
  if (by_name_.contains(decl.name)) throw ModelError("duplicate variable '" + decl.name + "'");
  if (decl.lower > decl.upper) throw ModelError("variable '" + decl.name + "' has an empty domain");
  if (decl.kind == VarKind::Trap && (decl.lower != 0 || decl.upper != 1))
    throw ModelError("trap variable '" + decl.name + "' must range over {0, 1}");
  VarId id{decls_.size()};
  by_name_.emplace(decl.name, id);
  decls_.push_back(std::move(decl));
  return id;
}

void VarTable::set_label_selector(VarId id) {
  if (!id.valid() || id.index() >= decls_.size() || decls_[id.index()].kind != VarKind::Input)
    throw ModelError("label selector must be an input variable");
  label_selector_ = id;
}

std::optional<VarId> VarTable::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

VarId VarTable::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw UnboundVariableError("unknown variable '" + std::string(name) + "'");
}

std::vector<VarId> VarTable::of_kind(VarKind kind) const {
  std::vector<VarId> out;
  for (std::size_t i = 0; i < decls_.size(); ++i)
    if (decls_[i].kind == kind) out.emplace_back(i);
  return out;
}

std::vector<VarId> VarTable::all() const {
  std::vector<VarId> out;
  out.reserve(decls_.size());
  for (std::size_t i = 0; i < decls_.size(); ++i) out.emplace_back(i);
  return out;
}

std::vector<VarId> VarTable::search_order(std::span<const VarId> vars) const {
  std::vector<VarId> out(vars.begin(), vars.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::stable_sort(out.begin(), out.end(), [this](VarId a, VarId b) {
    const bool a_sel = label_selector_ && *label_selector_ == a;
    const bool b_sel = label_selector_ && *label_selector_ == b;
    if (a_sel != b_sel) return a_sel;
    return decls_[a.index()].name < decls_[b.index()].name;
  });
  return out;
}

}  // namespace xrpt
