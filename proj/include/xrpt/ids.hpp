#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace xrpt {

/// Dense index into one of the model's tables. The tag keeps a variable index
/// from being passed where a location index is expected.
template <class Tag>
struct Id {
  std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }
  constexpr bool valid() const { return value != std::numeric_limits<std::uint32_t>::max(); }

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

using VarId = Id<struct VarTag>;
using LocationId = Id<struct LocationTag>;
using TransitionId = Id<struct TransitionTag>;
using LabelId = Id<struct LabelTag>;
using TrapId = Id<struct TrapTag>;

}  // namespace xrpt

template <class Tag>
struct std::hash<xrpt::Id<Tag>> {
  std::size_t operator()(const xrpt::Id<Tag>& id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
