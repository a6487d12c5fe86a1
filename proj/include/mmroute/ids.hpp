#pragma once

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace mmroute {

/// Dense integer identifier tagged by what it indexes.
template <class Tag>
struct Id {
  std::uint32_t value = 0;

  constexpr Id() = default;
  template <std::integral T>
  constexpr explicit Id(T v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr std::size_t index() const { return value; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

using StationId = Id<struct StationTag>;
using LinkId = Id<struct LinkTag>;
using FlowId = std::uint64_t;

}  // namespace mmroute

template <class Tag>
struct std::hash<mmroute::Id<Tag>> {
  std::size_t operator()(mmroute::Id<Tag> id) const noexcept { return id.value; }
};
