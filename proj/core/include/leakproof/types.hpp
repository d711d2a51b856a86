#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace leakproof {

/// Seconds since the Unix epoch.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;
inline constexpr Timestamp kSecondsPerWeek = 7 * kSecondsPerDay;
inline constexpr Timestamp kSecondsPerYear = 365 * kSecondsPerDay;

/// Dense user index into a Dataset's user table.
struct UserId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(UserId, UserId) = default;
};

/// Dense item index into a Dataset's item table. Ordering of ids follows the
/// natural order of the external identifiers, so "ascending item id" tie
/// breaks are stable across filtering.
struct ItemId {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(ItemId, ItemId) = default;
};

/// One implicit user-item event. No rating is kept.
struct Interaction {
  UserId user;
  ItemId item;
  Timestamp timestamp = 0;
  friend constexpr bool operator==(const Interaction&, const Interaction&) = default;
};

/// Position of an interaction inside Dataset::interactions().
using InteractionIndex = std::uint32_t;

/// Raised for invalid arguments and precondition failures that a caller can
/// correct (bad ratio, unknown item, empty result...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for failures while running (unreadable file, diverging model...).
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace leakproof

template <>
struct std::hash<leakproof::UserId> {
  std::size_t operator()(leakproof::UserId u) const noexcept { return std::hash<std::uint32_t>{}(u.value); }
};

template <>
struct std::hash<leakproof::ItemId> {
  std::size_t operator()(leakproof::ItemId i) const noexcept { return std::hash<std::uint32_t>{}(i.value); }
};
