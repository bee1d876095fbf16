#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace ledgerlab {

/// Dense account index. Accounts are created in order and never reused, so
/// the id doubles as the coordinate of the account in the state vector.
using AccountId = std::uint32_t;

/// Balances and transfer amounts in integer base units (1 coin = 10^8).
using Amount = std::int64_t;

/// Block height / round index.
using Height = std::uint64_t;

inline constexpr Amount kBaseUnitsPerCoin = 100'000'000;

/// One send along the edge (from -> to). Amounts are nonnegative; a reverse
/// transfer is expressed as the reverse edge.
struct FlowAction {
  AccountId from = 0;
  AccountId to = 0;
  Amount amount = 0;

  bool operator==(const FlowAction&) const = default;
};

using Digest = std::array<std::uint8_t, 32>;

std::string to_hex(const Digest& d);

}  // namespace ledgerlab
