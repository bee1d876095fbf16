#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ledgerlab/types.hpp"

namespace ledgerlab::rewards {

/// Scheduled scalar reward mu(k) for block heights k >= 1. Immutable after
/// construction.
class RewardSchedule {
 public:
  virtual ~RewardSchedule() = default;

  virtual Amount mu(Height k) const = 0;

  /// Sum of mu over k = 1..K.
  virtual Amount cumulative(Height K) const {
    Amount total = 0;
    for (Height k = 1; k <= K; ++k) total += mu(k);
    return total;
  }

  virtual std::unique_ptr<RewardSchedule> clone() const = 0;
};

/// Bitcoin-style halving: mu = floor(initial / 2^i) for k in interval i,
/// zero once the configured number of intervals has elapsed.
class HalvingSchedule final : public RewardSchedule {
 public:
  HalvingSchedule(Amount initial_reward, Height interval_length,
                  unsigned halvings)
      : initial_(initial_reward),
        interval_(interval_length),
        halvings_(halvings) {
    if (initial_reward < 0 || interval_length == 0)
      throw std::invalid_argument("HalvingSchedule: bad parameters");
  }

  Amount mu(Height k) const override {
    if (k == 0) return 0;
    const Height i = (k - 1) / interval_;
    if (i >= halvings_ || i >= 63) return 0;
    return initial_ >> i;
  }

  Amount cumulative(Height K) const override;

  /// Exact total over all intervals (the limit of cumulative).
  Amount supply_limit() const;

  Amount initial_reward() const { return initial_; }
  Height interval_length() const { return interval_; }
  unsigned halvings() const { return halvings_; }

  std::unique_ptr<RewardSchedule> clone() const override {
    return std::make_unique<HalvingSchedule>(*this);
  }

 private:
  Amount initial_;
  Height interval_;
  unsigned halvings_;
};

class ConstantSchedule final : public RewardSchedule {
 public:
  explicit ConstantSchedule(Amount reward) : reward_(reward) {
    if (reward < 0) throw std::invalid_argument("ConstantSchedule: negative");
  }
  Amount mu(Height k) const override { return k == 0 ? 0 : reward_; }
  Amount cumulative(Height K) const override {
    return reward_ * static_cast<Amount>(K);
  }
  std::unique_ptr<RewardSchedule> clone() const override {
    return std::make_unique<ConstantSchedule>(*this);
  }

 private:
  Amount reward_;
};

/// Per-interval geometric decay with exact integer flooring: the value of
/// interval i+1 is floor(value_i * num / den), num < den. Values are
/// precomputed until they reach zero.
class GeometricSchedule final : public RewardSchedule {
 public:
  GeometricSchedule(Amount initial_reward, std::int64_t num, std::int64_t den,
                    Height interval_length);

  Amount mu(Height k) const override {
    if (k == 0) return 0;
    const Height i = (k - 1) / interval_;
    return i < values_.size() ? values_[i] : 0;
  }

  std::unique_ptr<RewardSchedule> clone() const override {
    return std::make_unique<GeometricSchedule>(*this);
  }

 private:
  Height interval_;
  std::vector<Amount> values_;
};

/// Explicit per-height rewards for k = 1..values.size(), zero afterwards.
class TabulatedSchedule final : public RewardSchedule {
 public:
  explicit TabulatedSchedule(std::vector<Amount> values)
      : values_(std::move(values)) {
    for (Amount v : values_)
      if (v < 0) throw std::invalid_argument("TabulatedSchedule: negative");
  }
  Amount mu(Height k) const override {
    return (k >= 1 && k <= values_.size()) ? values_[k - 1] : 0;
  }
  std::unique_ptr<RewardSchedule> clone() const override {
    return std::make_unique<TabulatedSchedule>(*this);
  }

 private:
  std::vector<Amount> values_;
};

/// The Bitcoin default: 50 coins initial, 210000-block intervals, rewards
/// cease after interval 32.
HalvingSchedule bitcoin_schedule();

/// Exact asymptotic supply of the Bitcoin default, in base units.
Amount total_supply_limit();

/// Simplex distribution vector with exact rational weights held over a common
/// denominator: weight(a) = numerator(a) / denominator. Valid iff the
/// numerators are positive and sum exactly to the denominator.
struct DistributionVector {
  Amount denominator = 1;
  std::vector<std::pair<AccountId, Amount>> weights;  // sorted by account

  static DistributionVector single(AccountId a) {
    return DistributionVector{1, {{a, 1}}};
  }

  static DistributionVector uniform(std::span<const AccountId> accounts);

  /// Normalizes arbitrary nonnegative integer weights onto the simplex.
  static DistributionVector from_weights(
      std::vector<std::pair<AccountId, Amount>> raw);

  bool empty() const { return weights.empty(); }
  bool valid_simplex() const;

  bool operator==(const DistributionVector&) const = default;
};

/// M(k) = mu_k v(k): scalar reward plus its distribution across accounts.
struct RewardEvent {
  Amount mu = 0;
  DistributionVector distribution;

  bool operator==(const RewardEvent&) const = default;
};

struct EmptyDistributionError : std::runtime_error {
  EmptyDistributionError()
      : std::runtime_error("allocate: mu > 0 with empty distribution") {}
};

/// Integer apportionment of `mu` proportional to the weights, exact to the
/// base unit: largest-remainder rounding, ties broken toward the lowest
/// account index. The returned amounts sum to exactly `mu`.
std::vector<std::pair<AccountId, Amount>> allocate(
    Amount mu, const DistributionVector& dist);

}  // namespace ledgerlab::rewards
