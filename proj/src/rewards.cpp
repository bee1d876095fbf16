#include "ledgerlab/rewards.hpp"

#include <algorithm>

namespace ledgerlab::rewards {

Amount HalvingSchedule::cumulative(Height K) const {
  Amount total = 0;
  for (Height i = 0; i < halvings_ && i < 63; ++i) {
    const Height first = i * interval_ + 1;
    if (first > K) break;
    const Height last = std::min(K, (i + 1) * interval_);
    total += (initial_ >> i) * static_cast<Amount>(last - first + 1);
  }
  return total;
}

Amount HalvingSchedule::supply_limit() const {
  Amount total = 0;
  for (Height i = 0; i < halvings_ && i < 63; ++i)
    total += (initial_ >> i) * static_cast<Amount>(interval_);
  return total;
}

GeometricSchedule::GeometricSchedule(Amount initial_reward, std::int64_t num,
                                     std::int64_t den, Height interval_length)
    : interval_(interval_length) {
  if (initial_reward < 0 || interval_length == 0 || num < 0 || den <= 0 ||
      num >= den)
    throw std::invalid_argument("GeometricSchedule: bad parameters");
  Amount v = initial_reward;
  while (v > 0) {
    values_.push_back(v);
    v = static_cast<Amount>(static_cast<__int128>(v) * num / den);
  }
}

HalvingSchedule bitcoin_schedule() {
  return HalvingSchedule(50 * kBaseUnitsPerCoin, 210'000, 33);
}

Amount total_supply_limit() { return bitcoin_schedule().supply_limit(); }

DistributionVector DistributionVector::uniform(
    std::span<const AccountId> accounts) {
  DistributionVector d;
  d.denominator = static_cast<Amount>(accounts.size());
  for (AccountId a : accounts) d.weights.emplace_back(a, 1);
  std::sort(d.weights.begin(), d.weights.end());
  return d;
}

DistributionVector DistributionVector::from_weights(
    std::vector<std::pair<AccountId, Amount>> raw) {
  DistributionVector d;
  d.denominator = 0;
  for (auto& [a, w] : raw) {
    if (w < 0) throw std::invalid_argument("distribution: negative weight");
    if (w > 0) {
      d.weights.emplace_back(a, w);
      d.denominator += w;
    }
  }
  if (d.denominator == 0) d.denominator = 1;
  std::sort(d.weights.begin(), d.weights.end());
  return d;
}

bool DistributionVector::valid_simplex() const {
  if (denominator <= 0) return false;
  Amount sum = 0;
  AccountId prev = 0;
  bool first = true;
  for (const auto& [a, num] : weights) {
    if (num <= 0) return false;
    if (!first && a <= prev) return false;  // sorted, no duplicates
    prev = a;
    first = false;
    sum += num;
  }
  return weights.empty() ? false : sum == denominator;
}

std::vector<std::pair<AccountId, Amount>> allocate(
    Amount mu, const DistributionVector& dist) {
  if (mu < 0) throw std::invalid_argument("allocate: negative reward");
  if (mu == 0) return {};
  if (dist.empty()) throw EmptyDistributionError();
  if (!dist.valid_simplex())
    throw std::invalid_argument("allocate: distribution is not a simplex");

  // Exact quotient/remainder of mu * num / den per account; the remainders
  // share the denominator, so largest-remainder comparison is plain integer
  // comparison.
  std::vector<std::pair<AccountId, Amount>> out;
  out.reserve(dist.weights.size());
  std::vector<std::pair<Amount, std::size_t>> remainders;
  Amount assigned = 0;
  for (std::size_t idx = 0; idx < dist.weights.size(); ++idx) {
    const auto& [account, num] = dist.weights[idx];
    const __int128 product = static_cast<__int128>(mu) * num;
    const Amount q = static_cast<Amount>(product / dist.denominator);
    const Amount r = static_cast<Amount>(product % dist.denominator);
    out.emplace_back(account, q);
    remainders.emplace_back(r, idx);
    assigned += q;
  }

  Amount leftover = mu - assigned;
  // Descending remainder, then ascending account index (weights are sorted by
  // account, so position order is account order).
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (Amount i = 0; i < leftover; ++i)
    out[remainders[static_cast<std::size_t>(i)].second].second += 1;
  return out;
}

}  // namespace ledgerlab::rewards
