#include "ledgerlab/lte.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ledgerlab::lte {

void check_input(const ExpansionStep& step, const InputVector& u) {
  for (const FlowAction& a : u.actions) {
    if (a.amount < 0) throw LteError("negative amount");
    if (a.from == a.to) throw SelfLoopError();
    if (a.from >= step.n_k || a.to >= step.n_k1) throw IndexOutOfRangeError();
  }
}

std::vector<Amount> apply_A(const ExpansionStep& step,
                            std::span<const Amount> x) {
  if (x.size() != step.n_k)
    throw LteError("apply_A: state has dimension " + std::to_string(x.size()) +
                   ", expected " + std::to_string(step.n_k));
  std::vector<Amount> out(step.n_k1, 0);
  std::copy(x.begin(), x.end(), out.begin());
  return out;
}

namespace kernels {

void incidence_apply_serial(std::span<const FlowAction> actions,
                            std::span<Amount> out) {
  for (const FlowAction& a : actions) {
    out[a.from] -= a.amount;
    out[a.to] += a.amount;
  }
}

void incidence_apply_parallel(std::span<const FlowAction> actions,
                              std::span<Amount> out) {
#ifdef _OPENMP
  const std::size_t n = out.size();
#pragma omp parallel
  {
    std::vector<Amount> local(n, 0);
#pragma omp for nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(actions.size());
         ++i) {
      local[actions[i].from] -= actions[i].amount;
      local[actions[i].to] += actions[i].amount;
    }
#pragma omp critical(lte_incidence_merge)
    for (std::size_t j = 0; j < n; ++j) out[j] += local[j];
  }
#else
  incidence_apply_serial(actions, out);
#endif
}

}  // namespace kernels

namespace {

// Per-thread buffers only pay off once the scatter dominates their setup.
constexpr std::size_t kParallelThreshold = 1u << 15;

}  // namespace

std::vector<Amount> apply_B(const ExpansionStep& step, const InputVector& u) {
  check_input(step, u);
  std::vector<Amount> out(step.n_k1, 0);
  if (u.actions.size() >= kParallelThreshold)
    kernels::incidence_apply_parallel(u.actions, out);
  else
    kernels::incidence_apply_serial(u.actions, out);
  return out;
}

StepOutcome step(std::span<const Amount> x, const InputVector& u,
                 const rewards::RewardEvent& reward) {
  // Dimension after the block: large enough for every receiver and every
  // rewarded account.
  std::uint32_t n_k1 = static_cast<std::uint32_t>(x.size());
  for (const FlowAction& a : u.actions) n_k1 = std::max(n_k1, a.to + 1);
  for (const auto& [account, num] : reward.distribution.weights)
    n_k1 = std::max(n_k1, account + 1);
  const ExpansionStep st(static_cast<std::uint32_t>(x.size()), n_k1);
  check_input(st, u);

  // Strict sequential validity: every send is covered by the sender's balance
  // at its position in the block.
  std::vector<Amount> working = apply_A(st, x);
  for (std::size_t i = 0; i < u.actions.size(); ++i) {
    const FlowAction& a = u.actions[i];
    if (working[a.from] < a.amount) {
      auto res = ledger::ValidationResult::fail(
          ledger::Violation::insufficient_balance,
          "send exceeds current balance");
      res.tx_index = i;
      return {std::move(res), {}};
    }
    working[a.from] -= a.amount;
    working[a.to] += a.amount;
  }

  if (reward.mu > 0) {
    if (reward.distribution.empty() || !reward.distribution.valid_simplex()) {
      auto res = ledger::ValidationResult::fail(ledger::Violation::bad_reward,
                                                "bad reward distribution");
      return {std::move(res), {}};
    }
    for (const auto& [account, amount] :
         rewards::allocate(reward.mu, reward.distribution))
      working[account] += amount;
  }
  return {ledger::ValidationResult::ok(), std::move(working)};
}

Amount output_y(std::span<const Amount> x) {
  Amount sum = 0;
  for (Amount v : x) sum += v;
  return sum;
}

std::vector<Amount> DenseMatrix::multiply(std::span<const Amount> v) const {
  if (v.size() != cols) throw LteError("dense multiply: dimension mismatch");
  std::vector<Amount> out(rows, 0);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[r] += at(r, c) * v[c];
  return out;
}

std::string DenseMatrix::to_text() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) os << ' ';
      os << at(r, c);
    }
    os << '\n';
  }
  return os.str();
}

DenseModel materialize_dense(const ExpansionStep& step) {
  if (step.n_k1 > kDenseCap) throw TooLargeForDenseError();
  DenseModel m;
  m.a = DenseMatrix(step.n_k1, step.n_k);
  for (std::uint32_t i = 0; i < step.n_k; ++i) m.a.at(i, i) = 1;

  for (std::uint32_t i = 0; i < step.n_k; ++i)
    for (std::uint32_t j = 0; j < step.n_k1; ++j)
      if (i != j) m.edges.emplace_back(i, j);
  m.edge_count = m.edges.size();
  m.paper_edge_count =
      step.n_k == 0 ? 0
                    : static_cast<std::uint64_t>(step.n_k1) * (step.n_k - 1);

  m.b = DenseMatrix(step.n_k1, m.edges.size());
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    m.b.at(m.edges[e].first, e) = -1;
    m.b.at(m.edges[e].second, e) = 1;
  }
  return m;
}

std::size_t edge_column(const ExpansionStep& step, AccountId from,
                        AccountId to) {
  if (from == to) throw SelfLoopError();
  if (from >= step.n_k || to >= step.n_k1) throw IndexOutOfRangeError();
  // Row-major (from, to) enumeration skipping the diagonal; every sender row
  // holds n_k1 - 1 edges because from < n_k <= n_k1.
  return static_cast<std::size_t>(from) * (step.n_k1 - 1) + to -
         (to > from ? 1 : 0);
}

}  // namespace ledgerlab::lte
