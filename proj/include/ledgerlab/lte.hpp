#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledgerlab/ledger.hpp"
#include "ledgerlab/rewards.hpp"
#include "ledgerlab/types.hpp"

namespace ledgerlab::lte {

/// One expansion of the state dimension: n_k accounts before the block,
/// n_k1 >= n_k after it.
struct ExpansionStep {
  std::uint32_t n_k = 0;
  std::uint32_t n_k1 = 0;

  ExpansionStep(std::uint32_t before, std::uint32_t after)
      : n_k(before), n_k1(after) {
    if (after < before)
      throw std::invalid_argument("ExpansionStep: dimension must not shrink");
  }
};

/// Sparse u(k): only the active edges of the all-to-all incidence structure.
struct InputVector {
  std::vector<FlowAction> actions;
};

struct LteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SelfLoopError : LteError {
  SelfLoopError() : LteError("incidence edge with identical endpoints") {}
};
struct IndexOutOfRangeError : LteError {
  IndexOutOfRangeError() : LteError("incidence edge index out of range") {}
};
struct TooLargeForDenseError : LteError {
  TooLargeForDenseError() : LteError("dimension exceeds the dense cap") {}
};

/// Raises on any malformed action: negative amount, self loop, sender index
/// >= n_k, receiver index >= n_k1.
void check_input(const ExpansionStep& step, const InputVector& u);

/// x_out = A_k x: the augmented identity carries every balance forward and
/// zero-initializes the new accounts.
std::vector<Amount> apply_A(const ExpansionStep& step,
                            std::span<const Amount> x);

/// delta = B_k u: -amount at each sender, +amount at each receiver. Exact
/// integer arithmetic; 1'delta = 0 for every input.
std::vector<Amount> apply_B(const ExpansionStep& step, const InputVector& u);

namespace kernels {

/// Serial reference scatter of the incidence product into `out`
/// (out.size() == n_k1, zero-initialized by the caller).
void incidence_apply_serial(std::span<const FlowAction> actions,
                            std::span<Amount> out);

/// OpenMP scatter with per-thread accumulators; bit-identical to the serial
/// kernel because integer addition commutes exactly.
void incidence_apply_parallel(std::span<const FlowAction> actions,
                              std::span<Amount> out);

}  // namespace kernels

/// x(k+1) = A_k x(k) + B_k u(k) + mu_k v(k), gated by strict sequential
/// validity of u against x (the enforced ordering, not the net-flow
/// relaxation).
struct StepOutcome {
  ledger::ValidationResult result;
  std::vector<Amount> state;
};
StepOutcome step(std::span<const Amount> x, const InputVector& u,
                 const rewards::RewardEvent& reward);

/// y = 1'x.
Amount output_y(std::span<const Amount> x);

/// Row-major integer matrix, small enough to print.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Amount> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Amount& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Amount at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  std::vector<Amount> multiply(std::span<const Amount> v) const;
  std::string to_text() const;
};

inline constexpr std::uint32_t kDenseCap = 64;

/// Explicit A_k and B_k for oracle checking, capped at kDenseCap. Columns of
/// B enumerate the edge set (i, j), i < n_k, j < n_k1, i != j, in
/// lexicographic order. `paper_edge_count` reports the n_{k+1}(n_k - 1)
/// count alongside the realized |E_k| minus self-loops.
struct DenseModel {
  DenseMatrix a;
  DenseMatrix b;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::uint64_t edge_count = 0;
  std::uint64_t paper_edge_count = 0;
};
DenseModel materialize_dense(const ExpansionStep& step);

/// Column index of edge (from, to) in the dense enumeration.
std::size_t edge_column(const ExpansionStep& step, AccountId from, AccountId to);

}  // namespace ledgerlab::lte
