#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ledgerlab/rewards.hpp"
#include "ledgerlab/types.hpp"

namespace ledgerlab::ledger {

/// Per-account state: balance in base units plus the variables contributed to
/// this account by registered contracts, keyed by contract id.
struct AccountState {
  Amount balance = 0;
  std::map<std::string, double> contract_vars;

  bool operator==(const AccountState&) const = default;
};

/// Assignment of a contract-contributed variable. Stored as the new value
/// rather than an increment so replay is exact for floating-point variables.
struct VarUpdate {
  std::string contract;
  double value = 0;

  bool operator==(const VarUpdate&) const = default;
};

struct StateDelta {
  AccountId account = 0;
  Amount delta = 0;
  std::vector<VarUpdate> var_updates;

  bool operator==(const StateDelta&) const = default;
};

/// Invocation of a contract method: the registered contract resolves the
/// method index and interprets the arguments.
struct MethodCall {
  std::string contract;
  std::uint32_t method = 0;
  std::vector<std::int64_t> args;

  bool operator==(const MethodCall&) const = default;
};

using ActionRef = std::variant<FlowAction, MethodCall>;

struct Transaction {
  AccountId initiator = 0;
  std::vector<StateDelta> deltas;
  ActionRef action;

  bool operator==(const Transaction&) const = default;
};

struct TransactionBlock {
  Height height = 0;
  std::vector<Transaction> txs;
  rewards::RewardEvent reward;

  bool operator==(const TransactionBlock&) const = default;
};

/// The global economic state x(k): dense account vector, account a exists iff
/// a < accounts.size().
struct LedgerState {
  Height height = 0;
  std::vector<AccountState> accounts;

  std::size_t account_count() const { return accounts.size(); }

  bool has_account(AccountId a) const { return a < accounts.size(); }

  Amount balance(AccountId a) const {
    return has_account(a) ? accounts[a].balance : 0;
  }

  /// Extends the account vector so that `a` exists, zero-initialized.
  void ensure_account(AccountId a) {
    if (a >= accounts.size()) accounts.resize(a + 1);
  }

  /// y = 1'x, the exact sum of balances.
  Amount total_balance() const {
    Amount sum = 0;
    for (const auto& acct : accounts) sum += acct.balance;
    return sum;
  }

  bool operator==(const LedgerState&) const = default;
};

/// B(k) = (x(k), TX(k)) plus the link to the parent block and the abstract
/// per-block work that feeds the fork-choice score.
struct Block {
  LedgerState state;
  TransactionBlock txs;
  Digest parent_link{};
  double work = 0;

  bool operator==(const Block&) const = default;
};

enum class Violation {
  ok,
  insufficient_balance,
  unknown_account,
  illegal_method,
  self_loop,
  negative_amount,
  delta_mismatch,
  bad_height,
  bad_reward,
  invalid_block,
  broken_link,
  sandbox_violation,
};

const char* violation_name(Violation v);

struct ValidationResult {
  Violation code = Violation::ok;
  std::size_t tx_index = 0;  // offending transaction, when applicable
  Height block_height = 0;   // offending block, when applicable
  std::string detail;

  explicit operator bool() const { return code == Violation::ok; }

  static ValidationResult ok() { return {}; }
  static ValidationResult fail(Violation v, std::string detail = {}) {
    return {v, 0, 0, std::move(detail)};
  }
};

/// Resolver for contract-method transactions. Implemented by the value-props
/// contract library; the ledger itself only knows flows.
class ContractHost {
 public:
  virtual ~ContractHost() = default;

  /// Validates `call` against `state` and, when legal, applies it in place
  /// and reports the per-account deltas it produced.
  virtual ValidationResult apply_call(const MethodCall& call,
                                      LedgerState& state,
                                      std::vector<StateDelta>& deltas) const = 0;
};

/// C(K): blocks 0..K with consecutive heights; index 0 is genesis.
class Chain {
 public:
  static Chain from_genesis(LedgerState x0);

  void append(Block block) { blocks_.push_back(std::move(block)); }

  std::span<const Block> blocks() const { return blocks_; }
  const Block& genesis() const { return blocks_.front(); }
  const Block& head() const { return blocks_.back(); }
  Height height() const { return blocks_.back().txs.height; }
  std::size_t size() const { return blocks_.size(); }

  bool operator==(const Chain&) const = default;

 private:
  std::vector<Block> blocks_;
};

/// Builds a transaction for `action` against `working`, recomputing its
/// deltas, without mutating `working`. Fails with the violation strict
/// validation would report.
struct TxOutcome {
  ValidationResult result;
  Transaction tx;
};
TxOutcome make_transaction(const ActionRef& action, const LedgerState& working,
                           const ContractHost* host = nullptr);

/// Strict-ordering validity of one transaction against the working state that
/// already reflects every earlier transaction in the block.
ValidationResult validate_transaction(const Transaction& tx,
                                      const LedgerState& working,
                                      const ContractHost* host = nullptr);

/// Validates and applies one transaction in place.
ValidationResult apply_transaction(LedgerState& state, const Transaction& tx,
                                   const ContractHost* host = nullptr);

struct ApplyOutcome {
  ValidationResult result;
  LedgerState state;
};

/// x(k) = x(k-1) + Delta x(k): sequential strict replay of the block's
/// transactions plus the reward allocation.
ApplyOutcome apply_block(const LedgerState& state, const TransactionBlock& block,
                         const ContractHost* host = nullptr);

/// Replays the whole chain from genesis, checking link digests and the stored
/// state snapshots; returns the terminal state or the first violation.
ApplyOutcome replay_chain(const Chain& chain,
                          const ContractHost* host = nullptr);

/// Net-flow relaxation: x_i + inflow_i - outflow_i >= 0 per account over the
/// whole block, ignoring intra-block ordering. Every strictly valid block
/// satisfies it; the converse fails for spend-before-receipt orderings.
bool satisfies_net_flow(const TransactionBlock& block, const LedgerState& state);

/// Per-account sum of deltas over the block's transactions, reward excluded.
Amount block_tx_delta(const TransactionBlock& block, AccountId account);

std::vector<std::uint8_t> serialize_block(const Block& block);
std::vector<std::uint8_t> serialize_chain(const Chain& chain);

/// Digest over (height, parent_link, txs, reward, work); the state snapshot
/// is derived data and stays outside the digest.
Digest block_digest(const Block& block);

}  // namespace ledgerlab::ledger
