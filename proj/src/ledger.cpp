#include "ledgerlab/ledger.hpp"

#include <algorithm>

#include "ledgerlab/bytes.hpp"
#include "ledgerlab/digest.hpp"

namespace ledgerlab::ledger {

const char* violation_name(Violation v) {
  switch (v) {
    case Violation::ok: return "ok";
    case Violation::insufficient_balance: return "InsufficientBalance";
    case Violation::unknown_account: return "UnknownAccount";
    case Violation::illegal_method: return "IllegalMethod";
    case Violation::self_loop: return "SelfLoop";
    case Violation::negative_amount: return "NegativeAmount";
    case Violation::delta_mismatch: return "DeltaMismatch";
    case Violation::bad_height: return "BadHeight";
    case Violation::bad_reward: return "BadReward";
    case Violation::invalid_block: return "InvalidBlock";
    case Violation::broken_link: return "BrokenLink";
    case Violation::sandbox_violation: return "SandboxViolation";
  }
  return "?";
}

Chain Chain::from_genesis(LedgerState x0) {
  x0.height = 0;
  Block genesis;
  genesis.state = std::move(x0);
  genesis.txs.height = 0;
  Chain c;
  c.append(std::move(genesis));
  return c;
}

namespace {

// Validity of a flow against a working state; no mutation.
ValidationResult check_flow(const LedgerState& state, const FlowAction& flow) {
  if (flow.amount < 0)
    return ValidationResult::fail(Violation::negative_amount,
                                  "flow amount is negative");
  if (flow.from == flow.to)
    return ValidationResult::fail(Violation::self_loop,
                                  "flow sends to its own account");
  if (!state.has_account(flow.from))
    return ValidationResult::fail(Violation::unknown_account,
                                  "sender does not exist");
  if (state.accounts[flow.from].balance < flow.amount)
    return ValidationResult::fail(Violation::insufficient_balance,
                                  "send exceeds current balance");
  return ValidationResult::ok();
}

void commit_flow(LedgerState& state, const FlowAction& flow) {
  state.ensure_account(flow.to);
  state.accounts[flow.from].balance -= flow.amount;
  state.accounts[flow.to].balance += flow.amount;
}

bool flow_deltas_match(const Transaction& tx, const FlowAction& flow) {
  return tx.initiator == flow.from && tx.deltas.size() == 2 &&
         tx.deltas[0] == StateDelta{flow.from, -flow.amount, {}} &&
         tx.deltas[1] == StateDelta{flow.to, flow.amount, {}};
}

ValidationResult run_method(const MethodCall& call, LedgerState& state,
                            std::vector<StateDelta>& deltas,
                            const ContractHost* host) {
  if (host == nullptr)
    return ValidationResult::fail(Violation::illegal_method,
                                  "no contract registry available");
  return host->apply_call(call, state, deltas);
}

AccountId action_initiator(const ActionRef& action) {
  if (const auto* flow = std::get_if<FlowAction>(&action)) return flow->from;
  const auto& call = std::get<MethodCall>(action);
  return call.args.empty() ? 0 : static_cast<AccountId>(call.args.front());
}

ValidationResult credit_reward(LedgerState& state,
                               const rewards::RewardEvent& reward) {
  if (reward.mu < 0)
    return ValidationResult::fail(Violation::bad_reward, "negative reward");
  if (reward.mu == 0) return ValidationResult::ok();
  if (reward.distribution.empty())
    return ValidationResult::fail(Violation::bad_reward,
                                  "reward with empty distribution");
  if (!reward.distribution.valid_simplex())
    return ValidationResult::fail(Violation::bad_reward,
                                  "distribution is not a simplex");
  for (const auto& [account, amount] :
       rewards::allocate(reward.mu, reward.distribution)) {
    state.ensure_account(account);
    state.accounts[account].balance += amount;
  }
  return ValidationResult::ok();
}

}  // namespace

TxOutcome make_transaction(const ActionRef& action, const LedgerState& working,
                           const ContractHost* host) {
  Transaction tx;
  tx.action = action;
  tx.initiator = action_initiator(action);
  if (const auto* flow = std::get_if<FlowAction>(&action)) {
    if (auto res = check_flow(working, *flow); !res) return {std::move(res), {}};
    tx.deltas = {{flow->from, -flow->amount, {}}, {flow->to, flow->amount, {}}};
  } else {
    LedgerState scratch = working;
    if (auto res = run_method(std::get<MethodCall>(action), scratch, tx.deltas,
                              host);
        !res)
      return {std::move(res), {}};
  }
  return {ValidationResult::ok(), std::move(tx)};
}

ValidationResult validate_transaction(const Transaction& tx,
                                      const LedgerState& working,
                                      const ContractHost* host) {
  if (const auto* flow = std::get_if<FlowAction>(&tx.action)) {
    if (auto res = check_flow(working, *flow); !res) return res;
    if (!flow_deltas_match(tx, *flow))
      return ValidationResult::fail(
          Violation::delta_mismatch,
          "stored deltas are not the ones the action produces");
    return ValidationResult::ok();
  }
  LedgerState scratch = working;
  std::vector<StateDelta> deltas;
  if (auto res = run_method(std::get<MethodCall>(tx.action), scratch, deltas,
                            host);
      !res)
    return res;
  if (deltas != tx.deltas || action_initiator(tx.action) != tx.initiator)
    return ValidationResult::fail(
        Violation::delta_mismatch,
        "stored deltas are not the ones the action produces");
  return ValidationResult::ok();
}

ValidationResult apply_transaction(LedgerState& state, const Transaction& tx,
                                   const ContractHost* host) {
  if (const auto* flow = std::get_if<FlowAction>(&tx.action)) {
    if (auto res = check_flow(state, *flow); !res) return res;
    if (!flow_deltas_match(tx, *flow))
      return ValidationResult::fail(
          Violation::delta_mismatch,
          "stored deltas are not the ones the action produces");
    commit_flow(state, *flow);
    return ValidationResult::ok();
  }
  LedgerState scratch = state;
  std::vector<StateDelta> deltas;
  if (auto res = run_method(std::get<MethodCall>(tx.action), scratch, deltas,
                            host);
      !res)
    return res;
  if (deltas != tx.deltas || action_initiator(tx.action) != tx.initiator)
    return ValidationResult::fail(
        Violation::delta_mismatch,
        "stored deltas are not the ones the action produces");
  state = std::move(scratch);
  return ValidationResult::ok();
}

ApplyOutcome apply_block(const LedgerState& state, const TransactionBlock& block,
                         const ContractHost* host) {
  if (block.height != state.height + 1) {
    auto res = ValidationResult::fail(Violation::bad_height,
                                      "block height is not state height + 1");
    res.block_height = block.height;
    return {std::move(res), {}};
  }
  LedgerState next = state;
  for (std::size_t i = 0; i < block.txs.size(); ++i) {
    if (auto res = apply_transaction(next, block.txs[i], host); !res) {
      res.tx_index = i;
      res.block_height = block.height;
      return {std::move(res), {}};
    }
  }
  if (auto res = credit_reward(next, block.reward); !res) {
    res.block_height = block.height;
    return {std::move(res), {}};
  }
  next.height = block.height;
  return {ValidationResult::ok(), std::move(next)};
}

ApplyOutcome replay_chain(const Chain& chain, const ContractHost* host) {
  const auto blocks = chain.blocks();
  if (blocks.front().state.height != 0 || blocks.front().txs.height != 0 ||
      !blocks.front().txs.txs.empty()) {
    auto res = ValidationResult::fail(Violation::invalid_block,
                                      "malformed genesis block");
    return {std::move(res), {}};
  }
  LedgerState state = blocks.front().state;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    const Block& block = blocks[i];
    if (block.parent_link != block_digest(blocks[i - 1])) {
      auto res = ValidationResult::fail(Violation::broken_link,
                                        "parent digest mismatch");
      res.block_height = block.txs.height;
      return {std::move(res), {}};
    }
    auto outcome = apply_block(state, block.txs, host);
    if (!outcome.result) return outcome;
    if (outcome.state != block.state) {
      auto res = ValidationResult::fail(
          Violation::invalid_block, "stored state does not match replay");
      res.block_height = block.txs.height;
      return {std::move(res), {}};
    }
    state = std::move(outcome.state);
  }
  return {ValidationResult::ok(), std::move(state)};
}

bool satisfies_net_flow(const TransactionBlock& block,
                        const LedgerState& state) {
  std::map<AccountId, Amount> net;
  for (const Transaction& tx : block.txs)
    for (const StateDelta& d : tx.deltas) net[d.account] += d.delta;
  for (const auto& [account, delta] : net)
    if (state.balance(account) + delta < 0) return false;
  return true;
}

Amount block_tx_delta(const TransactionBlock& block, AccountId account) {
  Amount sum = 0;
  for (const Transaction& tx : block.txs)
    for (const StateDelta& d : tx.deltas)
      if (d.account == account) sum += d.delta;
  return sum;
}

namespace {

void write_distribution(ByteWriter& w, const rewards::DistributionVector& d) {
  w.i64(d.denominator);
  w.u64(d.weights.size());
  for (const auto& [account, num] : d.weights) {
    w.u64(account);
    w.i64(num);
  }
}

void write_tx(ByteWriter& w, const Transaction& tx) {
  w.u64(tx.initiator);
  if (const auto* flow = std::get_if<FlowAction>(&tx.action)) {
    w.u64(0);
    w.u64(flow->from);
    w.u64(flow->to);
    w.i64(flow->amount);
  } else {
    const auto& call = std::get<MethodCall>(tx.action);
    w.u64(1);
    w.str(call.contract);
    w.u64(call.method);
    w.u64(call.args.size());
    for (std::int64_t arg : call.args) w.i64(arg);
  }
  w.u64(tx.deltas.size());
  for (const StateDelta& d : tx.deltas) {
    w.u64(d.account);
    w.i64(d.delta);
    w.u64(d.var_updates.size());
    for (const VarUpdate& v : d.var_updates) {
      w.str(v.contract);
      w.f64(v.value);
    }
  }
}

void write_block_record(ByteWriter& w, const Block& block) {
  w.u64(block.txs.height);
  w.digest(block.parent_link);
  w.u64(block.txs.txs.size());
  for (const Transaction& tx : block.txs.txs) write_tx(w, tx);
  w.i64(block.txs.reward.mu);
  write_distribution(w, block.txs.reward.distribution);
  w.f64(block.work);
}

void write_state(ByteWriter& w, const LedgerState& s) {
  w.u64(s.height);
  w.u64(s.accounts.size());
  for (const AccountState& acct : s.accounts) {
    w.i64(acct.balance);
    w.u64(acct.contract_vars.size());
    for (const auto& [contract, value] : acct.contract_vars) {
      w.str(contract);
      w.f64(value);
    }
  }
}

}  // namespace

std::vector<std::uint8_t> serialize_block(const Block& block) {
  ByteWriter w;
  write_block_record(w, block);
  write_state(w, block.state);
  return std::move(w).take();
}

std::vector<std::uint8_t> serialize_chain(const Chain& chain) {
  ByteWriter w;
  w.u64(chain.size());
  for (const Block& block : chain.blocks()) {
    write_block_record(w, block);
    write_state(w, block.state);
  }
  return std::move(w).take();
}

Digest block_digest(const Block& block) {
  ByteWriter w;
  write_block_record(w, block);
  return sha256(w.view());
}

}  // namespace ledgerlab::ledger
