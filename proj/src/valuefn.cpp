#include "ledgerlab/valuefn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ledgerlab::valuefn {

namespace {

double var_or(const LedgerState& s, AccountId a, const std::string& contract,
              double init) {
  if (a >= s.accounts.size()) return init;
  auto it = s.accounts[a].contract_vars.find(contract);
  return it == s.accounts[a].contract_vars.end() ? init : it->second;
}

struct Compare {
  bool exact;
  double rel_tol;

  double tol(double a, double b) const {
    return exact ? 0.0
                 : rel_tol * std::max({1.0, std::fabs(a), std::fabs(b)});
  }
  bool eq(double a, double b) const { return std::fabs(a - b) <= tol(a, b); }
  bool ge(double a, double b) const { return a >= b - tol(a, b); }
  bool le(double a, double b) const { return a <= b + tol(a, b); }
};

// Step predicate for the three single-step kinds.
using StepPred = std::function<bool(double v_before, double v_after)>;

StepPred step_predicate(const ValueFunctionSpec& v) {
  const Compare cmp{v.exact, v.rel_tol};
  switch (v.kind.type) {
    case Kind::Type::invariant:
      return [cmp](double b, double a) { return cmp.eq(a, b); };
    case Kind::Type::monotone: {
      const double eps = v.kind.epsilon;
      return [cmp, eps](double b, double a) { return cmp.ge(a, (1 + eps) * b); };
    }
    case Kind::Type::contractive:
    case Kind::Type::controller: {
      const double gamma = v.kind.gamma;
      return [cmp, gamma](double b, double a) { return cmp.le(a, gamma * b); };
    }
  }
  return {};
}

std::uint64_t trial_seed(std::uint64_t seed, std::string_view phase,
                         std::uint64_t index) {
  return derive_seed(derive_seed(seed, phase) +
                         0x9e3779b97f4a7c15ULL * (index + 1),
                     "trial");
}

}  // namespace

MethodOutcome apply_method(const ContractSpec& contract, std::uint32_t method,
                           const MethodAction& action,
                           const LedgerState& state) {
  MethodOutcome out;
  if (method >= contract.methods.size()) {
    out.result = ValidationResult::fail(Violation::illegal_method,
                                        "no such method index");
    return out;
  }
  const MethodSpec& spec = contract.methods[method];
  if (!spec.legal(state, action)) {
    out.result = ValidationResult::fail(
        Violation::illegal_method, "action outside " + spec.name + "'s action set");
    return out;
  }
  out.state = state;
  spec.apply(out.state, action);

  if (out.state.height != state.height ||
      out.state.accounts.size() < state.accounts.size()) {
    out.result = ValidationResult::fail(Violation::sandbox_violation,
                                        "method mutated height or dropped accounts");
    return out;
  }

  for (std::size_t a = 0; a < out.state.accounts.size(); ++a) {
    static const ledger::AccountState kEmpty{};
    const ledger::AccountState& before =
        a < state.accounts.size() ? state.accounts[a] : kEmpty;
    const ledger::AccountState& after = out.state.accounts[a];
    StateDelta d;
    d.account = static_cast<AccountId>(a);
    d.delta = after.balance - before.balance;

    // Union of variable keys; any difference outside the owning contract is a
    // sandbox violation.
    auto bi = before.contract_vars.begin();
    auto ai = after.contract_vars.begin();
    while (bi != before.contract_vars.end() || ai != after.contract_vars.end()) {
      const std::string* key = nullptr;
      bool removed = false, changed = false;
      double value = 0;
      if (ai == after.contract_vars.end() ||
          (bi != before.contract_vars.end() && bi->first < ai->first)) {
        key = &bi->first;
        removed = true;
        ++bi;
      } else if (bi == before.contract_vars.end() || ai->first < bi->first) {
        key = &ai->first;
        changed = true;
        value = ai->second;
        ++ai;
      } else {
        key = &ai->first;
        changed = bi->second != ai->second;
        value = ai->second;
        ++bi;
        ++ai;
      }
      if (removed || (changed && *key != contract.id)) {
        out.result = ValidationResult::fail(
            Violation::sandbox_violation,
            "method wrote variable '" + *key + "' it does not own");
        return out;
      }
      if (changed) d.var_updates.push_back({*key, value});
    }
    if (d.delta != 0 || !d.var_updates.empty()) out.deltas.push_back(std::move(d));
  }
  out.result = ValidationResult::ok();
  return out;
}

void ContractLibrary::add(ContractSpec spec) {
  contracts_[spec.id] = std::move(spec);
}

const ContractSpec* ContractLibrary::find(const std::string& id) const {
  auto it = contracts_.find(id);
  return it == contracts_.end() ? nullptr : &it->second;
}

ValidationResult ContractLibrary::apply_call(const ledger::MethodCall& call,
                                             LedgerState& state,
                                             std::vector<StateDelta>& deltas) const {
  const ContractSpec* contract = find(call.contract);
  if (contract == nullptr)
    return ValidationResult::fail(Violation::illegal_method,
                                  "unknown contract '" + call.contract + "'");
  auto out = apply_method(*contract, call.method, MethodAction{call.args}, state);
  if (!out.result) return out.result;
  // Committed ledger states keep balances nonnegative even when a contract's
  // action set fails to.
  for (const auto& acct : out.state.accounts)
    if (acct.balance < 0)
      return ValidationResult::fail(Violation::illegal_method,
                                    "method left a negative balance");
  state = std::move(out.state);
  deltas = std::move(out.deltas);
  return ValidationResult::ok();
}

StateSampler make_sampler(const SampleDomain& domain) {
  return [domain](Rng& rng) {
    LedgerState st;
    st.accounts.resize(domain.accounts);
    for (auto& acct : st.accounts)
      acct.balance = rng.range(0, domain.max_balance);
    for (const std::string& contract : domain.var_contracts)
      for (auto& acct : st.accounts)
        acct.contract_vars[contract] =
            static_cast<double>(rng.range(domain.var_lo, domain.var_hi));
    return st;
  };
}

StateSampler fixed_total_sampler(std::uint32_t accounts, Amount total) {
  return [accounts, total](Rng& rng) {
    LedgerState st;
    st.accounts.resize(accounts);
    Amount remaining = total;
    for (std::uint32_t a = 0; a + 1 < accounts; ++a) {
      const Amount piece = remaining > 0 ? rng.range(0, remaining) : 0;
      st.accounts[a].balance = piece;
      remaining -= piece;
    }
    st.accounts[accounts - 1].balance = remaining;
    return st;
  };
}

namespace {

// Sweeps trials 0..n-1; returns (first violating trial, violation count).
// The parallel path reduces to the same answer because each trial is a pure
// function of its index.
template <typename TrialFn>
std::pair<std::optional<std::uint64_t>, std::uint64_t> sweep_trials(
    std::uint64_t n, bool parallel, const TrialFn& violated) {
  unsigned long long winner = std::numeric_limits<unsigned long long>::max();
  unsigned long long violations = 0;
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for reduction(min : winner) reduction(+ : violations) \
    schedule(static)
#endif
    for (long long t = 0; t < static_cast<long long>(n); ++t) {
      if (violated(static_cast<std::uint64_t>(t))) {
        ++violations;
        winner = std::min<unsigned long long>(winner, t);
      }
    }
  } else {
    for (std::uint64_t t = 0; t < n; ++t) {
      if (violated(t)) {
        ++violations;
        winner = std::min<unsigned long long>(winner, t);
      }
    }
  }
  if (winner == std::numeric_limits<unsigned long long>::max())
    return {std::nullopt, violations};
  return {static_cast<std::uint64_t>(winner), violations};
}

struct TrialOutcome {
  bool violated = false;
  Witness witness;
};

// One sampled (state, method, action) transition checked against `pred`.
TrialOutcome run_transition_trial(const ValueFunctionSpec& v,
                                  const ContractSpec& contract,
                                  const StateSampler& sampler,
                                  std::uint64_t seed, std::uint64_t index,
                                  const StepPred& pred) {
  TrialOutcome out;
  Rng rng(trial_seed(seed, "step", index));
  if (contract.methods.empty()) return out;
  LedgerState state = sampler(rng);
  const auto method =
      static_cast<std::uint32_t>(rng.below(contract.methods.size()));
  auto action = contract.methods[method].sample(state, rng);
  if (!action) return out;
  const double v_before = v.evaluate(state);
  auto applied = apply_method(contract, method, *action, state);
  if (!applied.result) {
    out.violated = true;
    out.witness = {std::move(state), method, *action, v_before, v_before,
                   applied.result.detail};
    return out;
  }
  const double v_after = v.evaluate(applied.state);
  if (!pred(v_before, v_after)) {
    out.violated = true;
    out.witness = {std::move(state), method, *action, v_before, v_after, {}};
  }
  return out;
}

// Greedy numeric shrinking: zero or halve balances and action arguments while
// the violation persists.
Witness shrink_witness(const ValueFunctionSpec& v, const ContractSpec& contract,
                       const StepPred& pred, Witness w) {
  auto violates = [&](const LedgerState& st, const MethodAction& act,
                      double& vb, double& va) {
    if (w.method >= contract.methods.size()) return false;
    if (!contract.methods[w.method].legal(st, act)) return false;
    vb = v.evaluate(st);
    auto applied = apply_method(contract, w.method, act, st);
    if (!applied.result) {
      va = vb;
      return true;  // sandbox violation persists
    }
    va = v.evaluate(applied.state);
    return !pred(vb, va);
  };

  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t a = 0; a < w.state.accounts.size(); ++a) {
      const Amount current = w.state.accounts[a].balance;
      for (Amount candidate : {Amount{0}, current / 2}) {
        if (candidate == current) continue;
        LedgerState st = w.state;
        st.accounts[a].balance = candidate;
        double vb, va;
        if (violates(st, w.action, vb, va)) {
          w.state = std::move(st);
          w.v_before = vb;
          w.v_after = va;
          improved = true;
          break;
        }
      }
    }
    for (std::size_t i = 0; i < w.action.args.size(); ++i) {
      const std::int64_t current = w.action.args[i];
      for (std::int64_t candidate : {std::int64_t{0}, current / 2}) {
        if (candidate == current) continue;
        MethodAction act = w.action;
        act.args[i] = candidate;
        double vb, va;
        if (violates(w.state, act, vb, va)) {
          w.action = std::move(act);
          w.v_before = vb;
          w.v_after = va;
          improved = true;
          break;
        }
      }
    }
  }
  return w;
}

// Depth-first walk of every transition reachable within `depth` steps of
// `state`; returns true when a violation was found.
bool walk_exhaustive(const ValueFunctionSpec& v, const ContractSpec& contract,
                     const StepPred& pred, const LedgerState& state,
                     std::uint32_t depth, CheckReport& report) {
  for (std::uint32_t m = 0; m < contract.methods.size(); ++m) {
    if (!contract.methods[m].enumerate) continue;
    for (const MethodAction& action : contract.methods[m].enumerate(state)) {
      report.transitions++;
      const double v_before = v.evaluate(state);
      auto applied = apply_method(contract, m, action, state);
      if (!applied.result) {
        report.violations++;
        report.pass = false;
        report.witness =
            Witness{state, m, action, v_before, v_before, applied.result.detail};
        return true;
      }
      const double v_after = v.evaluate(applied.state);
      if (!pred(v_before, v_after)) {
        report.violations++;
        report.pass = false;
        report.witness = Witness{state, m, action, v_before, v_after, {}};
        return true;
      }
      if (depth > 1 &&
          walk_exhaustive(v, contract, pred, applied.state, depth - 1, report))
        return true;
    }
  }
  return false;
}

CheckReport run_exhaustive(const ValueFunctionSpec& v,
                           const ContractSpec& contract,
                           const ExhaustiveDomain& domain,
                           const StepPred& pred) {
  CheckReport report;
  report.value_function = v.name;
  report.contract = contract.id;
  report.coverage = CheckReport::Coverage::enumerated;

  LedgerState base;
  base.accounts.resize(domain.accounts);
  if (contract.contributes_var)
    for (auto& acct : base.accounts)
      acct.contract_vars[contract.id] = contract.var_init;

  // Odometer over balance vectors in {0..max_balance}^accounts.
  std::vector<Amount> balances(domain.accounts, 0);
  while (true) {
    for (std::uint32_t a = 0; a < domain.accounts; ++a)
      base.accounts[a].balance = balances[a];
    if (walk_exhaustive(v, contract, pred, base, domain.depth, report))
      return report;
    std::uint32_t pos = 0;
    while (pos < domain.accounts && ++balances[pos] > domain.max_balance) {
      balances[pos] = 0;
      ++pos;
    }
    if (pos == domain.accounts) break;
  }
  return report;
}

CheckReport run_check(const ValueFunctionSpec& v, const ContractSpec& contract,
                      const StateSampler& sampler, const CheckBudget& budget) {
  const StepPred pred = step_predicate(v);
  if (budget.exhaustive)
    return run_exhaustive(v, contract, *budget.exhaustive, pred);

  CheckReport report;
  report.value_function = v.name;
  report.contract = contract.id;
  report.coverage = CheckReport::Coverage::sampled;
  report.transitions = budget.trials;

  auto [winner, violations] =
      sweep_trials(budget.trials, budget.parallel, [&](std::uint64_t t) {
        return run_transition_trial(v, contract, sampler, budget.seed, t, pred)
            .violated;
      });
  report.violations = violations;
  if (winner) {
    report.pass = false;
    auto outcome =
        run_transition_trial(v, contract, sampler, budget.seed, *winner, pred);
    report.witness =
        shrink_witness(v, contract, pred, std::move(outcome.witness));
  }
  return report;
}

// Trajectory phase for contractive checks: V(x(k)) <= gamma^k V(x(0)).
TrialOutcome run_trajectory_trial(const ValueFunctionSpec& v,
                                  const ContractSpec& contract,
                                  const StateSampler& sampler,
                                  std::uint64_t seed, std::uint64_t index,
                                  std::uint32_t steps) {
  TrialOutcome out;
  Rng rng(trial_seed(seed, "trajectory", index));
  if (contract.methods.empty()) return out;
  LedgerState state = sampler(rng);
  const Compare cmp{v.exact, v.rel_tol};
  double bound = v.evaluate(state);
  for (std::uint32_t k = 1; k <= steps; ++k) {
    const auto method =
        static_cast<std::uint32_t>(rng.below(contract.methods.size()));
    auto action = contract.methods[method].sample(state, rng);
    if (!action) return out;  // no legal action left
    const double v_before = v.evaluate(state);
    auto applied = apply_method(contract, method, *action, state);
    if (!applied.result) {
      out.violated = true;
      out.witness = {std::move(state), method, *action, v_before, v_before,
                     applied.result.detail};
      return out;
    }
    bound *= v.kind.gamma;
    const double v_after = v.evaluate(applied.state);
    if (!cmp.le(v_after, bound)) {
      out.violated = true;
      out.witness = {std::move(state), method, *action, v_before, v_after,
                     "trajectory bound gamma^k V(x(0)) exceeded at step " +
                         std::to_string(k)};
      return out;
    }
    state = std::move(applied.state);
  }
  return out;
}

}  // namespace

CheckReport check_invariant(const ValueFunctionSpec& v,
                            const ContractSpec& contract,
                            const StateSampler& sampler,
                            const CheckBudget& budget) {
  if (v.kind.type != Kind::Type::invariant)
    throw KindMismatchError("NotInvariantKind: " + v.name);
  return run_check(v, contract, sampler, budget);
}

CheckReport check_monotone(const ValueFunctionSpec& v,
                           const ContractSpec& contract,
                           const StateSampler& sampler,
                           const CheckBudget& budget) {
  if (v.kind.type != Kind::Type::monotone)
    throw KindMismatchError("NotMonotoneKind: " + v.name);
  return run_check(v, contract, sampler, budget);
}

CheckReport check_contractive(const ValueFunctionSpec& v,
                              const ContractSpec& contract,
                              const StateSampler& sampler,
                              const CheckBudget& budget) {
  if (v.kind.type != Kind::Type::contractive &&
      v.kind.type != Kind::Type::controller)
    throw KindMismatchError("NotContractiveKind: " + v.name);
  if (v.kind.gamma < 0 || v.kind.gamma >= 1)
    throw KindMismatchError("contraction rate must lie in [0, 1)");
  CheckReport report = run_check(v, contract, sampler, budget);
  if (!report.pass || budget.exhaustive) return report;

  auto [winner, violations] =
      sweep_trials(budget.trajectories, budget.parallel, [&](std::uint64_t t) {
        return run_trajectory_trial(v, contract, sampler, budget.seed, t,
                                    budget.trajectory_steps)
            .violated;
      });
  report.transitions +=
      budget.trajectories * static_cast<std::uint64_t>(budget.trajectory_steps);
  report.violations += violations;
  if (winner) {
    report.pass = false;
    report.witness = run_trajectory_trial(v, contract, sampler, budget.seed,
                                          *winner, budget.trajectory_steps)
                         .witness;
  }
  return report;
}

UncontractiveContractError::UncontractiveContractError(CheckReport r)
    : std::runtime_error("UncontractiveContract: " + r.contract +
                         " fails the single-step contraction check against " +
                         r.value_function),
      report(std::move(r)) {}

ControllerRun run_controller(const ControllerSpec& spec,
                             const ContractSpec& contract,
                             const StateSampler& precheck_sampler,
                             const CheckBudget& precheck_budget,
                             LedgerState initial, const Policy& policy,
                             const Driver& driver, Height horizon,
                             std::uint64_t seed) {
  ControllerRun run;
  run.precondition = check_contractive(spec.step_value, contract,
                                       precheck_sampler, precheck_budget);
  if (!run.precondition.pass) throw UncontractiveContractError(run.precondition);

  Rng rng(derive_seed(seed, "controller"));
  LedgerState state = std::move(initial);
  const auto v_at = [&](const LedgerState& s, Height k) {
    return std::fabs(spec.output(s) - spec.target(k));
  };

  const double v0 = v_at(state, 0);
  run.rows.push_back({0, spec.output(state), spec.target(0), v0});
  run.neighborhood = v0;
  run.max_v = v0;
  run.final_v = v0;
  const double tol = spec.rel_tol * std::max(1.0, v0);

  for (Height k = 1; k <= horizon; ++k) {
    if (driver) driver(state, k);
    if (policy) {
      if (auto choice = policy(state, k, rng)) {
        auto applied =
            apply_method(contract, choice->first, choice->second, state);
        if (applied.result) state = std::move(applied.state);
      }
    }
    const double vk = v_at(state, k);
    run.rows.push_back({k, spec.output(state), spec.target(k), vk});
    run.max_v = std::max(run.max_v, vk);
    run.final_v = vk;
    if (vk > run.neighborhood + tol) run.within_neighborhood = false;
  }
  return run;
}

namespace builtin {

namespace {

bool valid_send_shape(const LedgerState& st, const MethodAction& a) {
  if (a.args.size() != 3) return false;
  const auto from = a.args[0], to = a.args[1], amount = a.args[2];
  return from >= 0 && to >= 0 && from != to &&
         from < static_cast<std::int64_t>(st.accounts.size()) &&
         to < static_cast<std::int64_t>(st.accounts.size()) && amount >= 1;
}

void move_amount(LedgerState& st, const MethodAction& a) {
  st.accounts[static_cast<std::size_t>(a.args[0])].balance -= a.args[2];
  st.accounts[static_cast<std::size_t>(a.args[1])].balance += a.args[2];
}

std::optional<MethodAction> sample_send(const LedgerState& st, Rng& rng,
                                        bool guarded, Amount max_amount) {
  if (st.accounts.size() < 2) return std::nullopt;
  std::vector<AccountId> senders;
  for (AccountId a = 0; a < st.accounts.size(); ++a)
    if (!guarded || st.accounts[a].balance >= 1) senders.push_back(a);
  if (senders.empty()) return std::nullopt;
  const AccountId from = senders[rng.below(senders.size())];
  AccountId to = static_cast<AccountId>(rng.below(st.accounts.size() - 1));
  if (to >= from) ++to;
  const Amount cap = guarded ? st.accounts[from].balance : max_amount;
  const Amount amount = rng.range(1, cap);
  return MethodAction{{from, to, amount}};
}

std::vector<MethodAction> enumerate_sends(const LedgerState& st, bool guarded,
                                          Amount max_amount) {
  std::vector<MethodAction> actions;
  for (AccountId from = 0; from < st.accounts.size(); ++from) {
    const Amount cap = guarded ? st.accounts[from].balance : max_amount;
    for (AccountId to = 0; to < st.accounts.size(); ++to) {
      if (to == from) continue;
      for (Amount amt = 1; amt <= cap; ++amt)
        actions.push_back(MethodAction{{from, to, amt}});
    }
  }
  return actions;
}

}  // namespace

ContractSpec transfers() {
  ContractSpec c;
  c.id = "transfers";
  MethodSpec send;
  send.name = "send";
  send.legal = [](const LedgerState& st, const MethodAction& a) {
    return valid_send_shape(st, a) &&
           a.args[2] <= st.accounts[static_cast<std::size_t>(a.args[0])].balance;
  };
  send.sample = [](const LedgerState& st, Rng& rng) {
    return sample_send(st, rng, /*guarded=*/true, 0);
  };
  send.enumerate = [](const LedgerState& st) {
    return enumerate_sends(st, /*guarded=*/true, 0);
  };
  send.apply = move_amount;
  c.methods.push_back(std::move(send));
  return c;
}

ContractSpec transfers_unguarded(Amount max_amount) {
  ContractSpec c;
  c.id = "transfers";
  MethodSpec send;
  send.name = "send-unguarded";
  send.legal = [max_amount](const LedgerState& st, const MethodAction& a) {
    return valid_send_shape(st, a) && a.args[2] <= max_amount;
  };
  send.sample = [max_amount](const LedgerState& st, Rng& rng) {
    return sample_send(st, rng, /*guarded=*/false, max_amount);
  };
  send.enumerate = [max_amount](const LedgerState& st) {
    return enumerate_sends(st, /*guarded=*/false, max_amount);
  };
  send.apply = move_amount;
  c.methods.push_back(std::move(send));
  return c;
}

ContractSpec identity() {
  ContractSpec c;
  c.id = "identity";
  MethodSpec noop;
  noop.name = "noop";
  noop.legal = [](const LedgerState&, const MethodAction& a) {
    return a.args.empty();
  };
  noop.sample = [](const LedgerState&, Rng&) {
    return std::optional<MethodAction>(MethodAction{});
  };
  noop.enumerate = [](const LedgerState&) {
    return std::vector<MethodAction>{MethodAction{}};
  };
  noop.apply = [](LedgerState&, const MethodAction&) {};
  c.methods.push_back(std::move(noop));
  return c;
}

ContractSpec fee_accumulator(double fee_rate) {
  ContractSpec c;
  c.id = "fee-accumulator";
  c.contributes_var = true;
  MethodSpec send;
  send.name = "send-with-fee";
  send.legal = [](const LedgerState& st, const MethodAction& a) {
    return valid_send_shape(st, a) &&
           a.args[2] <= st.accounts[static_cast<std::size_t>(a.args[0])].balance;
  };
  send.sample = [](const LedgerState& st, Rng& rng) {
    return sample_send(st, rng, /*guarded=*/true, 0);
  };
  send.enumerate = [](const LedgerState& st) {
    return enumerate_sends(st, /*guarded=*/true, 0);
  };
  send.apply = [fee_rate](LedgerState& st, const MethodAction& a) {
    move_amount(st, a);
    auto& tally = st.accounts[0].contract_vars["fee-accumulator"];
    tally += fee_rate * static_cast<double>(a.args[2]);
  };
  c.methods.push_back(std::move(send));
  return c;
}

namespace {

constexpr const char* kHalvingId = "deviation-halving";

bool halving_ready(const LedgerState& st, const MethodAction& a) {
  return a.args.empty() && st.accounts.size() >= 2;
}

MethodSpec halve_gap_method() {
  MethodSpec halve;
  halve.name = "halve-gap";
  halve.legal = halving_ready;
  halve.sample = [](const LedgerState& st, Rng&) -> std::optional<MethodAction> {
    if (st.accounts.size() < 2) return std::nullopt;
    return MethodAction{};
  };
  halve.enumerate = [](const LedgerState& st) {
    return st.accounts.size() < 2 ? std::vector<MethodAction>{}
                                  : std::vector<MethodAction>{MethodAction{}};
  };
  halve.apply = [](LedgerState& st, const MethodAction&) {
    const double gauge = var_or(st, 0, kHalvingId, 0);
    const double target = var_or(st, 1, kHalvingId, 0);
    st.accounts[0].contract_vars[kHalvingId] = gauge + (target - gauge) / 2;
  };
  return halve;
}

}  // namespace

ContractSpec deviation_halving() {
  ContractSpec c;
  c.id = kHalvingId;
  c.contributes_var = true;
  c.methods.push_back(halve_gap_method());
  return c;
}

ContractSpec deviation_halving_sabotaged() {
  ContractSpec c = deviation_halving();
  MethodSpec drift;
  drift.name = "drift";
  drift.legal = halving_ready;
  drift.sample = [](const LedgerState& st, Rng&) -> std::optional<MethodAction> {
    if (st.accounts.size() < 2) return std::nullopt;
    return MethodAction{};
  };
  drift.enumerate = [](const LedgerState& st) {
    return st.accounts.size() < 2 ? std::vector<MethodAction>{}
                                  : std::vector<MethodAction>{MethodAction{}};
  };
  drift.apply = [](LedgerState& st, const MethodAction&) {
    st.accounts[0].contract_vars[kHalvingId] =
        var_or(st, 0, kHalvingId, 0) + 1.0;
  };
  c.methods.push_back(std::move(drift));
  return c;
}

ValueFunctionSpec supply_vf() {
  ValueFunctionSpec v;
  v.name = "supply";
  v.kind = {Kind::Type::invariant, 0, 0};
  v.exact = true;
  v.evaluate = [](const LedgerState& st) {
    return static_cast<double>(st.total_balance());
  };
  return v;
}

ValueFunctionSpec positivity_vf() {
  ValueFunctionSpec v;
  v.name = "positivity";
  v.kind = {Kind::Type::invariant, 0, 0};
  v.exact = true;
  v.evaluate = [](const LedgerState& st) {
    Amount negative = 0;
    for (const auto& acct : st.accounts)
      negative += std::min<Amount>(0, acct.balance);
    return static_cast<double>(-negative);
  };
  return v;
}

ValueFunctionSpec fee_total_vf(double epsilon) {
  ValueFunctionSpec v;
  v.name = "fee-total";
  v.kind = {Kind::Type::monotone, epsilon, 0};
  v.evaluate = [](const LedgerState& st) {
    double total = 0;
    for (AccountId a = 0; a < st.accounts.size(); ++a)
      total += var_or(st, a, "fee-accumulator", 0);
    return total;
  };
  return v;
}

ValueFunctionSpec deviation_vf(double gamma) {
  ValueFunctionSpec v;
  v.name = "deviation";
  v.kind = {Kind::Type::contractive, 0, gamma};
  v.evaluate = [](const LedgerState& st) {
    return std::fabs(var_or(st, 0, kHalvingId, 0) - var_or(st, 1, kHalvingId, 0));
  };
  return v;
}

}  // namespace builtin

}  // namespace ledgerlab::valuefn
