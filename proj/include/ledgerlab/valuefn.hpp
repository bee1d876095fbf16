#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ledgerlab/ledger.hpp"
#include "ledgerlab/rng.hpp"
#include "ledgerlab/types.hpp"

namespace ledgerlab::valuefn {

using ledger::LedgerState;
using ledger::StateDelta;
using ledger::ValidationResult;
using ledger::Violation;

/// An element of a method's action set U_l. Arguments are interpreted by the
/// owning method; by convention args[0] is the initiating account for methods
/// that act on behalf of one.
struct MethodAction {
  std::vector<std::int64_t> args;

  bool operator==(const MethodAction&) const = default;
};

/// f_l together with its legal action set U_l(x). `legal` decides membership,
/// `sample` draws one legal action (nullopt when U_l(x) is empty), and
/// `enumerate` lists U_l(x) for exhaustive checking of finite domains.
struct MethodSpec {
  std::string name;
  std::function<bool(const LedgerState&, const MethodAction&)> legal;
  std::function<std::optional<MethodAction>(const LedgerState&, Rng&)> sample;
  std::function<std::vector<MethodAction>(const LedgerState&)> enumerate;
  std::function<void(LedgerState&, const MethodAction&)> apply;
};

/// A contract account: the variable it contributes to every account plus the
/// methods it exposes. Methods may touch balances and this contract's own
/// variables only; the sandbox diff enforces it.
struct ContractSpec {
  std::string id;
  bool contributes_var = false;
  double var_init = 0;
  std::vector<MethodSpec> methods;
};

/// Applies one method under the sandbox: runs the transition on a copy,
/// rejects illegal actions and any write to a foreign contract's variables,
/// and reports the per-account deltas.
struct MethodOutcome {
  ValidationResult result;
  LedgerState state;
  std::vector<StateDelta> deltas;
};
MethodOutcome apply_method(const ContractSpec& contract, std::uint32_t method,
                           const MethodAction& action, const LedgerState& state);

/// Registry exposing contracts to the ledger. The ledger path additionally
/// keeps committed balances nonnegative, which standalone property checks do
/// not (the checkers must be able to observe an escaped negative balance).
class ContractLibrary : public ledger::ContractHost {
 public:
  void add(ContractSpec spec);
  const ContractSpec* find(const std::string& id) const;

  ValidationResult apply_call(const ledger::MethodCall& call,
                              LedgerState& state,
                              std::vector<StateDelta>& deltas) const override;

 private:
  std::map<std::string, ContractSpec> contracts_;
};

struct Kind {
  enum class Type { invariant, monotone, contractive, controller };
  Type type = Type::invariant;
  double epsilon = 0;  // monotone: V' >= (1 + epsilon) V
  double gamma = 0;    // contractive / controller: V' <= gamma V
};

/// V: X -> R+. `exact` marks integer-valued functions compared without
/// tolerance; others use the relative tolerance.
struct ValueFunctionSpec {
  std::string name;
  std::function<double(const LedgerState&)> evaluate;
  Kind kind;
  bool exact = false;
  double rel_tol = 1e-9;
};

using StateSampler = std::function<LedgerState(Rng&)>;

struct SampleDomain {
  std::uint32_t accounts = 4;
  Amount max_balance = 1000;
  std::vector<std::string> var_contracts;  // contracts whose z gets randomized
  std::int64_t var_lo = 0;
  std::int64_t var_hi = 16;
};
StateSampler make_sampler(const SampleDomain& domain);

/// States with balances summing to exactly `total`: the reachable set of a
/// conservation-constrained economy.
StateSampler fixed_total_sampler(std::uint32_t accounts, Amount total);

/// Finite domain walked exhaustively: every balance vector in
/// {0..max_balance}^accounts, transitions explored `depth` steps deep.
struct ExhaustiveDomain {
  std::uint32_t accounts = 3;
  Amount max_balance = 4;
  std::uint32_t depth = 2;
};

struct CheckBudget {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  bool parallel = true;
  std::uint64_t trajectories = 0;      // contractive: extra trajectory phase
  std::uint32_t trajectory_steps = 0;  // steps per trajectory
  std::optional<ExhaustiveDomain> exhaustive;
};

struct Witness {
  LedgerState state;
  std::uint32_t method = 0;
  MethodAction action;
  double v_before = 0;
  double v_after = 0;
  std::string note;
};

struct CheckReport {
  std::string value_function;
  std::string contract;
  bool pass = true;
  std::optional<Witness> witness;  // minimal under shrinking when sampled
  std::uint64_t transitions = 0;   // transitions examined
  std::uint64_t violations = 0;
  enum class Coverage { enumerated, sampled } coverage = Coverage::sampled;
};

struct KindMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Def: V(f_l(u, x)) = V(x) over every method, action, and state in the
/// domain. Exhaustive when the budget declares a finite domain, else seeded
/// sampling; identical inputs give identical reports whether or not the
/// trial sweep runs parallel.
CheckReport check_invariant(const ValueFunctionSpec& v,
                            const ContractSpec& contract,
                            const StateSampler& sampler,
                            const CheckBudget& budget);

/// Def: V(f_l(u, x)) >= (1 + epsilon) V(x).
CheckReport check_monotone(const ValueFunctionSpec& v,
                           const ContractSpec& contract,
                           const StateSampler& sampler,
                           const CheckBudget& budget);

/// Def: V(f_l(u, x)) <= gamma V(x), plus trajectory sweeps asserting
/// V(x(k)) <= gamma^k V(x(0)) along random action sequences.
CheckReport check_contractive(const ValueFunctionSpec& v,
                              const ContractSpec& contract,
                              const StateSampler& sampler,
                              const CheckBudget& budget);

/// Lyapunov tracking controller: output g(x) chases the target trajectory
/// y*(k). `step_value` is the state-only V used for the Def.-18 contraction
/// precondition.
struct ControllerSpec {
  std::string name;
  ValueFunctionSpec step_value;  // kind must be contractive
  std::function<double(const LedgerState&)> output;
  std::function<double(Height)> target;
  double rel_tol = 1e-9;
};

/// Chooses the action taken at step k; nullopt = no action this step.
using Policy = std::function<std::optional<std::pair<std::uint32_t, MethodAction>>(
    const LedgerState&, Height, Rng&)>;

/// Exogenous per-step update (reward minting, target motion); runs before the
/// policy each step.
using Driver = std::function<void(LedgerState&, Height)>;

struct ControllerRow {
  Height k = 0;
  double output = 0;
  double target = 0;
  double v = 0;
};

struct ControllerRun {
  std::vector<ControllerRow> rows;  // k = 0..horizon
  double max_v = 0;
  double final_v = 0;
  /// Tracking is "within neighborhood" when no step's deviation exceeds the
  /// initial deviation (plus tolerance): a target outrunning the contraction
  /// makes V grow and trips this flag rather than being hidden.
  double neighborhood = 0;
  bool within_neighborhood = true;
  CheckReport precondition;
};

struct UncontractiveContractError : std::runtime_error {
  explicit UncontractiveContractError(CheckReport report);
  CheckReport report;
};

ControllerRun run_controller(const ControllerSpec& spec,
                             const ContractSpec& contract,
                             const StateSampler& precheck_sampler,
                             const CheckBudget& precheck_budget,
                             LedgerState initial, const Policy& policy,
                             const Driver& driver, Height horizon,
                             std::uint64_t seed);

namespace builtin {

/// Guarded sends: args {from, to, amount}, amount covered by the sender's
/// balance at application time.
ContractSpec transfers();

/// The same action space with the budget guard removed: amounts range over
/// 1..max_amount regardless of the sender's balance.
ContractSpec transfers_unguarded(Amount max_amount);

/// One no-op method; U is a single empty action.
ContractSpec identity();

/// Sends that additionally tally fee_rate * amount into the contract's
/// variable on account 0; every method application grows the tally.
ContractSpec fee_accumulator(double fee_rate);

/// Gauge variable on account 0 chases the target variable on account 1;
/// the single method halves the gap exactly.
ContractSpec deviation_halving();

/// Halving plus a method that steps the gauge away from the target.
ContractSpec deviation_halving_sabotaged();

ValueFunctionSpec supply_vf();                  // 1'x, exact, invariant
ValueFunctionSpec positivity_vf();              // -sum min(0, x_i), exact, invariant
ValueFunctionSpec fee_total_vf(double epsilon); // fee tally, monotone(epsilon)
ValueFunctionSpec deviation_vf(double gamma);   // |gauge - target|, contractive

}  // namespace builtin

}  // namespace ledgerlab::valuefn
