#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ledgerlab/ledger.hpp"
#include "ledgerlab/rewards.hpp"
#include "ledgerlab/rng.hpp"
#include "ledgerlab/types.hpp"

namespace ledgerlab::consensus {

using NodeId = std::uint32_t;

/// Fork-choice score: total work, with the head digest as a deterministic
/// tiebreak so distinct chains are always strictly ordered.
struct PsiScore {
  double total_work = 0;
  Digest tiebreak{};

  friend bool operator==(const PsiScore&, const PsiScore&) = default;
  friend bool operator<(const PsiScore& a, const PsiScore& b) {
    if (a.total_work != b.total_work) return a.total_work < b.total_work;
    return a.tiebreak < b.tiebreak;
  }
};

/// Score of a chain assumed valid (no replay).
PsiScore psi_trusted(const ledger::Chain& chain);

/// Validating form: replays the chain first and reports `InvalidChain` via
/// the result when it does not replay cleanly.
struct PsiOutcome {
  ledger::ValidationResult valid;
  PsiScore score;
};
PsiOutcome psi(const ledger::Chain& chain,
               const ledger::ContractHost* host = nullptr);

struct GenesisMismatchError : std::runtime_error {
  GenesisMismatchError()
      : std::runtime_error("resolve: chains do not share a genesis block") {}
};

/// C* = arg max Psi over the two chains; commutative and idempotent. Both
/// chains must be valid and share a genesis.
const ledger::Chain& resolve(const ledger::Chain& a, const ledger::Chain& b);

struct Node {
  NodeId id = 0;
  ledger::Chain chain;
  std::vector<NodeId> peers;
  std::vector<AccountId> controlled_accounts;
};

struct Topology {
  std::uint32_t node_count = 0;
  std::vector<std::pair<NodeId, NodeId>> edges;  // undirected, first < second
  std::uint32_t latency = 1;                     // rounds per hop

  static Topology complete(std::uint32_t n);
  static Topology ring(std::uint32_t n);
  /// G(n, p); components are chained together afterwards if the draw happens
  /// to disconnect the graph.
  static Topology random(std::uint32_t n, double edge_prob, Rng& rng);

  bool connected() const;
  /// Latency-weighted diameter.
  std::uint32_t diameter() const;
};

struct MiningPolicy {
  double rate = 1.0;  // expected miners per round
  enum class Work { constant, uniform } work = Work::constant;
  double work_lo = 1.0;
  double work_hi = 1.0;
  Height stop_round = 0;  // mining ceases after this round; 0 = never
};

struct NetStats {
  std::uint64_t mined = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped_invalid = 0;
  std::uint64_t adopted = 0;
};

struct ConvergenceReport {
  /// Head digest -> number of nodes holding it, ordered by count descending
  /// then digest.
  std::vector<std::pair<Digest, std::uint32_t>> head_histogram;
  double agreement = 1.0;
  std::optional<Height> rounds_to_consensus;
};

/// Deterministic round-based simulation of the peer-to-peer network: nodes
/// mine against their local belief, push whole chains to peers, and adopt
/// incoming chains through `resolve` after validating them.
class SimNetwork {
 public:
  using WorkloadFn = std::function<std::vector<ledger::Transaction>(
      const Node&, const ledger::LedgerState& working, Rng&)>;

  SimNetwork(Topology topology, MiningPolicy mining,
             std::unique_ptr<rewards::RewardSchedule> schedule,
             ledger::LedgerState genesis_state,
             const ledger::ContractHost* host = nullptr);

  /// One simulation round: deliver due gossip, mine, push heads to peers.
  void step_round(const WorkloadFn& workload, RngStreams& rngs);

  Height round() const { return round_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const NetStats& stats() const { return stats_; }
  std::uint32_t diameter() const { return topology_.diameter(); }

  ConvergenceReport convergence_report() const;

  /// Severs every edge whose endpoints fall in different groups.
  void split(const std::vector<std::vector<NodeId>>& groups);
  void heal() { severed_.clear(); }

  /// Queues `chain` from `from` to its peers without validating it; receivers
  /// still validate and drop. Models a byzantine/broken broadcaster.
  void broadcast_raw(NodeId from, ledger::Chain chain);

  /// Psi-maximal chain across all node beliefs.
  const ledger::Chain& psi_max_chain() const;

  /// Round at which the network most recently reached full agreement, if it
  /// is currently agreed.
  std::optional<Height> consensus_round() const { return consensus_round_; }

 private:
  struct Message {
    Height deliver_round;
    std::uint64_t seq;
    NodeId to;
    std::shared_ptr<const ledger::Chain> chain;
  };

  bool edge_open(NodeId a, NodeId b) const;
  std::uint32_t edge_latency(NodeId a, NodeId b) const;
  void push_head(const Node& node);
  void deliver(const Message& msg);
  void update_agreement();

  Topology topology_;
  MiningPolicy mining_;
  std::unique_ptr<rewards::RewardSchedule> schedule_;
  const ledger::ContractHost* host_;
  std::vector<Node> nodes_;
  std::map<std::pair<NodeId, NodeId>, std::uint32_t> latency_;
  std::set<std::pair<NodeId, NodeId>> severed_;
  std::vector<Message> queue_;
  std::vector<std::set<Digest>> seen_;  // per node: head digests processed
  std::uint64_t next_seq_ = 0;
  Height round_ = 0;
  NetStats stats_;
  std::optional<Height> consensus_round_;
  bool was_agreed_ = true;
};

}  // namespace ledgerlab::consensus
