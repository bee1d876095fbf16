#include "ledgerlab/consensus.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace ledgerlab::consensus {

PsiScore psi_trusted(const ledger::Chain& chain) {
  PsiScore s;
  for (const ledger::Block& b : chain.blocks()) s.total_work += b.work;
  s.tiebreak = ledger::block_digest(chain.head());
  return s;
}

PsiOutcome psi(const ledger::Chain& chain, const ledger::ContractHost* host) {
  auto replay = ledger::replay_chain(chain, host);
  if (!replay.result) {
    auto res = std::move(replay.result);
    res.detail = "InvalidChain: " + res.detail;
    return {std::move(res), {}};
  }
  return {ledger::ValidationResult::ok(), psi_trusted(chain)};
}

const ledger::Chain& resolve(const ledger::Chain& a, const ledger::Chain& b) {
  if (ledger::block_digest(a.genesis()) != ledger::block_digest(b.genesis()))
    throw GenesisMismatchError();
  return psi_trusted(a) < psi_trusted(b) ? b : a;
}

Topology Topology::complete(std::uint32_t n) {
  Topology t;
  t.node_count = n;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j) t.edges.emplace_back(i, j);
  return t;
}

Topology Topology::ring(std::uint32_t n) {
  Topology t;
  t.node_count = n;
  for (std::uint32_t i = 0; i + 1 < n; ++i) t.edges.emplace_back(i, i + 1);
  if (n > 2) t.edges.emplace_back(0, n - 1);
  return t;
}

namespace {

std::vector<std::vector<NodeId>> adjacency(
    std::uint32_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::vector<NodeId>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

std::vector<std::uint32_t> component_labels(
    std::uint32_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  auto adj = adjacency(n, edges);
  std::vector<std::uint32_t> label(n, n);
  std::uint32_t next = 0;
  for (std::uint32_t start = 0; start < n; ++start) {
    if (label[start] != n) continue;
    std::deque<NodeId> frontier{start};
    label[start] = next;
    while (!frontier.empty()) {
      NodeId v = frontier.front();
      frontier.pop_front();
      for (NodeId w : adj[v])
        if (label[w] == n) {
          label[w] = next;
          frontier.push_back(w);
        }
    }
    ++next;
  }
  return label;
}

}  // namespace

Topology Topology::random(std::uint32_t n, double edge_prob, Rng& rng) {
  Topology t;
  t.node_count = n;
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (rng.chance(edge_prob)) t.edges.emplace_back(i, j);
  // Chain stray components to the first node of component 0.
  auto label = component_labels(n, t.edges);
  std::vector<bool> linked(n, false);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (label[v] == 0 || linked[label[v]]) continue;
    t.edges.emplace_back(std::min<NodeId>(0, v), std::max<NodeId>(0, v));
    linked[label[v]] = true;
  }
  std::sort(t.edges.begin(), t.edges.end());
  return t;
}

bool Topology::connected() const {
  if (node_count == 0) return true;
  auto label = component_labels(node_count, edges);
  return std::all_of(label.begin(), label.end(),
                     [](std::uint32_t l) { return l == 0; });
}

std::uint32_t Topology::diameter() const {
  // Uniform latency per hop, so BFS distance times latency is exact.
  auto adj = adjacency(node_count, edges);
  std::uint32_t worst = 0;
  for (std::uint32_t s = 0; s < node_count; ++s) {
    std::vector<std::uint32_t> dist(node_count,
                                    std::numeric_limits<std::uint32_t>::max());
    std::deque<NodeId> frontier{s};
    dist[s] = 0;
    while (!frontier.empty()) {
      NodeId v = frontier.front();
      frontier.pop_front();
      for (NodeId w : adj[v])
        if (dist[w] == std::numeric_limits<std::uint32_t>::max()) {
          dist[w] = dist[v] + 1;
          frontier.push_back(w);
        }
    }
    for (std::uint32_t d : dist)
      if (d != std::numeric_limits<std::uint32_t>::max())
        worst = std::max(worst, d);
  }
  return worst * latency;
}

SimNetwork::SimNetwork(Topology topology, MiningPolicy mining,
                       std::unique_ptr<rewards::RewardSchedule> schedule,
                       ledger::LedgerState genesis_state,
                       const ledger::ContractHost* host)
    : topology_(std::move(topology)),
      mining_(mining),
      schedule_(std::move(schedule)),
      host_(host) {
  ledger::Chain genesis_chain = ledger::Chain::from_genesis(genesis_state);
  nodes_.resize(topology_.node_count);
  seen_.resize(topology_.node_count);
  for (std::uint32_t i = 0; i < topology_.node_count; ++i) {
    nodes_[i].id = i;
    nodes_[i].chain = genesis_chain;
    nodes_[i].controlled_accounts = {static_cast<AccountId>(i)};
  }
  for (auto [a, b] : topology_.edges) {
    nodes_[a].peers.push_back(b);
    nodes_[b].peers.push_back(a);
    latency_[{a, b}] = topology_.latency;
  }
  for (Node& n : nodes_) std::sort(n.peers.begin(), n.peers.end());
}

bool SimNetwork::edge_open(NodeId a, NodeId b) const {
  auto key = std::minmax(a, b);
  return latency_.contains({key.first, key.second}) &&
         !severed_.contains({key.first, key.second});
}

std::uint32_t SimNetwork::edge_latency(NodeId a, NodeId b) const {
  auto key = std::minmax(a, b);
  auto it = latency_.find({key.first, key.second});
  return it == latency_.end() ? 1 : it->second;
}

void SimNetwork::push_head(const Node& node) {
  auto chain = std::make_shared<const ledger::Chain>(node.chain);
  for (NodeId peer : node.peers) {
    if (!edge_open(node.id, peer)) continue;
    queue_.push_back(Message{round_ + edge_latency(node.id, peer), next_seq_++,
                             peer, chain});
  }
}

void SimNetwork::broadcast_raw(NodeId from, ledger::Chain chain) {
  auto shared = std::make_shared<const ledger::Chain>(std::move(chain));
  for (NodeId peer : nodes_[from].peers) {
    if (!edge_open(from, peer)) continue;
    queue_.push_back(Message{round_ + edge_latency(from, peer), next_seq_++,
                             peer, shared});
  }
}

void SimNetwork::deliver(const Message& msg) {
  stats_.delivered++;
  Node& node = nodes_[msg.to];
  const Digest head = ledger::block_digest(msg.chain->head());
  if (!seen_[msg.to].insert(head).second) return;  // already processed
  if (ledger::block_digest(msg.chain->genesis()) !=
      ledger::block_digest(node.chain.genesis())) {
    stats_.dropped_invalid++;
    return;
  }
  if (!ledger::replay_chain(*msg.chain, host_).result) {
    stats_.dropped_invalid++;
    return;
  }
  if (psi_trusted(node.chain) < psi_trusted(*msg.chain)) {
    node.chain = *msg.chain;
    stats_.adopted++;
  }
}

void SimNetwork::step_round(const WorkloadFn& workload, RngStreams& rngs) {
  round_ += 1;

  // Phase 1: deliver gossip due this round, in scheduling order.
  std::vector<Message> due;
  std::erase_if(queue_, [&](const Message& m) {
    if (m.deliver_round != round_) return false;
    due.push_back(m);
    return true;
  });
  std::sort(due.begin(), due.end(),
            [](const Message& a, const Message& b) { return a.seq < b.seq; });
  for (const Message& m : due) deliver(m);

  // Phase 2: mining.
  const bool mining_open =
      mining_.stop_round == 0 || round_ <= mining_.stop_round;
  if (mining_open && !nodes_.empty()) {
    const double p = std::min(1.0, mining_.rate / nodes_.size());
    for (Node& node : nodes_) {
      if (!rngs.mining.chance(p)) continue;
      const ledger::Block& head = node.chain.head();
      ledger::TransactionBlock txs;
      txs.height = head.txs.height + 1;
      txs.txs = workload ? workload(node, head.state, rngs.workload)
                         : std::vector<ledger::Transaction>{};
      const Amount mu = schedule_ ? schedule_->mu(txs.height) : 0;
      if (mu > 0)
        txs.reward = {mu, rewards::DistributionVector::single(
                              node.controlled_accounts.front())};
      auto outcome = ledger::apply_block(head.state, txs, host_);
      if (!outcome.result) continue;  // workload bug; skip the block
      ledger::Block block;
      block.state = std::move(outcome.state);
      block.txs = std::move(txs);
      block.parent_link = ledger::block_digest(head);
      block.work = mining_.work == MiningPolicy::Work::constant
                       ? mining_.work_lo
                       : rngs.mining.real(mining_.work_lo, mining_.work_hi);
      node.chain.append(std::move(block));
      seen_[node.id].insert(ledger::block_digest(node.chain.head()));
      stats_.mined++;
    }
  }

  // Phase 3: every node pushes its head chain to its peers.
  for (const Node& node : nodes_) push_head(node);

  update_agreement();
}

void SimNetwork::update_agreement() {
  auto report = convergence_report();
  const bool agreed = report.agreement == 1.0;
  if (agreed && !was_agreed_) consensus_round_ = round_;
  if (!agreed) consensus_round_.reset();
  was_agreed_ = agreed;
}

ConvergenceReport SimNetwork::convergence_report() const {
  ConvergenceReport report;
  std::map<Digest, std::uint32_t> histogram;
  for (const Node& node : nodes_)
    histogram[ledger::block_digest(node.chain.head())]++;
  report.head_histogram.assign(histogram.begin(), histogram.end());
  std::stable_sort(
      report.head_histogram.begin(), report.head_histogram.end(),
      [](const auto& a, const auto& b) { return a.second > b.second; });
  std::uint32_t best =
      report.head_histogram.empty() ? 0 : report.head_histogram.front().second;
  report.agreement =
      nodes_.empty() ? 1.0 : static_cast<double>(best) / nodes_.size();
  report.rounds_to_consensus = consensus_round_;
  return report;
}

void SimNetwork::split(const std::vector<std::vector<NodeId>>& groups) {
  std::vector<std::uint32_t> group_of(topology_.node_count,
                                      static_cast<std::uint32_t>(groups.size()));
  for (std::uint32_t g = 0; g < groups.size(); ++g)
    for (NodeId v : groups[g]) group_of[v] = g;
  for (auto [a, b] : topology_.edges)
    if (group_of[a] != group_of[b]) severed_.insert({a, b});
}

const ledger::Chain& SimNetwork::psi_max_chain() const {
  const ledger::Chain* best = &nodes_.front().chain;
  for (const Node& node : nodes_)
    if (psi_trusted(*best) < psi_trusted(node.chain)) best = &node.chain;
  return *best;
}

}  // namespace ledgerlab::consensus
