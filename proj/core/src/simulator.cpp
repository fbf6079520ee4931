#include "uavroute/simulator.hpp"

#include <algorithm>
#include <stdexcept>

namespace uavroute {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kGenerate: return "generate";
    case EventKind::kOverflow: return "overflow";
    case EventKind::kTransmit: return "transmit";
    case EventKind::kDeliver: return "deliver";
    case EventKind::kForwardLoss: return "loss";
    case EventKind::kExpire: return "expire";
  }
  return "unknown";
}

void write_event_log(std::ostream& out, std::span<const SimEvent> events) {
  auto node = [&out](NodeId n) -> std::ostream& {
    if (n == kGbsNode) return out << "gbs";
    return out << n;
  };
  for (const auto& e : events) {
    out << e.slot << ' ' << to_string(e.kind) << ' ';
    node(e.src) << ' ';
    node(e.dst) << ' ' << e.packet << '\n';
  }
}

Simulator::Simulator(SimConfig config) : config_(std::move(config)) {
  config_.validate();
  reset(0);
}

void Simulator::reset(std::uint64_t seed) {
  rng_ = RngStreams(seed);
  slot_ = 0;
  slot_open_ = false;
  packets_.clear();
  flows_.clear();
  ledgers_.clear();
  events_.clear();
  links_ = LinkTable{};
  uavs_ = init_positions(config_, rng_.mobility);
  queues_.clear();
  queues_.reserve(uavs_.size());
  for (int m = 0; m < config_.num_uavs; ++m) {
    queues_.emplace_back(
        static_cast<int>(rng_.traffic.uniform_int(config_.buffer_min, config_.buffer_max)));
  }
}

void Simulator::log(EventKind kind, NodeId src, NodeId dst, PacketId packet) {
  if (log_events_) events_.push_back({slot_, kind, src, dst, packet});
}

bool Simulator::needs_decision(NodeId m) const {
  return !queues_[m].empty() && !links_.gbs_reachable[m];
}

void Simulator::begin_slot() {
  if (done()) throw std::logic_error("simulator: episode already finished");
  if (slot_open_) throw std::logic_error("simulator: begin_slot called twice");
  const int m_count = config_.num_uavs;
  if (slot_ > 0) {
    for (auto& uav : uavs_) uav = step(uav, config_, rng_.mobility);
  }
  if (trajectory_out_ != nullptr) write_trajectory_rows(*trajectory_out_, slot_, uavs_);

  pending_ledger_.reset(slot_, m_count);
  const double t = now();
  for (NodeId m = 0; m < m_count; ++m) {
    reclassify(queues_[m], packets_, t);
    if (config_.purge_expired) {
      for (PacketId id : purge_expired(queues_[m], packets_, t)) {
        ++pending_ledger_.expired[m];
        log(EventKind::kExpire, m, m, id);
      }
    }
  }

  const auto new_flows =
      generate_traffic(slot_, config_, rng_.traffic, static_cast<FlowId>(flows_.size()));
  for (const auto& flow : new_flows) {
    const auto first = static_cast<PacketId>(packets_.size());
    auto segment = segment_flow(flow, config_.packet_bits, first);
    std::vector<PacketId> ids;
    ids.reserve(segment.size());
    for (auto& p : segment) {
      ids.push_back(p.id);
      log(EventKind::kGenerate, flow.source, flow.source, p.id);
      packets_.push_back(std::move(p));
    }
    const auto result = enqueue(ids, packets_, queues_[flow.source], t);
    pending_ledger_.overflow_loss[flow.source] += result.overflow;
    for (PacketId id : result.rejected) log(EventKind::kOverflow, flow.source, flow.source, id);
    flows_.push_back(flow);
  }

  std::vector<NodeId> transmitters;
  std::vector<Vec3> positions;
  positions.reserve(uavs_.size());
  for (NodeId m = 0; m < m_count; ++m) {
    positions.push_back(uavs_[m].position);
    if (!queues_[m].empty()) transmitters.push_back(m);
  }
  links_ = build_link_table(positions, transmitters, config_, rng_.channel);
  if (link_out_ != nullptr) dump_links();
  slot_open_ = true;
}

void Simulator::dump_links() const {
  const int m_count = links_.num_uavs;
  for (NodeId tx = 0; tx < m_count; ++tx) {
    for (NodeId rx = 0; rx < m_count; ++rx) {
      if (tx == rx) continue;
      const auto i = links_.index(tx, rx);
      *link_out_ << slot_ << ',' << tx << ',' << rx << ',' << linear_to_db(links_.sinr[i]) << ','
                 << links_.rate[i] << ',' << links_.capacity[i] << '\n';
    }
    *link_out_ << slot_ << ',' << tx << ",gbs," << linear_to_db(links_.gbs_sinr[tx]) << ','
               << links_.gbs_rate[tx] << ',' << links_.gbs_capacity[tx] << '\n';
  }
}

void Simulator::deliver_direct(NodeId m, SlotLedger& ledger) {
  auto& queues = queues_[m];
  const Priority sel = *queues.selected();
  auto& q = queues.queue(sel);
  const auto q_sel = static_cast<std::int64_t>(q.size());
  const std::int64_t cap = links_.gbs_capacity[m];
  const std::int64_t sent = std::min(q_sel, cap);
  for (std::int64_t i = 0; i < sent; ++i) {
    const PacketId id = q.front();
    q.pop_front();
    Packet& p = packets_[id];
    p.fate = PacketFate::kDelivered;
    p.arrival_slot = slot_;
    p.hop_trace.push_back(kGbsNode);
    ledger.delivered.push_back(id);
    log(EventKind::kDeliver, m, kGbsNode, id);
  }
  ledger.dequeued[m] = q_sel;
  ledger.direct_delivered[m] = sent;
  ledger.retained[m] = q_sel - sent;
  ledger.transfers.push_back({m, kGbsNode, q_sel, cap, q_sel, sent});
}

void Simulator::execute(std::span<const std::optional<SplitDecision>> decisions) {
  if (!slot_open_) throw std::logic_error("simulator: execute called before begin_slot");
  const int m_count = config_.num_uavs;
  if (static_cast<int>(decisions.size()) != m_count) {
    throw std::invalid_argument("simulator: one decision slot per UAV is required");
  }
  SlotLedger ledger = std::move(pending_ledger_);
  const double t = now();

  std::vector<std::int64_t> free_snapshot(static_cast<std::size_t>(m_count));
  for (NodeId m = 0; m < m_count; ++m) free_snapshot[m] = queues_[m].free();

  struct Plan {
    NodeId owner = 0;
    Priority queue = Priority::kLow;
    std::vector<std::int64_t> shares;
    std::vector<std::int64_t> demand;
    std::vector<std::int64_t> grant;
  };
  std::vector<Plan> plans;
  std::vector<std::vector<ReceiverDemand>> demands(static_cast<std::size_t>(m_count));
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> demand_slot(
      static_cast<std::size_t>(m_count));

  for (NodeId m = 0; m < m_count; ++m) {
    if (queues_[m].empty()) continue;
    if (links_.gbs_reachable[m]) {
      deliver_direct(m, ledger);
      continue;
    }
    const auto& cand = links_.candidates[m];
    std::vector<double> ratios(static_cast<std::size_t>(config_.max_neighbors + 1), 0.0);
    ratios[0] = 1.0;
    if (const auto& d = decisions[m]; d.has_value()) {
      validate_split(d->ratios, static_cast<int>(cand.size()), config_.max_neighbors);
      ratios = d->ratios;
    }
    Plan plan;
    plan.owner = m;
    plan.queue = *queues_[m].selected();
    const auto q_sel = static_cast<std::int64_t>(queues_[m].length(plan.queue));
    plan.shares = largest_remainder_shares(ratios, q_sel);
    plan.demand.assign(cand.size() + 1, 0);
    plan.grant.assign(cand.size() + 1, 0);
    for (std::size_t n = 1; n <= cand.size(); ++n) {
      const NodeId rx = cand[n - 1];
      plan.demand[n] = std::min(plan.shares[n], links_.link_capacity(m, rx));
      if (plan.demand[n] > 0) {
        demand_slot[rx].emplace_back(plans.size(), n);
        demands[rx].push_back({m, plan.demand[n]});
      }
    }
    ledger.dequeued[m] = q_sel;
    plans.push_back(std::move(plan));
  }

  for (NodeId rx = 0; rx < m_count; ++rx) {
    if (demands[rx].empty()) continue;
    const auto grants = arbitrate_receivers(demands[rx], free_snapshot[rx]);
    for (std::size_t i = 0; i < grants.size(); ++i) {
      const auto [plan_index, n] = demand_slot[rx][i];
      plans[plan_index].grant[n] = grants[i];
    }
  }

  std::vector<std::vector<PacketId>> arrivals(static_cast<std::size_t>(m_count));
  for (const Plan& plan : plans) {
    const NodeId m = plan.owner;
    auto& q = queues_[m].queue(plan.queue);
    const auto& cand = links_.candidates[m];
    for (std::size_t n = 1; n <= cand.size(); ++n) {
      const NodeId rx = cand[n - 1];
      const std::int64_t planned = plan.shares[n];
      const std::int64_t sent = plan.grant[n];
      for (std::int64_t i = 0; i < planned; ++i) {
        const PacketId id = q.front();
        q.pop_front();
        Packet& p = packets_[id];
        if (i < sent) {
          p.hop_trace.push_back(rx);
          arrivals[rx].push_back(id);
          log(EventKind::kTransmit, m, rx, id);
        } else {
          p.fate = PacketFate::kForwardLoss;
          log(EventKind::kForwardLoss, m, rx, id);
        }
      }
      ledger.forward_loss[m] += planned - sent;
      if (planned > 0) {
        ledger.transfers.push_back({m, rx, planned, links_.link_capacity(m, rx), sent, sent});
      }
    }
    ledger.retained[m] = plan.shares[0];
  }

  for (NodeId rx = 0; rx < m_count; ++rx) {
    if (arrivals[rx].empty()) continue;
    const auto result = enqueue(arrivals[rx], packets_, queues_[rx], t);
    if (result.overflow != 0) throw std::logic_error("simulator: receiver grant exceeded buffer");
  }

  ledgers_.push_back(std::move(ledger));
  slot_open_ = false;
  ++slot_;
}

Conservation Simulator::conservation() const {
  Conservation c;
  c.generated = static_cast<std::int64_t>(packets_.size());
  for (const Packet& p : packets_) {
    switch (p.fate) {
      case PacketFate::kDelivered: ++c.delivered; break;
      case PacketFate::kForwardLoss: ++c.forward_loss; break;
      case PacketFate::kOverflow: ++c.overflow_loss; break;
      case PacketFate::kExpired: ++c.expired; break;
      case PacketFate::kQueued: break;
    }
  }
  for (const auto& q : queues_) c.queued += q.size();
  return c;
}

EpisodeMetrics Simulator::finalize() const {
  return finalize_metrics(packets_, flows_, config_.slot_len, config_.loss_cap);
}

}  // namespace uavroute
