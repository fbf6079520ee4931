#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "uavroute/config.hpp"
#include "uavroute/forwarding.hpp"
#include "uavroute/metrics.hpp"
#include "uavroute/queueing.hpp"

namespace {

using namespace uavroute;

PacketStore packets_with_deadlines(const std::vector<double>& deadlines) {
  PacketStore store;
  for (std::size_t i = 0; i < deadlines.size(); ++i) {
    Packet p;
    p.id = static_cast<PacketId>(i);
    p.deadline = deadlines[i];
    store.push_back(p);
  }
  return store;
}

std::vector<PacketId> ids(std::size_t n) {
  std::vector<PacketId> out(n);
  std::iota(out.begin(), out.end(), 0u);
  return out;
}

TEST(Queueing, PriorityThresholds) {
  EXPECT_EQ(classify_priority(0.4, 0.0), Priority::kHigh);
  EXPECT_EQ(classify_priority(0.8, 0.0), Priority::kMedium);
  EXPECT_EQ(classify_priority(1.2, 0.0), Priority::kLow);
  EXPECT_EQ(classify_priority(1.5, 1.0), Priority::kHigh);
  EXPECT_EQ(classify_priority(2.0, 1.0), Priority::kMedium);
  EXPECT_EQ(classify_priority(0.0, 1.0), Priority::kHigh);
}

TEST(Queueing, EnqueueRespectsCapacity) {
  PacketStore store = packets_with_deadlines({2, 2, 2, 2, 2});
  PriorityQueues roomy(10);
  auto r = enqueue(ids(5), store, roomy, 0.0);
  EXPECT_EQ(r.accepted, 5);
  EXPECT_EQ(r.overflow, 0);

  store = packets_with_deadlines({2, 2, 2, 2, 2});
  PriorityQueues tight(3);
  r = enqueue(ids(5), store, tight, 0.0);
  EXPECT_EQ(r.accepted, 3);
  EXPECT_EQ(r.overflow, 2);
  EXPECT_EQ(r.rejected, (std::vector<PacketId>{3, 4}));
  EXPECT_EQ(store[4].fate, PacketFate::kOverflow);
  EXPECT_EQ(tight.free(), 0);

  r = enqueue({}, store, roomy, 0.0);
  EXPECT_EQ(r.accepted, 0);
  EXPECT_EQ(r.overflow, 0);
}

TEST(Queueing, ReclassifyMovesAcrossThresholds) {
  PacketStore store = packets_with_deadlines({1.2, 3.0, 0.2});
  PriorityQueues q(10);
  enqueue(ids(3), store, q, 0.0);
  EXPECT_EQ(q.length(Priority::kLow), 2);
  EXPECT_EQ(q.length(Priority::kHigh), 1);
  EXPECT_EQ(reclassify(q, store, 0.3), 1);
  EXPECT_EQ(q.length(Priority::kMedium), 1);
  EXPECT_EQ(q.queue(Priority::kMedium).front(), 0u);
  EXPECT_EQ(reclassify(q, store, 0.3), 0);
  // Late packets stay queued in the top class.
  EXPECT_EQ(reclassify(q, store, 5.0), 2);
  EXPECT_EQ(q.length(Priority::kHigh), 3);
  EXPECT_EQ(q.selected(), Priority::kHigh);
  EXPECT_EQ(q.selected_length(), 3);
}

TEST(Queueing, PurgeExpired) {
  PacketStore store = packets_with_deadlines({0.5, 2.0});
  PriorityQueues q(10);
  enqueue(ids(2), store, q, 0.0);
  const auto gone = purge_expired(q, store, 1.0);
  EXPECT_EQ(gone, std::vector<PacketId>{0});
  EXPECT_EQ(store[0].fate, PacketFate::kExpired);
  EXPECT_EQ(q.size(), 1);
}

TEST(Traffic, ProbabilityEndpoints) {
  SimConfig c;
  c.num_uavs = 5;
  RandomStream rng(1);
  c.traffic_prob = 0.0;
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(generate_traffic(t, c, rng, 0).empty());
  c.traffic_prob = 1.0;
  const auto flows = generate_traffic(3, c, rng, 10);
  ASSERT_EQ(flows.size(), 5u);
  for (std::size_t i = 0; i < flows.size(); ++i) {
    EXPECT_EQ(flows[i].id, 10 + i);
    EXPECT_EQ(flows[i].gen_slot, 3);
    const double mb = flows[i].size_bits / 8e6;
    EXPECT_GE(mb, c.traffic_size_min_mb - 1e-6);
    EXPECT_LE(mb, c.traffic_size_max_mb + 1e-6);
    EXPECT_NEAR(flows[i].deadline, 3 * c.slot_len + c.deadline_base + (mb - 0.5), 1e-6);
  }
}

TEST(Traffic, FlowCountMatchesBinomial) {
  SimConfig c;
  const int slots = c.num_slots();
  const double n = static_cast<double>(c.num_uavs) * slots;
  const double mean = n * c.traffic_prob;
  const double sd = std::sqrt(n * c.traffic_prob * (1.0 - c.traffic_prob));
  double total = 0.0;
  const int seeds = 400;
  for (int s = 0; s < seeds; ++s) {
    RandomStream rng(100 + s);
    for (int t = 0; t < slots; ++t) total += generate_traffic(t, c, rng, 0).size();
  }
  EXPECT_NEAR(mean, 189.0, 0.01);
  EXPECT_NEAR(total / seeds, mean, 3.0 * sd / std::sqrt(seeds));
}

TEST(Forwarding, ValidateSplit) {
  EXPECT_NO_THROW(validate_split(std::vector<double>{0.2, 0.8, 0.0}, 1, 2));
  EXPECT_THROW(validate_split(std::vector<double>{0.2, 0.7, 0.0}, 1, 2), std::invalid_argument);
  EXPECT_THROW(validate_split(std::vector<double>{0.2, 0.4, 0.4}, 1, 2), std::invalid_argument);
  EXPECT_THROW(validate_split(std::vector<double>{1.0, 0.0}, 1, 2), std::invalid_argument);
  EXPECT_THROW(validate_split(std::vector<double>{1.5, -0.5, 0.0}, 1, 2), std::invalid_argument);
}

TEST(Forwarding, LargestRemainderShares) {
  EXPECT_EQ(largest_remainder_shares(std::vector<double>{0.0, 0.5, 0.5}, 90),
            (std::vector<std::int64_t>{0, 45, 45}));
  EXPECT_EQ(largest_remainder_shares(std::vector<double>{1.0, 0.0}, 17),
            (std::vector<std::int64_t>{17, 0}));
  EXPECT_EQ(largest_remainder_shares(std::vector<double>{0.5, 0.5}, 3),
            (std::vector<std::int64_t>{2, 1}));
  RandomStream rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(5);
    double sum = 0.0;
    for (auto& x : w) sum += (x = rng.uniform());
    for (auto& x : w) x /= sum;
    const auto total = rng.uniform_int(0, 500);
    const auto shares = largest_remainder_shares(w, total);
    EXPECT_EQ(std::accumulate(shares.begin(), shares.end(), std::int64_t{0}), total);
    for (std::size_t i = 0; i < w.size(); ++i) {
      EXPECT_LE(std::abs(shares[i] - w[i] * total), 1.0);
    }
  }
}

TEST(Forwarding, ArbitrateReceivers) {
  const std::vector<ReceiverDemand> two{{0, 10}, {1, 10}};
  EXPECT_EQ(arbitrate_receivers(two, 30), (std::vector<std::int64_t>{10, 10}));
  EXPECT_EQ(arbitrate_receivers(two, 10), (std::vector<std::int64_t>{5, 5}));
  const std::vector<ReceiverDemand> skew{{0, 3}, {1, 1}};
  EXPECT_EQ(arbitrate_receivers(skew, 3), (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(arbitrate_receivers(skew, 0), (std::vector<std::int64_t>{0, 0}));
}

// Single-link composition used by the simulator: planned share, capacity clamp, grant.
std::int64_t sent_over_link(std::int64_t planned, std::int64_t capacity, std::int64_t free) {
  const std::vector<ReceiverDemand> d{{0, std::min(planned, capacity)}};
  return arbitrate_receivers(d, free)[0];
}

TEST(Forwarding, SplitHandCases) {
  auto shares = largest_remainder_shares(std::vector<double>{0.0, 1.0, 0.0}, 100);
  EXPECT_EQ(sent_over_link(shares[1], 83, 200), 83);
  EXPECT_EQ(shares[1] - sent_over_link(shares[1], 83, 200), 17);

  shares = largest_remainder_shares(std::vector<double>{0.0, 0.5, 0.5}, 90);
  EXPECT_EQ(sent_over_link(shares[1], 83, 1000), 45);
  EXPECT_EQ(sent_over_link(shares[2], 83, 1000), 45);

  shares = largest_remainder_shares(std::vector<double>{1.0, 0.0, 0.0}, 90);
  EXPECT_EQ(shares[0], 90);
}

Packet delivered(PacketId id, FlowId flow, double deadline, SlotIndex arrival) {
  Packet p;
  p.id = id;
  p.flow = flow;
  p.deadline = deadline;
  p.fate = PacketFate::kDelivered;
  p.arrival_slot = arrival;
  return p;
}

TEST(Metrics, AllOnTime) {
  PacketStore store{delivered(0, 0, 1.0, 3), delivered(1, 0, 1.0, 5)};
  TrafficFlow f;
  f.packet_count = 2;
  f.deadline = 1.0;
  const std::vector<TrafficFlow> flows{f};
  const EpisodeMetrics m = finalize_metrics(store, flows, 0.05, 0.2);
  EXPECT_EQ(m.loss_ratio, 0.0);
  EXPECT_EQ(m.on_time_ratio, 1.0);
  EXPECT_EQ(m.flows_on_time, 1);
  EXPECT_NEAR(m.flow_deviation[0], 0.3 - 1.0, 1e-12);
}

TEST(Metrics, UndeliveredCountInDenominator) {
  PacketStore store{delivered(0, 0, 1.0, 3), delivered(1, 0, 0.1, 5)};
  Packet lost;
  lost.id = 2;
  lost.fate = PacketFate::kForwardLoss;
  store.push_back(lost);
  Packet waiting;
  waiting.id = 3;
  store.push_back(waiting);
  TrafficFlow f;
  f.packet_count = 4;
  const std::vector<TrafficFlow> flows{f};
  const EpisodeMetrics m = finalize_metrics(store, flows, 0.05, 0.2);
  EXPECT_EQ(m.generated, 4);
  EXPECT_EQ(m.delivered_on_time, 1);
  EXPECT_DOUBLE_EQ(m.on_time_ratio, 0.25);
  EXPECT_DOUBLE_EQ(m.loss_ratio, 0.25);
  EXPECT_EQ(m.queued, 1);
  EXPECT_EQ(m.flows_arrived, 0);
  EXPECT_FALSE(m.loss_within_cap);
}

TEST(Metrics, CurveIsMonotoneAndEndsAtDeliveredShare) {
  const std::vector<double> dev{-1.0, -0.05, 0.0, 0.4, 2.5};
  const ArrivalCurve c = cumulative_arrival_curve(dev, 10);
  ASSERT_EQ(c.edges.size(), 61u);
  for (std::size_t i = 1; i < c.fraction.size(); ++i) EXPECT_GE(c.fraction[i], c.fraction[i - 1]);
  EXPECT_DOUBLE_EQ(c.fraction.back(), 0.5);
  EXPECT_DOUBLE_EQ(c.fraction[30], 0.3);
  EXPECT_DOUBLE_EQ(arrival_time(0, 0.05), 0.05);
}

}  // namespace
