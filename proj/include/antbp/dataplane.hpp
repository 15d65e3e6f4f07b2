#pragma once
// The physical forwarding plane with per-neighbor FIFO queues: packets are
// bound to a next hop on arrival (Q_ii -> Q_ij) by a probabilistic policy, and
// links drain commodity-blind under a max-weight schedule.
#include <deque>
#include <memory>
#include <vector>

#include "antbp/rng.hpp"
#include "antbp/scheduling.hpp"
#include "antbp/topology.hpp"
#include "antbp/traffic.hpp"

namespace antbp {

struct Packet {
  uint32_t id = 0;
  int32_t src = -1;
  int32_t commodity = -1;   // destination node
  int32_t injected_at = -1;
  int32_t delivered_at = -1;  // -1 while in flight
  int32_t hops = 0;
};

// Next-hop distribution over the alive out-links of a node, per commodity.
class ForwardingPolicy {
 public:
  virtual ~ForwardingPolicy() = default;
  // probabilities aligned with g.out_links(node); must sum to 1
  virtual void probs(const NetworkGraph& g, int node, int commodity,
                     std::vector<double>& out) const = 0;
  // samples an out-link id; throws if the node has no alive out-links
  int sample(const NetworkGraph& g, int node, int commodity, Rng& rng) const;
};

// per-(link, commodity) transfer performed in one slot
struct Move {
  int link = -1, commodity = -1;
  int count = 0;
};

struct SlotReport {
  int t = -1;
  long injected = 0;
  long delivered = 0;
  long backlog = 0;        // total packets queued after the slot
  double routing_cost = 0.0;  // sum over moves of count * (B_dst - B_src)
  int active_links = 0;
  std::vector<Move> moves;
};

class DataPlane {
 public:
  void init(const NetworkGraph* g);
  void on_topology_extended();  // queue vectors follow links added later

  // exogenous arrivals; src == commodity delivers immediately
  void inject(const std::vector<ArrivalEvent>& events, int t);
  // drain every Q_ii through the policy, FIFO, node id order
  void forward_undecided(const ForwardingPolicy& policy, Rng& rng);
  // u_ij = |Q_ij| * realized_rate
  void compute_utilities(const std::vector<double>& realized,
                         std::vector<double>& out) const;
  // pop min(|Q_ij|, rate) from each active link; delivered packets leave the
  // system, others land in the destination's Q_jj
  void transmit(const Schedule& schedule, const std::vector<double>& realized, int t,
                const BiasField& bias, SlotReport& report);
  // move a dead link's queue back to its source's undecided queue, FIFO order
  void revert_link(int link);

  long backlog() const { return backlog_; }
  long injected_total() const { return injected_total_; }
  long delivered_total() const { return delivered_total_; }
  // queued packets of one commodity at one node (undecided + all out-links)
  long commodity_count(int node, int commodity) const {
    return counts_[size_t(node) * n_ + commodity];
  }
  const std::vector<Packet>& packets() const { return packets_; }
  const std::deque<uint32_t>& node_queue(int node) const { return q_node_[node]; }
  const std::deque<uint32_t>& link_queue(int link) const { return q_link_[link]; }

  // recounts queues from scratch and checks the incremental counters
  void check_counts() const;

 private:
  const NetworkGraph* g_ = nullptr;
  int n_ = 0;
  std::vector<Packet> packets_;
  std::vector<std::deque<uint32_t>> q_node_, q_link_;
  std::vector<long> counts_;  // [node * n + commodity]
  long backlog_ = 0, injected_total_ = 0, delivered_total_ = 0;
};

// One full slot under static conditions: inject, forward, utilities, schedule
// (LGS), transmit. The scenario runner replicates this pipeline when failures
// or pauses interleave.
SlotReport dataplane_step(DataPlane& dp, const NetworkGraph& g, const ConflictGraph& cg,
                          const ForwardingPolicy& policy, const LinkRateModel& rates,
                          const BiasField& bias, const std::vector<ArrivalEvent>& arrivals,
                          Rng& rate_rng, Rng& forward_rng, int t);

}  // namespace antbp
