#include "antbp/dataplane.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace antbp {

int ForwardingPolicy::sample(const NetworkGraph& g, int node, int commodity,
                             Rng& rng) const {
  const auto& out = g.out_links(node);
  if (out.empty())
    throw std::runtime_error("forwarding: node has no alive out-links");
  thread_local std::vector<double> p;
  probs(g, node, commodity, p);
  double u = rng.uniform01();
  double acc = 0.0;
  for (size_t k = 0; k < out.size(); ++k) {
    acc += p[k];
    if (u < acc) return out[k];
  }
  return out.back();  // float slack lands on the last entry
}

void DataPlane::init(const NetworkGraph* g) {
  g_ = g;
  n_ = g->node_count();
  packets_.clear();
  q_node_.assign(n_, {});
  q_link_.assign(g->link_count(), {});
  counts_.assign(size_t(n_) * n_, 0);
  backlog_ = injected_total_ = delivered_total_ = 0;
}

void DataPlane::on_topology_extended() { q_link_.resize(g_->link_count()); }

void DataPlane::inject(const std::vector<ArrivalEvent>& events, int t) {
  for (const auto& ev : events) {
    for (int k = 0; k < ev.count; ++k) {
      Packet p;
      p.id = uint32_t(packets_.size());
      p.src = ev.node;
      p.commodity = ev.commodity;
      p.injected_at = t;
      ++injected_total_;
      if (ev.node == ev.commodity) {  // degenerate: born at destination
        p.delivered_at = t;
        ++delivered_total_;
        packets_.push_back(p);
        continue;
      }
      packets_.push_back(p);
      q_node_[ev.node].push_back(p.id);
      ++counts_[size_t(ev.node) * n_ + ev.commodity];
      ++backlog_;
    }
  }
}

void DataPlane::forward_undecided(const ForwardingPolicy& policy, Rng& rng) {
  for (int i = 0; i < n_; ++i) {
    auto& q = q_node_[i];
    while (!q.empty()) {
      uint32_t id = q.front();
      q.pop_front();
      int link = policy.sample(*g_, i, packets_[id].commodity, rng);
      q_link_[link].push_back(id);
    }
  }
}

void DataPlane::compute_utilities(const std::vector<double>& realized,
                                  std::vector<double>& out) const {
  out.assign(g_->link_count(), 0.0);
  for (int e = 0; e < g_->link_count(); ++e)
    if (g_->alive[e]) out[e] = double(q_link_[e].size()) * realized[e];
}

void DataPlane::transmit(const Schedule& schedule, const std::vector<double>& realized,
                         int t, const BiasField& bias, SlotReport& report) {
  for (int e = 0; e < g_->link_count(); ++e) {
    if (!schedule[e]) continue;
    if (!g_->alive[e]) throw std::runtime_error("transmit: dead link scheduled");
    ++report.active_links;
    auto& q = q_link_[e];
    long cap = long(realized[e]);
    long mu = std::min(long(q.size()), cap);
    if (mu <= 0) continue;
    int i = g_->links[e].src, j = g_->links[e].dst;
    // commodity-blind drain; per-commodity counts recovered for the report
    thread_local std::vector<std::pair<int, int>> by_comm;
    by_comm.clear();
    for (long k = 0; k < mu; ++k) {
      uint32_t id = q.front();
      q.pop_front();
      Packet& p = packets_[id];
      ++p.hops;
      --counts_[size_t(i) * n_ + p.commodity];
      bool found = false;
      for (auto& [c, cnt] : by_comm)
        if (c == p.commodity) {
          ++cnt;
          found = true;
          break;
        }
      if (!found) by_comm.emplace_back(p.commodity, 1);
      if (p.commodity == j) {
        p.delivered_at = t + 1;  // the slot-t transmission completes at t+1
        ++delivered_total_;
        ++report.delivered;
        --backlog_;
      } else {
        q_node_[j].push_back(id);
        ++counts_[size_t(j) * n_ + p.commodity];
      }
    }
    for (auto& [c, cnt] : by_comm) {
      report.moves.push_back({e, c, cnt});
      report.routing_cost += double(cnt) * (bias.at(j, c) - bias.at(i, c));
    }
  }
  report.backlog = backlog_;
}

void DataPlane::revert_link(int link) {
  auto& q = q_link_[link];
  int i = g_->links[link].src;
  while (!q.empty()) {
    q_node_[i].push_back(q.front());
    q.pop_front();
  }
}

void DataPlane::check_counts() const {
  std::vector<long> fresh(size_t(n_) * n_, 0);
  long total = 0;
  for (int i = 0; i < n_; ++i)
    for (uint32_t id : q_node_[i]) {
      ++fresh[size_t(i) * n_ + packets_[id].commodity];
      ++total;
    }
  for (int e = 0; e < g_->link_count(); ++e)
    for (uint32_t id : q_link_[e]) {
      ++fresh[size_t(g_->links[e].src) * n_ + packets_[id].commodity];
      ++total;
    }
  if (fresh != counts_) throw std::runtime_error("dataplane: commodity counts drifted");
  if (total != backlog_) throw std::runtime_error("dataplane: backlog counter drifted");
  if (injected_total_ != delivered_total_ + backlog_)
    throw std::runtime_error("dataplane: packet conservation violated");
}

SlotReport dataplane_step(DataPlane& dp, const NetworkGraph& g, const ConflictGraph& cg,
                          const ForwardingPolicy& policy, const LinkRateModel& rates,
                          const BiasField& bias, const std::vector<ArrivalEvent>& arrivals,
                          Rng& rate_rng, Rng& forward_rng, int t) {
  SlotReport report;
  report.t = t;
  std::vector<double> realized;
  rates.realized_all(g, rate_rng, realized);
  for (const auto& ev : arrivals) report.injected += ev.count;
  dp.inject(arrivals, t);
  dp.forward_undecided(policy, forward_rng);
  std::vector<double> utility;
  dp.compute_utilities(realized, utility);
  Schedule s = lgs_schedule(cg, utility);
  dp.transmit(s, realized, t, bias, report);
  return report;
}

}  // namespace antbp
