#include "antbp/traffic.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace antbp {

std::vector<FlowSpec> sample_flows(const NetworkGraph& g, const TrafficParams& p, Rng& rng) {
  int n = g.node_count();
  if (n < 2) throw std::invalid_argument("sample_flows: need at least 2 nodes");
  if (p.horizon < 100)
    throw std::invalid_argument("sample_flows: horizon must be >= 100");
  int lo = int(std::floor(0.15 * n));
  int hi = int(std::ceil(0.30 * n));
  if (lo < 1) lo = 1;
  int count = int(rng.uniform_int(lo, hi));
  std::vector<FlowSpec> flows;
  std::set<std::pair<int, int>> used;
  while (int(flows.size()) < count) {
    int src = int(rng.uniform_int(0, n - 1));
    int dst = int(rng.uniform_int(0, n - 1));
    if (src == dst || used.count({src, dst})) continue;
    used.insert({src, dst});
    FlowSpec f;
    f.src = src;
    f.dst = dst;
    f.base_rate = rng.uniform(0.2, 1.0);
    f.kind = rng.bernoulli(p.p_bursty) ? FlowKind::Bursty : FlowKind::Streaming;
    if (f.kind == FlowKind::Bursty) {
      f.load = p.bursty_load;
      f.burst_start = int(rng.uniform_int(0, p.horizon - 100));
      f.burst_len = p.burst_len;
    } else {
      f.load = p.streaming_load;
    }
    flows.push_back(f);
  }
  return flows;
}

std::vector<ArrivalEvent> arrivals_at(const std::vector<FlowSpec>& flows, int t, Rng& rng) {
  std::vector<ArrivalEvent> out;
  for (const auto& f : flows) {
    double rate = f.rate_at(t);
    if (rate <= 0.0) continue;
    int k = int(rng.poisson(rate));
    if (k > 0) out.push_back({f.src, f.dst, k});
  }
  return out;
}

std::vector<FlowSpec> virtualize_flows(const std::vector<FlowSpec>& flows,
                                       VirtualizationMode mode,
                                       double virtual_streaming_load,
                                       double virtual_bursty_load,
                                       VirtualRateBasis basis) {
  std::vector<FlowSpec> out;
  out.reserve(flows.size());
  for (const auto& f : flows) {
    FlowSpec v = f;
    if (basis == VirtualRateBasis::Unit) v.base_rate = 1.0;
    if (mode == VirtualizationMode::StreamingAll) {
      v.kind = FlowKind::Streaming;
      v.burst_start = v.burst_len = 0;
      v.load = virtual_streaming_load >= 0.0 ? virtual_streaming_load : f.load;
    } else {
      // mirror: kinds preserved, bursts replayed from the start of the phase
      if (v.kind == FlowKind::Bursty) {
        v.burst_start = 0;
        v.load = virtual_bursty_load >= 0.0 ? virtual_bursty_load : f.load;
      } else {
        v.load = virtual_streaming_load >= 0.0 ? virtual_streaming_load : f.load;
      }
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace antbp
