#pragma once
// Flow sampling and the Poisson arrival process, plus the mapping from the
// physical flow set to the virtual one used during policy establishment.
#include <vector>

#include "antbp/rng.hpp"
#include "antbp/topology.hpp"

namespace antbp {

enum class FlowKind { Streaming, Bursty };

struct FlowSpec {
  int src = -1, dst = -1;
  double base_rate = 0.0;  // packets/slot before load scaling
  FlowKind kind = FlowKind::Streaming;
  double load = 1.0;  // multiplier applied to base_rate
  int burst_start = 0, burst_len = 0;  // bursty: active on [start, start+len)

  bool active_at(int t) const {
    return kind == FlowKind::Streaming || (t >= burst_start && t < burst_start + burst_len);
  }
  double rate_at(int t) const { return active_at(t) ? base_rate * load : 0.0; }
};

struct ArrivalEvent {
  int node = -1, commodity = -1;
  int count = 0;
};

struct TrafficParams {
  double p_bursty = 0.5;
  double streaming_load = 1.0;  // L_s
  double bursty_load = 1.0;     // L_b
  int horizon = 1000;           // T
  int burst_len = 30;
};

// Flow count uniform on [floor(0.15 n), ceil(0.30 n)], ordered (src,dst) pairs
// distinct, base rate U(0.2, 1.0), kind Bernoulli(p_bursty), burst starts
// uniform on {0..T-100}. Requires horizon >= 100.
std::vector<FlowSpec> sample_flows(const NetworkGraph& g, const TrafficParams& p, Rng& rng);

// Poisson draw per flow, in flow order; rate 0 consumes no randomness. Only
// non-zero counts are emitted.
std::vector<ArrivalEvent> arrivals_at(const std::vector<FlowSpec>& flows, int t, Rng& rng);

enum class VirtualizationMode {
  StreamingAll,  // every flow becomes streaming from slot 0
  Mirror,        // kinds kept; bursty windows start at slot 0
};

enum class VirtualRateBasis {
  PerFlow,  // virtual load scales each flow's own base rate
  Unit,     // virtual load applied to a unit base rate
};

// Virtual loads default to the physical ones when negative.
std::vector<FlowSpec> virtualize_flows(const std::vector<FlowSpec>& flows,
                                       VirtualizationMode mode,
                                       double virtual_streaming_load = -1.0,
                                       double virtual_bursty_load = -1.0,
                                       VirtualRateBasis basis = VirtualRateBasis::PerFlow);

}  // namespace antbp
