#pragma once
// Link outages and node mobility. All randomness is resolved against the
// failure/mobility streams when the process is built, so every scheme sees the
// same environment under the same master seed.
#include <vector>

#include "antbp/dataplane.hpp"
#include "antbp/rng.hpp"
#include "antbp/topology.hpp"
#include "antbp/virtualplane.hpp"

namespace antbp {

struct FailureConfig {
  enum Kind { None, AllLinks, BwPersist, LocalPersist } kind = None;
  double p_max = 0.05;           // per-link p_e ~ U(0, p_max)
  double mean_duration = 20.0;   // outage windows: round(N(mean, std^2)), >= 1
  double duration_std = 5.0;
  double top_fraction = 0.05;    // bw-persist: share of ranked links targeted
  double region_lo = 0.05, region_hi = 0.06;  // local-persist: node share in disk
  bool full_outage = false;      // windows kill every transmission, not just p_e
};

class FailureProcess {
 public:
  // betweenness ranking / the region draw use the initial topology
  void build(const NetworkGraph& g, const FailureConfig& cfg, int horizon, Rng& rng);

  // links that would lose a transmission attempted at t (resolved draws),
  // ascending id
  const std::vector<int>& failing_at(int t) const;
  // probability view: (link, per-transmission failure probability) for every
  // link under threat at t
  std::vector<std::pair<int, double>> mask_at(int t) const;

  const std::vector<std::pair<int, double>>& targets() const { return targets_; }
  bool window_active(int target_idx, int t) const;
  double occupancy_fraction(int target_idx) const;
  bool enabled() const { return cfg_.kind != FailureConfig::None; }

 private:
  FailureConfig cfg_;
  int horizon_ = 0;
  std::vector<std::pair<int, double>> targets_;     // (link, p_e)
  std::vector<std::vector<uint8_t>> window_;        // [target][t], persist kinds
  std::vector<std::vector<int>> fails_;             // [t] -> link ids
  std::vector<int> empty_;
};

// Cancels failed scheduled links; for pheromone-based schemes each failed
// transmission decays the link's whole pheromone row (floored at eps).
// Returns the cancelled link ids.
std::vector<int> apply_failures(Schedule& schedule, const FailureProcess& fp, int t,
                                PheromoneField* rho, double decay, double eps);

struct MobilityConfig {
  int mobile_nodes = 0;
  int trigger = 500;      // slot the displacement happens
  int pause = 10;         // physical slots frozen while the update runs
  int update_slot = 600;  // slot the virtual phase re-runs; resume = update + pause
  double step_std = 0.1;  // per-step displacement sigma
  int walk_steps = 2000;  // steps folded into one event (net sigma = 0.1 * sqrt(steps))
  int retries = 100;      // candidate draws per node before it stays put
};

struct MobilityDiff {
  std::vector<int> moved_nodes;
  std::vector<int> removed_links, added_links;  // link ids, ascending
};

// Displaces the selected nodes one at a time (ascending id): the endpoint of a
// walk_steps-step Gaussian walk, reflected into the area square, rejected
// while it would disconnect the unit-disk graph. Updates g's links in place.
MobilityDiff mobility_event(NetworkGraph& g, const MobilityConfig& cfg, Rng& rng);

// Structural adaptation for the FIFO plane: stranded per-link queues return to
// their source's undecided queue; new links enter the pheromone field at eps,
// or at the node's mean pheromone for the no-virtualization variant. Removed
// links drop out of every policy row implicitly (alive-only normalization).
void adapt_after_mobility(DataPlane& dp, PheromoneField& rho, const NetworkGraph& g,
                          const MobilityDiff& diff, bool new_links_take_mean,
                          double eps);

}  // namespace antbp
