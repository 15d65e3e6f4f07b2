#pragma once
// The virtual establishment phase: a compressed-time run of bias-augmented
// max-weight routing over per-commodity counters (no packet identity). Link
// crossing counts from that run condense into the pheromone field that the
// physical plane forwards by.
#include <vector>

#include "antbp/dataplane.hpp"
#include "antbp/rng.hpp"
#include "antbp/scheduling.hpp"
#include "antbp/topology.hpp"
#include "antbp/traffic.hpp"

namespace antbp {

// rho[link][commodity]; strictly positive wherever the link is alive
struct PheromoneField {
  int n_nodes = 0;
  std::vector<double> rho;

  void init(int n_links, int n_nodes_, double fill) {
    n_nodes = n_nodes_;
    rho.assign(size_t(n_links) * n_nodes_, fill);
  }
  void extend(int n_links, double fill) { rho.resize(size_t(n_links) * n_nodes, fill); }
  int link_count() const { return n_nodes ? int(rho.size() / n_nodes) : 0; }
  double at(int link, int c) const { return rho[size_t(link) * n_nodes + c]; }
  double& at(int link, int c) { return rho[size_t(link) * n_nodes + c]; }
};

class VirtualPlane {
 public:
  void init(const NetworkGraph* g);
  void seed_backlog(int node, int commodity, long count);

  long count(int node, int c) const { return q_[size_t(node) * n_ + c]; }
  double crossings(int link, int c) const { return n_cross_[size_t(link) * n_ + c]; }
  long injected_total() const { return injected_; }
  long consumed_total() const { return consumed_; }
  long exchange_count() const { return exchanges_; }
  long total_queued() const;

  void inject(const std::vector<ArrivalEvent>& events);
  // biased backpressure over counters: the commodity maximizing
  // (Q_i^c - Q_j^c) + (B_i^c - B_j^c), ties to the lower index
  int select_commodity(const NetworkGraph& g, int link, const BiasField& bias,
                       double* pressure_out = nullptr) const;
  // w = max(pressure, 0) * [Q_i^{c*} > 0], utility = w * rate
  void compute_utilities(const NetworkGraph& g, const BiasField& bias,
                         const std::vector<double>& realized,
                         std::vector<int>& chosen, std::vector<double>& utility) const;
  // moves min(Q_i^{c*}, rate) counters per scheduled positive-weight link and
  // records crossings
  void transmit(const NetworkGraph& g, const Schedule& schedule,
                const std::vector<int>& chosen, const std::vector<double>& realized,
                const std::vector<double>& utility);
  void evaporate_crossings(double eps);

  void check_conservation() const;

 private:
  const NetworkGraph* g_ = nullptr;
  int n_ = 0;
  std::vector<long> q_;
  std::vector<double> n_cross_;
  long injected_ = 0, consumed_ = 0, exchanges_ = 0;
};

// rho = max(n_ij - n_ji, 0) + eps for alive links (eps keeps every
// neighbor reachable); dead links get bare eps
PheromoneField pheromone_from_counts(const VirtualPlane& vp, const NetworkGraph& g,
                                     double eps);

// explicit forwarding probabilities, p ~ rho row-normalized per (node,
// commodity) over alive out-links
class MatrixPolicy : public ForwardingPolicy {
 public:
  int n_nodes = 0;
  std::vector<double> p;  // [link * n_nodes + c]
  void probs(const NetworkGraph& g, int node, int commodity,
             std::vector<double>& out) const override;
};

MatrixPolicy policy_from_pheromone(const PheromoneField& ph, const NetworkGraph& g);

struct VirtualRunStats {
  long injected = 0, consumed = 0, exchanges = 0;
  long residual = 0;  // counters still queued when the phase ended
};

struct VirtualRunConfig {
  int steps = 1000;              // K
  double eps = 0.01;             // pheromone floor
  double crossing_evaporation = 0.0;
  bool debug_checks = false;
};

// The whole phase: K compressed slots of inject / select / schedule (LGS) /
// transmit over the virtual flow set, then condensation into pheromones.
// initial_backlogs (optional, dense [node*n+c]) model stranded traffic.
PheromoneField run_virtual_spbp(const NetworkGraph& g, const ConflictGraph& cg,
                                const BiasField& bias, const LinkRateModel& rates,
                                const std::vector<FlowSpec>& virtual_flows,
                                const VirtualRunConfig& cfg, Rng& arrival_rng,
                                Rng& rate_rng, const std::vector<long>* initial_backlogs,
                                VirtualRunStats* stats);

}  // namespace antbp
