#pragma once
// The six routing schemes: three variants of the count-based scheme (full,
// mirror virtualization, no-virtualization ablation), the per-commodity
// max-weight reference plane, and two classic ant-colony baselines.
#include <deque>
#include <memory>
#include <vector>

#include "antbp/dataplane.hpp"
#include "antbp/rng.hpp"
#include "antbp/topology.hpp"
#include "antbp/traffic.hpp"
#include "antbp/virtualplane.hpp"

namespace antbp {

enum class Scheme {
  AntBP,         // virtual establishment (streaming-all) + FIFO forwarding
  AntBPMirror,   // same, mirror virtualization
  AntBPNoVirt,   // same, but never re-runs the virtual phase after mobility
  SpBp,          // per-commodity biased max-weight on real queues
  AntBaseline,   // classic ACO, immediate per-link deposits, frozen after setup
  AntIdeal,      // ACO setup + proactive path-dependent ants during operation
};

const char* scheme_name(Scheme s);
bool scheme_uses_pheromones(Scheme s);

struct SchemeParams {
  double alpha = 1.0, beta = 0.0;   // classic ACO exponents
  double deposit = 0.01;            // per-crossing deposit in the ACO virtual phase
  double evaporation = 0.002;       // per-step pheromone evaporation (ACO schemes)
  double rho_init = 1.3;            // ACO initial pheromone
  double eps = 0.01;                // pheromone floor / clamp value
  int ant_interval = 100;           // data packets per proactive ant
  double explore_prob = 0.1;        // proactive-ant uniform exploration
  int hop_cap_factor = 4;           // ants discarded after factor * |V| hops
  double failure_decay = 0.05;      // rho *= (1 - decay) on a failed transmission
};

// live Eq-free view: p ~ rho, renormalized over whatever is alive now
class PheromoneViewPolicy : public ForwardingPolicy {
 public:
  const PheromoneField* rho = nullptr;
  void probs(const NetworkGraph& g, int node, int commodity,
             std::vector<double>& out) const override;
};

// p ~ clamp(rho + (B_i - B_j), floor): pheromone plus downhill bias pull
class BiasPheromoneViewPolicy : public ForwardingPolicy {
 public:
  const PheromoneField* rho = nullptr;
  const BiasField* bias = nullptr;
  double floor = 0.01;
  void probs(const NetworkGraph& g, int node, int commodity,
             std::vector<double>& out) const override;
};

// classic frozen ACO rule: p ~ rho^alpha * heuristic^beta
MatrixPolicy aco_policy(const PheromoneField& ph, const NetworkGraph& g, double alpha,
                        double beta, const std::vector<double>* heuristic = nullptr);
// materialized form of BiasPheromoneViewPolicy
MatrixPolicy aco_bias_policy(const PheromoneField& ph, const BiasField& bias,
                             const NetworkGraph& g, double floor);

// a completed proactive-ant journey, ready to reinforce its path
struct AntPath {
  int commodity = -1;
  std::vector<int> links;  // traversed, in order; ends at the commodity node
  int departure = 0, arrival = 0;
  int latency() const { return arrival - departure; }
};

struct DepositRule {
  enum Kind { Constant, InversePathCost } kind = Constant;
  double theta = 0.01;  // Constant: amount per traversed link
};

void evaporate(PheromoneField& ph, double eps);
void deposit(PheromoneField& ph, int link, int commodity, double amount);
// rho <- (1 - evap) * rho, then each ant adds its deposit on every link of its
// path (Constant: theta; InversePathCost: 1 / latency)
void aco_update(PheromoneField& ph, const std::vector<AntPath>& ants, double evap,
                const DepositRule& rule);

struct AcoPhaseConfig {
  int steps = 1000;
  SchemeParams params;
  bool debug_checks = false;
};

struct AcoPhaseStats {
  long ants_injected = 0, ants_consumed = 0, residual = 0;
};

// Classic-ACO establishment: ants are the virtual packets, forwarded through
// per-neighbor FIFO queues by the bias-augmented rule, scheduled like data,
// each crossing depositing immediately. `rho` continues in place when it
// already matches the graph (post-mobility rerun), otherwise it is initialized
// to rho_init. initial_backlogs (dense [node*n+c]) become queued ants.
void run_aco_virtual_phase(const NetworkGraph& g, const ConflictGraph& cg,
                           const BiasField& bias, const LinkRateModel& rates,
                           const std::vector<FlowSpec>& virtual_flows,
                           const AcoPhaseConfig& cfg, Rng& arrival_rng, Rng& rate_rng,
                           Rng& forward_rng, PheromoneField& rho,
                           const std::vector<long>* initial_backlogs,
                           AcoPhaseStats* stats);

// ---- per-commodity reference plane ----

// Real packets in per-(node, commodity) FIFOs; each link serves the commodity
// with the highest biased pressure, utilities gate on queue occupancy.
class SpBpPlane {
 public:
  void init(const NetworkGraph* g);
  void inject(const std::vector<ArrivalEvent>& events, int t);
  int select_commodity(const NetworkGraph& g, int link, const BiasField& bias,
                       double* pressure_out = nullptr) const;
  void compute_utilities(const NetworkGraph& g, const BiasField& bias,
                         const std::vector<double>& realized, std::vector<int>& chosen,
                         std::vector<double>& utility) const;
  void transmit(const NetworkGraph& g, const Schedule& schedule,
                const std::vector<int>& chosen, const std::vector<double>& realized,
                const std::vector<double>& utility, int t, const BiasField& bias,
                SlotReport& report);

  long count(int node, int c) const { return long(q_[size_t(node) * n_ + c].size()); }
  long backlog() const { return backlog_; }
  long injected_total() const { return injected_total_; }
  long delivered_total() const { return delivered_total_; }
  const std::vector<Packet>& packets() const { return packets_; }
  void check_counts() const;

 private:
  const NetworkGraph* g_ = nullptr;
  int n_ = 0;
  std::vector<Packet> packets_;
  std::vector<std::deque<uint32_t>> q_;  // [node * n + commodity]
  long backlog_ = 0, injected_total_ = 0, delivered_total_ = 0;
};

// ---- proactive ants (ant-ideal) ----

struct ProactiveAnt {
  int commodity = -1;
  int node = -1;
  int departure = 0;
  std::vector<int> links;
};

class AntIdealState {
 public:
  std::vector<ProactiveAnt> ants;
  std::vector<long> injected_per_flow, emitted_per_flow;
  long ants_emitted_total = 0, ants_delivered_total = 0, ants_discarded_total = 0;

  void init(size_t n_flows);
  void note_arrivals(const std::vector<FlowSpec>& flows,
                     const std::vector<ArrivalEvent>& events);
};

// One maintenance step: move every ant one hop (uniform exploration with
// explore_prob, otherwise the bias-augmented rule over rho), collect arrivals,
// age out ants past hop_cap_factor * |V| hops, apply evaporation + inverse-
// latency path deposits, then emit one new ant per ant_interval injected data
// packets per flow.
void ant_ideal_step(AntIdealState& st, const NetworkGraph& g, const BiasField& bias,
                    PheromoneField& rho, const SchemeParams& params,
                    const std::vector<FlowSpec>& flows, int t, Rng& rng);

}  // namespace antbp
