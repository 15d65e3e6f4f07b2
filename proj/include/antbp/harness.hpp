#pragma once
// Scenario configuration, the end-to-end scenario runner, sweeps, metric
// computation, and file emission. The CLI is a thin shell over this header.
#include <optional>
#include <string>
#include <vector>

#include "antbp/dataplane.hpp"
#include "antbp/dynamics.hpp"
#include "antbp/policies.hpp"
#include "antbp/topology.hpp"
#include "antbp/traffic.hpp"
#include "antbp/virtualplane.hpp"

namespace antbp {

inline constexpr const char* kVersion = "antbp 1.0";
// environment override for where run/sweep directories land
inline constexpr const char* kOutRootEnv = "ANTBP_OUT_ROOT";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LatencyMode {
  Cap,        // undelivered packets count as the full horizon T
  Residency,  // undelivered packets count their queued time T - injected_at
};

struct ScenarioConfig {
  // [topology]
  int n = 100;
  double density = 2.5464790894703255;  // 8/pi nodes per unit area
  uint64_t seed = 1;
  int max_retries = 1000;
  std::string topology_file;  // optional: load instead of generating

  // [traffic]
  TrafficParams traffic{0.5, 2.0, 1.0, 1000, 30};

  // [rates]
  double rate_lo = 10.0, rate_hi = 42.0;
  double rate_noise_std = 3.0, rate_trunc = 9.0;

  // [policy]
  Scheme scheme = Scheme::AntBP;
  SchemeParams params;

  // [virtual]
  int virtual_steps = 1000;
  double virtual_streaming_load = -1.0;  // negative: inherit physical load
  double virtual_bursty_load = -1.0;
  VirtualRateBasis virtual_rate_basis = VirtualRateBasis::PerFlow;
  double crossing_evaporation = 0.0;

  // [failures]
  FailureConfig failures;

  // [mobility]
  MobilityConfig mobility;

  // [run]
  LatencyMode latency_mode = LatencyMode::Cap;
  int topologies = 1, flows_per_topology = 1;
  bool debug_checks = false;
  std::string out_dir = "out";
};

// Parses the sectioned key=value format; unknown keys and out-of-range values
// raise ConfigError with file:line context. An empty file yields the defaults.
ScenarioConfig load_config(const std::string& path, int* topology_index = nullptr,
                           int* flow_index = nullptr);
// One key ("section.key") as the sweep axis setter; value parsed like the file
// format. Throws ConfigError on unknown keys/bad values.
void apply_config_value(ScenarioConfig& cfg, const std::string& dotted_key,
                        const std::string& value);
void validate_config(const ScenarioConfig& cfg);
std::string config_to_text(const ScenarioConfig& cfg);

struct RunMetrics {
  long injected = 0, delivered = 0;
  double latency_mean = 0.0, latency_streaming = 0.0, latency_bursty = 0.0;
  double delivery = 0.0, delivery_streaming = 0.0, delivery_bursty = 0.0;
  bool has_streaming = false, has_bursty = false;
  double goodput = 0.0;
  bool stable = false;
  double backlog_q2 = 0.0, backlog_q4 = 0.0;  // stability diagnostic means
  bool flowcons_checked = false;
  double flowcons_max_residual = 0.0;
  std::string flowcons_skip_reason;
  long virtual_exchanges = 0, virtual_ants = 0, proactive_ants = 0;
};

struct SlotRow {
  int t = 0;
  long deliveries = 0, backlog = 0;
  double g = 0.0;
  int scheduled = 0;
};

struct EventRow {
  int t = 0;
  std::string kind, subject, detail;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<SlotRow> slots;
  std::vector<Packet> packets;
  std::vector<FlowSpec> flows;
  NetworkGraph initial_graph, final_graph;
  LinkRateModel initial_rates;
  PheromoneField rho;  // final field, ant schemes only
  bool has_rho = false;
  std::vector<EventRow> events;
  // per-(link, commodity) transmitted totals and per-(node, commodity)
  // arrival totals over the horizon, for flow-balance auditing
  std::vector<long> moved_totals, arrival_totals;
  int final_link_count = 0;
};

// Deterministic instance key: topology streams depend on (seed, topology
// index) only, everything else also on the flow index, so flow realizations
// share topologies and schemes share environments.
uint64_t topology_master(uint64_t seed, int topology_index);
uint64_t instance_master(uint64_t seed, int topology_index, int flow_index);

RunResult run_scenario(const ScenarioConfig& cfg, int topology_index, int flow_index,
                       bool force_debug_checks = false);

// max relative per-(node, commodity) imbalance of measured time-average flows
// against measured arrival rates; fills the flowcons_* metric fields
void check_flow_conservation(const ScenarioConfig& cfg, RunResult& result);

void emit_outputs(const std::string& dir, const ScenarioConfig& cfg,
                  const RunResult& result, int topology_index, int flow_index);

struct SweepCell {
  std::string value;
  int seed_index = 0, topology_index = 0, flow_index = 0;
  bool ok = false;
  std::string error;
  RunMetrics metrics;
};

struct SweepTable {
  std::string axis;
  std::vector<std::string> values;
  int seeds = 0;
  std::vector<SweepCell> cells;  // value-major, then seed
};

// Cartesian product of axis values and seed indices, run in parallel; failed
// cells carry their error and the sweep continues.
SweepTable run_sweep(const ScenarioConfig& base, const std::string& axis,
                     const std::vector<std::string>& values, int seeds);

void emit_sweep_outputs(const std::string& dir, const ScenarioConfig& base,
                        const SweepTable& table);

// regenerates the sweep charts from an existing sweep_summary.csv
void plot_from_summary(const std::string& summary_csv, const std::string& out_dir);

// `check` support: re-run from a manifest and byte-compare emissions.
// Returns mismatched or failed file names (empty = clean audit).
std::vector<std::string> audit_run_dir(const std::string& run_dir);

}  // namespace antbp
