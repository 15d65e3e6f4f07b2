#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "antbp/harness.hpp"

namespace antbp {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& where, const std::string& msg) {
  throw ConfigError(where.empty() ? msg : where + ": " + msg);
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) bad(where, "trailing characters in number '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad(where, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    long d = std::stol(v, &used);
    if (used != v.size()) bad(where, "trailing characters in integer '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad(where, "expected an integer, got '" + v + "'");
  }
}

uint64_t parse_u64(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    unsigned long long d = std::stoull(v, &used);
    if (used != v.size()) bad(where, "trailing characters in integer '" + v + "'");
    return d;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    bad(where, "expected an unsigned integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(where, "expected a boolean, got '" + v + "'");
}

Scheme parse_scheme(const std::string& v, const std::string& where) {
  for (Scheme s : {Scheme::AntBP, Scheme::AntBPMirror, Scheme::AntBPNoVirt, Scheme::SpBp,
                   Scheme::AntBaseline, Scheme::AntIdeal})
    if (v == scheme_name(s)) return s;
  bad(where, "unknown scheme '" + v +
                 "' (expected ant-bp, ant-bp-mirror, ant-bp-novirt, sp-bp, "
                 "ant-baseline, ant-ideal)");
}

struct InstanceOut {
  int* topo = nullptr;
  int* flow = nullptr;
};

// single dispatch table shared by the file parser and the sweep-axis setter
void apply(ScenarioConfig& c, const std::string& section, const std::string& key,
           const std::string& value, const std::string& where, InstanceOut inst) {
  auto is = [&](const char* s, const char* k) { return section == s && key == k; };

  if (is("topology", "n")) c.n = int(parse_long(value, where));
  else if (is("topology", "density")) c.density = parse_double(value, where);
  else if (is("topology", "seed")) c.seed = parse_u64(value, where);
  else if (is("topology", "max_retries")) c.max_retries = int(parse_long(value, where));
  else if (is("topology", "file")) c.topology_file = value;

  else if (is("traffic", "p_bursty")) c.traffic.p_bursty = parse_double(value, where);
  else if (is("traffic", "streaming_load")) c.traffic.streaming_load = parse_double(value, where);
  else if (is("traffic", "bursty_load")) c.traffic.bursty_load = parse_double(value, where);
  else if (is("traffic", "horizon")) c.traffic.horizon = int(parse_long(value, where));
  else if (is("traffic", "burst_len")) c.traffic.burst_len = int(parse_long(value, where));

  else if (is("rates", "lo")) c.rate_lo = parse_double(value, where);
  else if (is("rates", "hi")) c.rate_hi = parse_double(value, where);
  else if (is("rates", "noise_std")) c.rate_noise_std = parse_double(value, where);
  else if (is("rates", "trunc")) c.rate_trunc = parse_double(value, where);

  else if (is("policy", "scheme")) c.scheme = parse_scheme(value, where);
  else if (is("policy", "alpha")) c.params.alpha = parse_double(value, where);
  else if (is("policy", "beta")) c.params.beta = parse_double(value, where);
  else if (is("policy", "deposit")) c.params.deposit = parse_double(value, where);
  else if (is("policy", "evaporation")) c.params.evaporation = parse_double(value, where);
  else if (is("policy", "rho_init")) c.params.rho_init = parse_double(value, where);
  else if (is("policy", "eps")) c.params.eps = parse_double(value, where);
  else if (is("policy", "ant_interval")) c.params.ant_interval = int(parse_long(value, where));
  else if (is("policy", "explore_prob")) c.params.explore_prob = parse_double(value, where);
  else if (is("policy", "hop_cap_factor")) c.params.hop_cap_factor = int(parse_long(value, where));
  else if (is("policy", "failure_decay")) c.params.failure_decay = parse_double(value, where);

  else if (is("virtual", "steps")) c.virtual_steps = int(parse_long(value, where));
  else if (is("virtual", "streaming_load")) c.virtual_streaming_load = parse_double(value, where);
  else if (is("virtual", "bursty_load")) c.virtual_bursty_load = parse_double(value, where);
  else if (is("virtual", "rate_basis")) {
    if (value == "per-flow") c.virtual_rate_basis = VirtualRateBasis::PerFlow;
    else if (value == "unit") c.virtual_rate_basis = VirtualRateBasis::Unit;
    else bad(where, "rate_basis must be per-flow or unit");
  }
  else if (is("virtual", "crossing_evaporation")) c.crossing_evaporation = parse_double(value, where);

  else if (is("failures", "model")) {
    if (value == "none") c.failures.kind = FailureConfig::None;
    else if (value == "all-links") c.failures.kind = FailureConfig::AllLinks;
    else if (value == "bw-persist") c.failures.kind = FailureConfig::BwPersist;
    else if (value == "local-persist") c.failures.kind = FailureConfig::LocalPersist;
    else bad(where, "model must be none, all-links, bw-persist, or local-persist");
  }
  else if (is("failures", "p_max")) c.failures.p_max = parse_double(value, where);
  else if (is("failures", "mean_duration")) c.failures.mean_duration = parse_double(value, where);
  else if (is("failures", "duration_std")) c.failures.duration_std = parse_double(value, where);
  else if (is("failures", "top_fraction")) c.failures.top_fraction = parse_double(value, where);
  else if (is("failures", "region_lo")) c.failures.region_lo = parse_double(value, where);
  else if (is("failures", "region_hi")) c.failures.region_hi = parse_double(value, where);
  else if (is("failures", "full_outage")) c.failures.full_outage = parse_bool(value, where);

  else if (is("mobility", "mobile_nodes")) c.mobility.mobile_nodes = int(parse_long(value, where));
  else if (is("mobility", "trigger")) c.mobility.trigger = int(parse_long(value, where));
  else if (is("mobility", "pause")) c.mobility.pause = int(parse_long(value, where));
  else if (is("mobility", "update_slot")) c.mobility.update_slot = int(parse_long(value, where));
  else if (is("mobility", "step_std")) c.mobility.step_std = parse_double(value, where);
  else if (is("mobility", "walk_steps")) c.mobility.walk_steps = int(parse_long(value, where));
  else if (is("mobility", "retries")) c.mobility.retries = int(parse_long(value, where));

  else if (is("run", "latency_mode")) {
    if (value == "cap") c.latency_mode = LatencyMode::Cap;
    else if (value == "residency") c.latency_mode = LatencyMode::Residency;
    else bad(where, "latency_mode must be cap or residency");
  }
  else if (is("run", "topologies")) c.topologies = int(parse_long(value, where));
  else if (is("run", "flows_per_topology")) c.flows_per_topology = int(parse_long(value, where));
  else if (is("run", "debug_checks")) c.debug_checks = parse_bool(value, where);
  else if (is("run", "out_dir")) c.out_dir = value;

  // manifest-only section identifying the instance within its run
  else if (is("instance", "topology_index")) {
    if (inst.topo) *inst.topo = int(parse_long(value, where));
  }
  else if (is("instance", "flow_index")) {
    if (inst.flow) *inst.flow = int(parse_long(value, where));
  }

  else bad(where, "unknown key '" + section + "." + key + "'");
}

}  // namespace

ScenarioConfig load_config(const std::string& path, int* topology_index,
                           int* flow_index) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  ScenarioConfig cfg;
  InstanceOut inst{topology_index, flow_index};
  std::string line, section;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    std::string where = path + ":" + std::to_string(lineno);
    size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') bad(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) bad(where, "empty section name");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) bad(where, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) bad(where, "empty key");
    if (section.empty()) bad(where, "key outside any [section]");
    apply(cfg, section, key, value, where, inst);
  }
  validate_config(cfg);
  return cfg;
}

void apply_config_value(ScenarioConfig& cfg, const std::string& dotted_key,
                        const std::string& value) {
  size_t dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ConfigError("axis key must look like section.key, got '" + dotted_key + "'");
  apply(cfg, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value, dotted_key,
        {});
}

void validate_config(const ScenarioConfig& cfg) {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(cfg.n >= 2, "topology.n must be >= 2");
  require(cfg.density > 0.0, "topology.density must be positive");
  require(cfg.max_retries >= 1, "topology.max_retries must be >= 1");
  require(cfg.traffic.p_bursty >= 0.0 && cfg.traffic.p_bursty <= 1.0,
          "traffic.p_bursty must be in [0, 1]");
  require(cfg.traffic.streaming_load >= 0.0, "traffic.streaming_load must be >= 0");
  require(cfg.traffic.bursty_load >= 0.0, "traffic.bursty_load must be >= 0");
  require(cfg.traffic.horizon >= 100, "traffic.horizon must be >= 100");
  require(cfg.traffic.burst_len >= 1 && cfg.traffic.burst_len <= 100,
          "traffic.burst_len must be in [1, 100]");
  require(cfg.rate_lo > 0.0 && cfg.rate_hi >= cfg.rate_lo,
          "rates.lo/hi must satisfy 0 < lo <= hi");
  require(cfg.rate_noise_std >= 0.0, "rates.noise_std must be >= 0");
  require(cfg.rate_trunc >= 0.0, "rates.trunc must be >= 0");
  require(cfg.params.deposit >= 0.0, "policy.deposit must be >= 0");
  require(cfg.params.evaporation >= 0.0 && cfg.params.evaporation < 1.0,
          "policy.evaporation must be in [0, 1)");
  require(cfg.params.rho_init > 0.0, "policy.rho_init must be positive");
  require(cfg.params.eps > 0.0, "policy.eps must be positive");
  require(cfg.params.ant_interval >= 1, "policy.ant_interval must be >= 1");
  require(cfg.params.explore_prob >= 0.0 && cfg.params.explore_prob <= 1.0,
          "policy.explore_prob must be in [0, 1]");
  require(cfg.params.hop_cap_factor >= 1, "policy.hop_cap_factor must be >= 1");
  require(cfg.params.failure_decay >= 0.0 && cfg.params.failure_decay < 1.0,
          "policy.failure_decay must be in [0, 1)");
  require(cfg.virtual_steps >= 1, "virtual.steps must be >= 1");
  require(cfg.crossing_evaporation >= 0.0 && cfg.crossing_evaporation < 1.0,
          "virtual.crossing_evaporation must be in [0, 1)");
  require(cfg.failures.p_max >= 0.0 && cfg.failures.p_max <= 1.0,
          "failures.p_max must be in [0, 1]");
  require(cfg.failures.mean_duration > 0.0, "failures.mean_duration must be positive");
  require(cfg.failures.duration_std >= 0.0, "failures.duration_std must be >= 0");
  require(cfg.failures.top_fraction > 0.0 && cfg.failures.top_fraction <= 1.0,
          "failures.top_fraction must be in (0, 1]");
  require(cfg.failures.region_lo > 0.0 && cfg.failures.region_hi >= cfg.failures.region_lo &&
              cfg.failures.region_hi <= 1.0,
          "failures.region_lo/hi must satisfy 0 < lo <= hi <= 1");
  require(cfg.mobility.mobile_nodes >= 0, "mobility.mobile_nodes must be >= 0");
  require(cfg.mobility.trigger >= 0, "mobility.trigger must be >= 0");
  require(cfg.mobility.pause >= 0, "mobility.pause must be >= 0");
  require(cfg.mobility.step_std > 0.0, "mobility.step_std must be positive");
  require(cfg.mobility.walk_steps >= 1, "mobility.walk_steps must be >= 1");
  require(cfg.mobility.retries >= 1, "mobility.retries must be >= 1");
  if (cfg.mobility.mobile_nodes > 0)
    require(cfg.mobility.update_slot >= cfg.mobility.trigger,
            "mobility.update_slot must be >= mobility.trigger");
  require(cfg.topologies >= 1, "run.topologies must be >= 1");
  require(cfg.flows_per_topology >= 1, "run.flows_per_topology must be >= 1");
}

std::string config_to_text(const ScenarioConfig& c) {
  std::ostringstream o;
  char buf[96];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  o << "[topology]\n";
  o << "n = " << c.n << "\n";
  o << "density = " << num(c.density) << "\n";
  o << "seed = " << c.seed << "\n";
  o << "max_retries = " << c.max_retries << "\n";
  if (!c.topology_file.empty()) o << "file = " << c.topology_file << "\n";
  o << "\n[traffic]\n";
  o << "p_bursty = " << num(c.traffic.p_bursty) << "\n";
  o << "streaming_load = " << num(c.traffic.streaming_load) << "\n";
  o << "bursty_load = " << num(c.traffic.bursty_load) << "\n";
  o << "horizon = " << c.traffic.horizon << "\n";
  o << "burst_len = " << c.traffic.burst_len << "\n";
  o << "\n[rates]\n";
  o << "lo = " << num(c.rate_lo) << "\n";
  o << "hi = " << num(c.rate_hi) << "\n";
  o << "noise_std = " << num(c.rate_noise_std) << "\n";
  o << "trunc = " << num(c.rate_trunc) << "\n";
  o << "\n[policy]\n";
  o << "scheme = " << scheme_name(c.scheme) << "\n";
  o << "alpha = " << num(c.params.alpha) << "\n";
  o << "beta = " << num(c.params.beta) << "\n";
  o << "deposit = " << num(c.params.deposit) << "\n";
  o << "evaporation = " << num(c.params.evaporation) << "\n";
  o << "rho_init = " << num(c.params.rho_init) << "\n";
  o << "eps = " << num(c.params.eps) << "\n";
  o << "ant_interval = " << c.params.ant_interval << "\n";
  o << "explore_prob = " << num(c.params.explore_prob) << "\n";
  o << "hop_cap_factor = " << c.params.hop_cap_factor << "\n";
  o << "failure_decay = " << num(c.params.failure_decay) << "\n";
  o << "\n[virtual]\n";
  o << "steps = " << c.virtual_steps << "\n";
  o << "streaming_load = " << num(c.virtual_streaming_load) << "\n";
  o << "bursty_load = " << num(c.virtual_bursty_load) << "\n";
  o << "rate_basis = "
    << (c.virtual_rate_basis == VirtualRateBasis::PerFlow ? "per-flow" : "unit") << "\n";
  o << "crossing_evaporation = " << num(c.crossing_evaporation) << "\n";
  o << "\n[failures]\n";
  const char* model = c.failures.kind == FailureConfig::None         ? "none"
                      : c.failures.kind == FailureConfig::AllLinks   ? "all-links"
                      : c.failures.kind == FailureConfig::BwPersist ? "bw-persist"
                                                                     : "local-persist";
  o << "model = " << model << "\n";
  o << "p_max = " << num(c.failures.p_max) << "\n";
  o << "mean_duration = " << num(c.failures.mean_duration) << "\n";
  o << "duration_std = " << num(c.failures.duration_std) << "\n";
  o << "top_fraction = " << num(c.failures.top_fraction) << "\n";
  o << "region_lo = " << num(c.failures.region_lo) << "\n";
  o << "region_hi = " << num(c.failures.region_hi) << "\n";
  o << "full_outage = " << (c.failures.full_outage ? "true" : "false") << "\n";
  o << "\n[mobility]\n";
  o << "mobile_nodes = " << c.mobility.mobile_nodes << "\n";
  o << "trigger = " << c.mobility.trigger << "\n";
  o << "pause = " << c.mobility.pause << "\n";
  o << "update_slot = " << c.mobility.update_slot << "\n";
  o << "step_std = " << num(c.mobility.step_std) << "\n";
  o << "walk_steps = " << c.mobility.walk_steps << "\n";
  o << "retries = " << c.mobility.retries << "\n";
  o << "\n[run]\n";
  o << "latency_mode = " << (c.latency_mode == LatencyMode::Cap ? "cap" : "residency")
    << "\n";
  o << "topologies = " << c.topologies << "\n";
  o << "flows_per_topology = " << c.flows_per_topology << "\n";
  o << "debug_checks = " << (c.debug_checks ? "true" : "false") << "\n";
  o << "out_dir = " << c.out_dir << "\n";
  return o.str();
}

}  // namespace antbp
