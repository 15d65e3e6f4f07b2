#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "antbp/harness.hpp"

namespace antbp {

namespace {

std::string link_subject(const NetworkGraph& g, int link) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "link %d->%d", g.links[link].src, g.links[link].dst);
  return std::string(buf);
}

bool is_fifo_scheme(Scheme s) { return s != Scheme::SpBp; }
bool is_aco_scheme(Scheme s) {
  return s == Scheme::AntBaseline || s == Scheme::AntIdeal;
}
bool is_count_scheme(Scheme s) {
  return s == Scheme::AntBP || s == Scheme::AntBPMirror || s == Scheme::AntBPNoVirt;
}
// schemes that re-run establishment (and therefore pause) after mobility
bool reruns_after_mobility(Scheme s) {
  return s == Scheme::AntBP || s == Scheme::AntBPMirror || is_aco_scheme(s);
}

void check_policy_rows(const ForwardingPolicy& policy, const NetworkGraph& g,
                       const std::vector<FlowSpec>& flows) {
  std::vector<double> p;
  for (const FlowSpec& f : flows) {
    for (int i = 0; i < g.node_count(); ++i) {
      if (i == f.dst || g.out_links(i).empty()) continue;
      policy.probs(g, i, f.dst, p);
      double s = 0.0;
      for (double v : p) {
        if (v < -1e-15) throw std::logic_error("negative forwarding probability");
        s += v;
      }
      if (std::fabs(s - 1.0) > 1e-9)
        throw std::logic_error("forwarding policy row does not normalize");
    }
  }
}

// count-condensed fields respect the eps floor; ACO evaporation may dip below
// it legitimately, so those check strict positivity instead
void check_pheromone_floor(const PheromoneField& rho, const NetworkGraph& g,
                           double floor) {
  for (int e = 0; e < g.link_count(); ++e) {
    if (!g.alive[e]) continue;
    for (int c = 0; c < rho.n_nodes; ++c) {
      double v = rho.at(e, c);
      if (!(v > 0.0) || v < floor - 1e-12)
        throw std::logic_error("pheromone below its floor on an alive link");
    }
  }
}

void check_capacity(const SlotReport& report, const std::vector<double>& realized) {
  thread_local std::vector<std::pair<int, long>> per_link;
  per_link.clear();
  for (const Move& m : report.moves) {
    bool found = false;
    for (auto& [e, cnt] : per_link)
      if (e == m.link) {
        cnt += m.count;
        found = true;
        break;
      }
    if (!found) per_link.emplace_back(m.link, m.count);
  }
  for (auto& [e, cnt] : per_link)
    if (double(cnt) > realized[e] + 1e-9)
      throw std::logic_error("transmission exceeded the realized link rate");
}

}  // namespace

uint64_t topology_master(uint64_t seed, int topology_index) {
  return splitmix64(splitmix64(seed ^ fnv1a64("topology-family")) +
                    uint64_t(uint32_t(topology_index)));
}

uint64_t instance_master(uint64_t seed, int topology_index, int flow_index) {
  return splitmix64(topology_master(seed, topology_index) ^
                    splitmix64(fnv1a64("flow-instance") + uint64_t(uint32_t(flow_index))));
}

RunResult run_scenario(const ScenarioConfig& cfg, int topology_index, int flow_index,
                       bool force_debug_checks) {
  validate_config(cfg);
  const bool debug = cfg.debug_checks || force_debug_checks;
  const int T = cfg.traffic.horizon;
  const uint64_t topo_master = topology_master(cfg.seed, topology_index);
  const uint64_t inst_master = instance_master(cfg.seed, topology_index, flow_index);

  RunResult res;
  char detail[128];

  // ---- static instance: topology, long-term rates, flows ----
  LinkRateModel rates;
  rates.rate_lo = cfg.rate_lo;
  rates.rate_hi = cfg.rate_hi;
  rates.noise_std = cfg.rate_noise_std;
  rates.trunc_halfwidth = cfg.rate_trunc;

  NetworkGraph g;
  {
    Rng topo_rng = Rng::stream(topo_master, "topology");
    if (!cfg.topology_file.empty()) {
      g = load_topology(cfg.topology_file, rates);
    } else {
      g = generate_topology(cfg.n, cfg.density, topo_rng, cfg.max_retries);
      rates.sample_long_term(g, topo_rng);
    }
  }
  const int n = g.node_count();
  res.initial_graph = g;
  res.initial_rates = rates;

  {
    Rng flows_rng = Rng::stream(inst_master, "flows");
    res.flows = sample_flows(g, cfg.traffic, flows_rng);
  }
  const std::vector<FlowSpec>& flows = res.flows;

  ConflictGraph cg = build_conflict_graph(g);
  BiasField bias_env = compute_bias_field(g, rates);  // current-truth bias
  BiasField bias_route = bias_env;  // what bias-using policies actually see

  FailureProcess fp;
  {
    Rng failures_rng = Rng::stream(inst_master, "failures");
    fp.build(g, cfg.failures, T, failures_rng);
  }

  // ---- establishment phase ----
  PheromoneField rho;
  res.has_rho = scheme_uses_pheromones(cfg.scheme);
  std::vector<FlowSpec> virtual_flows;
  if (cfg.scheme != Scheme::SpBp) {
    VirtualizationMode vmode = cfg.scheme == Scheme::AntBPMirror
                                   ? VirtualizationMode::Mirror
                                   : VirtualizationMode::StreamingAll;
    virtual_flows = virtualize_flows(flows, vmode, cfg.virtual_streaming_load,
                                     cfg.virtual_bursty_load, cfg.virtual_rate_basis);
  }
  if (is_count_scheme(cfg.scheme)) {
    VirtualRunConfig vcfg;
    vcfg.steps = cfg.virtual_steps;
    vcfg.eps = cfg.params.eps;
    vcfg.crossing_evaporation = cfg.crossing_evaporation;
    vcfg.debug_checks = debug;
    Rng va = Rng::stream(inst_master, "virtual.0.arrivals");
    Rng vr = Rng::stream(inst_master, "virtual.0.rates");
    VirtualRunStats vs;
    rho = run_virtual_spbp(g, cg, bias_env, rates, virtual_flows, vcfg, va, vr, nullptr,
                           &vs);
    res.metrics.virtual_exchanges += vs.exchanges;
    std::snprintf(detail, sizeof detail, "exchanges=%ld residual=%ld", vs.exchanges,
                  vs.residual);
    res.events.push_back({0, "virtual-setup", "", detail});
  } else if (is_aco_scheme(cfg.scheme)) {
    AcoPhaseConfig acfg;
    acfg.steps = cfg.virtual_steps;
    acfg.params = cfg.params;
    acfg.debug_checks = debug;
    Rng va = Rng::stream(inst_master, "virtual.0.arrivals");
    Rng vr = Rng::stream(inst_master, "virtual.0.rates");
    Rng vf = Rng::stream(inst_master, "virtual.0.forwarding");
    AcoPhaseStats as;
    run_aco_virtual_phase(g, cg, bias_env, rates, virtual_flows, acfg, va, vr, vf, rho,
                          nullptr, &as);
    res.metrics.virtual_ants += as.ants_injected;
    std::snprintf(detail, sizeof detail, "ants=%ld residual=%ld", as.ants_injected,
                  as.residual);
    res.events.push_back({0, "virtual-setup", "", detail});
  }

  // ---- physical plane and forwarding policy ----
  DataPlane dp;
  SpBpPlane sp;
  const bool fifo = is_fifo_scheme(cfg.scheme);
  if (fifo)
    dp.init(&g);
  else
    sp.init(&g);

  PheromoneViewPolicy count_policy;  // p ~ rho over alive out-links
  count_policy.rho = &rho;
  BiasPheromoneViewPolicy aco_view;  // p ~ clamp(rho + bias drop, floor)
  aco_view.rho = &rho;
  aco_view.bias = &bias_route;
  aco_view.floor = cfg.params.eps;
  const ForwardingPolicy* policy =
      is_aco_scheme(cfg.scheme) ? static_cast<const ForwardingPolicy*>(&aco_view)
                                : &count_policy;

  AntIdealState ant_state;
  if (cfg.scheme == Scheme::AntIdeal) ant_state.init(flows.size());

  Rng arrivals_rng = Rng::stream(inst_master, "arrivals");
  Rng rates_rng = Rng::stream(inst_master, "rates");
  Rng forwarding_rng = Rng::stream(inst_master, "forwarding");
  Rng mobility_rng = Rng::stream(inst_master, "mobility");
  Rng ants_rng = Rng::stream(inst_master, "ants");

  const bool mobile = cfg.mobility.mobile_nodes > 0;
  const bool pauses = mobile && reruns_after_mobility(cfg.scheme);
  const int pause_from = cfg.mobility.update_slot;
  const int pause_to = cfg.mobility.update_slot + cfg.mobility.pause;

  res.moved_totals.assign(size_t(g.link_count()) * n, 0);
  res.arrival_totals.assign(size_t(n) * n, 0);
  res.slots.reserve(T);

  std::vector<double> realized, utility;
  std::vector<int> chosen;

  for (int t = 0; t < T; ++t) {
    // displacement happens at the trigger slot, before anything else moves
    if (mobile && t == cfg.mobility.trigger) {
      MobilityDiff diff = mobility_event(g, cfg.mobility, mobility_rng);
      rates.extend_for_new_links(g, mobility_rng);
      cg = build_conflict_graph(g);
      bias_env = compute_bias_field(g, rates);
      if (fifo) {
        // ACO fields welcome new links at their init level, count-condensed
        // fields at the floor (or the node mean for the no-update ablation)
        double fill = is_aco_scheme(cfg.scheme) ? cfg.params.rho_init : cfg.params.eps;
        adapt_after_mobility(dp, rho, g, diff, cfg.scheme == Scheme::AntBPNoVirt, fill);
      }
      res.moved_totals.resize(size_t(g.link_count()) * n, 0);
      std::snprintf(detail, sizeof detail, "moved=%zu removed=%zu added=%zu",
                    diff.moved_nodes.size(), diff.removed_links.size(),
                    diff.added_links.size());
      res.events.push_back({t, "mobility", "", detail});
      for (int node : diff.moved_nodes) {
        std::snprintf(detail, sizeof detail, "x=%.4f y=%.4f", g.nodes[node].x,
                      g.nodes[node].y);
        res.events.push_back({t, "move", "node " + std::to_string(node), detail});
      }
      for (int e : diff.removed_links)
        res.events.push_back({t, "link-down", link_subject(g, e), ""});
      for (int e : diff.added_links)
        res.events.push_back({t, "link-up", link_subject(g, e), ""});
    }

    // environment draws advance every slot, pause included, so every scheme
    // sees the same arrivals, rates, and failures under one master seed
    std::vector<ArrivalEvent> arrivals = arrivals_at(flows, t, arrivals_rng);
    rates.realized_all(g, rates_rng, realized);

    // re-establishment at the update slot, seeded by the stranded backlog
    if (pauses && t == cfg.mobility.update_slot) {
      std::vector<long> backlogs(size_t(n) * n, 0);
      for (int i = 0; i < n; ++i)
        for (int c = 0; c < n; ++c) backlogs[size_t(i) * n + c] = dp.commodity_count(i, c);
      if (is_count_scheme(cfg.scheme)) {
        VirtualRunConfig vcfg;
        vcfg.steps = cfg.virtual_steps;
        vcfg.eps = cfg.params.eps;
        vcfg.crossing_evaporation = cfg.crossing_evaporation;
        vcfg.debug_checks = debug;
        Rng va = Rng::stream(inst_master, "virtual.1.arrivals");
        Rng vr = Rng::stream(inst_master, "virtual.1.rates");
        VirtualRunStats vs;
        // assignment keeps rho's address: live view policies stay valid
        rho = run_virtual_spbp(g, cg, bias_env, rates, virtual_flows, vcfg, va, vr,
                               &backlogs, &vs);
        res.metrics.virtual_exchanges += vs.exchanges;
        std::snprintf(detail, sizeof detail, "exchanges=%ld residual=%ld", vs.exchanges,
                      vs.residual);
      } else {
        bias_route = bias_env;  // ant baselines refresh their bias view here
        AcoPhaseConfig acfg;
        acfg.steps = cfg.virtual_steps;
        acfg.params = cfg.params;
        acfg.debug_checks = debug;
        Rng va = Rng::stream(inst_master, "virtual.1.arrivals");
        Rng vr = Rng::stream(inst_master, "virtual.1.rates");
        Rng vf = Rng::stream(inst_master, "virtual.1.forwarding");
        AcoPhaseStats as;
        run_aco_virtual_phase(g, cg, bias_env, rates, virtual_flows, acfg, va, vr, vf,
                              rho, &backlogs, &as);
        res.metrics.virtual_ants += as.ants_injected;
        std::snprintf(detail, sizeof detail, "ants=%ld residual=%ld", as.ants_injected,
                      as.residual);
      }
      res.events.push_back({t, "virtual-update", "", detail});
      if (cfg.mobility.pause > 0) res.events.push_back({t, "pause", "", ""});
    }
    if (pauses && cfg.mobility.pause > 0 && t == pause_to)
      res.events.push_back({t, "resume", "", ""});

    const bool paused = pauses && t >= pause_from && t < pause_to;

    SlotReport report;
    report.t = t;
    for (const auto& ev : arrivals) report.injected += ev.count;
    for (const auto& ev : arrivals)
      res.arrival_totals[size_t(ev.node) * n + ev.commodity] += ev.count;

    if (fifo) {
      dp.inject(arrivals, t);
      if (cfg.scheme == Scheme::AntIdeal) ant_state.note_arrivals(flows, arrivals);
      if (!paused) {
        dp.forward_undecided(*policy, forwarding_rng);
        dp.compute_utilities(realized, utility);
        Schedule s = lgs_schedule(cg, utility);
        std::vector<int> cancelled =
            apply_failures(s, fp, t, res.has_rho ? &rho : nullptr,
                           cfg.params.failure_decay, cfg.params.eps);
        for (int e : cancelled)
          res.events.push_back({t, "failure", link_subject(g, e), "transmission cancelled"});
        dp.transmit(s, realized, t, bias_env, report);
        if (cfg.scheme == Scheme::AntIdeal)
          ant_ideal_step(ant_state, g, bias_route, rho, cfg.params, flows, t, ants_rng);
        if (debug) {
          if (!schedule_is_independent(cg, s))
            throw std::logic_error("schedule violates the conflict graph");
          check_capacity(report, realized);
        }
      } else {
        report.backlog = dp.backlog();
      }
      if (debug) dp.check_counts();
    } else {
      sp.inject(arrivals, t);
      sp.compute_utilities(g, bias_route, realized, chosen, utility);
      Schedule s = lgs_schedule(cg, utility);
      std::vector<int> cancelled =
          apply_failures(s, fp, t, nullptr, cfg.params.failure_decay, cfg.params.eps);
      for (int e : cancelled)
        res.events.push_back({t, "failure", link_subject(g, e), "transmission cancelled"});
      sp.transmit(g, s, chosen, realized, utility, t, bias_env, report);
      if (debug) {
        if (!schedule_is_independent(cg, s))
          throw std::logic_error("schedule violates the conflict graph");
        check_capacity(report, realized);
        sp.check_counts();
      }
    }

    for (const Move& m : report.moves)
      res.moved_totals[size_t(m.link) * n + m.commodity] += m.count;

    if (debug && t % 50 == 0) {
      if (fifo && !paused) check_policy_rows(*policy, g, flows);
      if (res.has_rho)
        check_pheromone_floor(rho, g,
                              is_count_scheme(cfg.scheme) ? cfg.params.eps : 0.0);
    }

    res.slots.push_back({t, report.delivered, report.backlog, report.routing_cost,
                         report.active_links});
  }

  // ---- metrics ----
  RunMetrics& m = res.metrics;
  const std::vector<Packet>& packets = fifo ? dp.packets() : sp.packets();
  m.injected = fifo ? dp.injected_total() : sp.injected_total();
  m.delivered = fifo ? dp.delivered_total() : sp.delivered_total();
  m.goodput = double(m.delivered) / T;

  std::vector<FlowKind> kind_of(size_t(n) * n, FlowKind::Streaming);
  for (const FlowSpec& f : flows) kind_of[size_t(f.src) * n + f.dst] = f.kind;
  double lat_sum = 0.0, lat_s = 0.0, lat_b = 0.0;
  long cnt_s = 0, cnt_b = 0, del_s = 0, del_b = 0;
  for (const Packet& p : packets) {
    double lat;
    if (p.delivered_at >= 0)
      lat = double(p.delivered_at - p.injected_at);
    else if (cfg.latency_mode == LatencyMode::Cap)
      lat = double(T);
    else
      lat = double(T - p.injected_at);
    lat_sum += lat;
    bool bursty = kind_of[size_t(p.src) * n + p.commodity] == FlowKind::Bursty;
    if (bursty) {
      lat_b += lat;
      ++cnt_b;
      if (p.delivered_at >= 0) ++del_b;
    } else {
      lat_s += lat;
      ++cnt_s;
      if (p.delivered_at >= 0) ++del_s;
    }
  }
  if (m.injected > 0) {
    m.latency_mean = lat_sum / double(m.injected);
    m.delivery = double(m.delivered) / double(m.injected);
  }
  m.has_streaming = cnt_s > 0;
  m.has_bursty = cnt_b > 0;
  if (cnt_s > 0) {
    m.latency_streaming = lat_s / double(cnt_s);
    m.delivery_streaming = double(del_s) / double(cnt_s);
  }
  if (cnt_b > 0) {
    m.latency_bursty = lat_b / double(cnt_b);
    m.delivery_bursty = double(del_b) / double(cnt_b);
  }

  auto backlog_mean = [&](int a, int b) {
    if (b <= a) return 0.0;
    double s = 0.0;
    for (int t = a; t < b; ++t) s += double(res.slots[t].backlog);
    return s / double(b - a);
  };
  m.backlog_q2 = backlog_mean(T / 4, T / 2);
  m.backlog_q4 = backlog_mean(3 * T / 4, T);
  m.stable = m.backlog_q4 <= 1.5 * m.backlog_q2 + 1e-9;

  if (cfg.scheme == Scheme::AntIdeal) m.proactive_ants = ant_state.ants_emitted_total;
  res.rho = rho;
  res.final_graph = g;
  res.final_link_count = g.alive_link_count();
  res.packets = packets;

  check_flow_conservation(cfg, res);
  return res;
}

void check_flow_conservation(const ScenarioConfig& cfg, RunResult& res) {
  RunMetrics& m = res.metrics;
  m.flowcons_checked = false;
  m.flowcons_max_residual = 0.0;
  m.flowcons_skip_reason.clear();
  for (const FlowSpec& f : res.flows)
    if (f.kind == FlowKind::Bursty) {
      m.flowcons_skip_reason = "bursty flows present";
      return;
    }
  if (cfg.mobility.mobile_nodes > 0) {
    m.flowcons_skip_reason = "link set changes mid-run";
    return;
  }
  if (!m.stable) {
    m.flowcons_skip_reason = "backlog not stable";
    return;
  }
  const NetworkGraph& g = res.initial_graph;
  const int n = g.node_count();
  const double T = double(cfg.traffic.horizon);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < n; ++c) {
      if (c == i) continue;
      double demand = double(res.arrival_totals[size_t(i) * n + c]) / T;
      double in = 0.0, out = 0.0;
      for (int e = 0; e < g.link_count(); ++e) {
        double moved = double(res.moved_totals[size_t(e) * n + c]) / T;
        if (g.links[e].src == i) out += moved;
        if (g.links[e].dst == i) in += moved;
      }
      double denom = std::max(demand, 0.5 * (in + out));
      if (denom < 1e-300) continue;  // commodity never touches this node
      worst = std::max(worst, std::fabs(out - in - demand) / denom);
    }
  }
  m.flowcons_checked = true;
  m.flowcons_max_residual = worst;
}

}  // namespace antbp
