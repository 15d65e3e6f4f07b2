#include "antbp/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace antbp {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::AntBP: return "ant-bp";
    case Scheme::AntBPMirror: return "ant-bp-mirror";
    case Scheme::AntBPNoVirt: return "ant-bp-novirt";
    case Scheme::SpBp: return "sp-bp";
    case Scheme::AntBaseline: return "ant-baseline";
    case Scheme::AntIdeal: return "ant-ideal";
  }
  return "?";
}

bool scheme_uses_pheromones(Scheme s) { return s != Scheme::SpBp; }

void PheromoneViewPolicy::probs(const NetworkGraph& g, int node, int commodity,
                                std::vector<double>& out) const {
  const auto& links = g.out_links(node);
  out.assign(links.size(), 0.0);
  double sum = 0.0;
  for (size_t k = 0; k < links.size(); ++k) {
    out[k] = rho->at(links[k], commodity);
    sum += out[k];
  }
  if (sum <= 0.0)
    throw std::runtime_error("pheromone policy: zero mass over alive out-links");
  for (double& v : out) v /= sum;
}

void BiasPheromoneViewPolicy::probs(const NetworkGraph& g, int node, int commodity,
                                    std::vector<double>& out) const {
  const auto& links = g.out_links(node);
  out.assign(links.size(), 0.0);
  double sum = 0.0;
  for (size_t k = 0; k < links.size(); ++k) {
    double v = rho->at(links[k], commodity) + bias->drop(g, links[k], commodity);
    if (v <= 0.0) v = floor;  // keep losing directions reachable
    out[k] = v;
    sum += v;
  }
  for (double& v : out) v /= sum;
}

MatrixPolicy aco_policy(const PheromoneField& ph, const NetworkGraph& g, double alpha,
                        double beta, const std::vector<double>* heuristic) {
  MatrixPolicy mp;
  mp.n_nodes = g.node_count();
  mp.p.assign(size_t(g.link_count()) * mp.n_nodes, 0.0);
  for (int i = 0; i < g.node_count(); ++i) {
    const auto& out = g.out_links(i);
    if (out.empty()) throw std::runtime_error("aco_policy: node with no alive out-links");
    for (int c = 0; c < mp.n_nodes; ++c) {
      double sum = 0.0;
      for (int e : out) {
        double h = heuristic ? (*heuristic)[e] : 1.0;
        double v = std::pow(ph.at(e, c), alpha) * std::pow(h, beta);
        mp.p[size_t(e) * mp.n_nodes + c] = v;
        sum += v;
      }
      if (sum <= 0.0) throw std::runtime_error("aco_policy: zero mass at a node");
      for (int e : out) mp.p[size_t(e) * mp.n_nodes + c] /= sum;
    }
  }
  return mp;
}

MatrixPolicy aco_bias_policy(const PheromoneField& ph, const BiasField& bias,
                             const NetworkGraph& g, double floor) {
  MatrixPolicy mp;
  mp.n_nodes = g.node_count();
  mp.p.assign(size_t(g.link_count()) * mp.n_nodes, 0.0);
  BiasPheromoneViewPolicy view;
  view.rho = &ph;
  view.bias = &bias;
  view.floor = floor;
  std::vector<double> row;
  for (int i = 0; i < g.node_count(); ++i) {
    const auto& out = g.out_links(i);
    if (out.empty())
      throw std::runtime_error("aco_bias_policy: node with no alive out-links");
    for (int c = 0; c < mp.n_nodes; ++c) {
      view.probs(g, i, c, row);
      for (size_t k = 0; k < out.size(); ++k)
        mp.p[size_t(out[k]) * mp.n_nodes + c] = row[k];
    }
  }
  return mp;
}

void evaporate(PheromoneField& ph, double eps) {
  if (eps <= 0.0) return;
  for (double& v : ph.rho) v *= (1.0 - eps);
}

void deposit(PheromoneField& ph, int link, int commodity, double amount) {
  ph.at(link, commodity) += amount;
}

void aco_update(PheromoneField& ph, const std::vector<AntPath>& ants, double evap,
                const DepositRule& rule) {
  evaporate(ph, evap);
  for (const auto& ant : ants) {
    double amount = rule.kind == DepositRule::Constant
                        ? rule.theta
                        : 1.0 / double(std::max(1, ant.latency()));
    for (int e : ant.links) deposit(ph, e, ant.commodity, amount);
  }
}

void run_aco_virtual_phase(const NetworkGraph& g, const ConflictGraph& cg,
                           const BiasField& bias, const LinkRateModel& rates,
                           const std::vector<FlowSpec>& virtual_flows,
                           const AcoPhaseConfig& cfg, Rng& arrival_rng, Rng& rate_rng,
                           Rng& forward_rng, PheromoneField& rho,
                           const std::vector<long>* initial_backlogs,
                           AcoPhaseStats* stats) {
  int n = g.node_count();
  if (rho.link_count() != g.link_count() || rho.n_nodes != n)
    rho.init(g.link_count(), n, cfg.params.rho_init);
  BiasPheromoneViewPolicy policy;
  policy.rho = &rho;
  policy.bias = &bias;
  policy.floor = cfg.params.eps;

  // ants carry just their commodity through the same two-stage queues as data
  std::vector<std::deque<int>> q_node(n), q_link(g.link_count());
  long injected = 0, consumed = 0;
  if (initial_backlogs) {
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) {
        long k = (*initial_backlogs)[size_t(i) * n + c];
        injected += k;
        if (i == c) {
          consumed += k;
          continue;
        }
        for (long r = 0; r < k; ++r) q_node[i].push_back(c);
      }
  }

  std::vector<double> realized, utility;
  std::vector<std::pair<std::pair<int, int>, double>> deposits;  // ((link, c), amount)
  for (int tau = 0; tau < cfg.steps; ++tau) {
    rates.realized_all(g, rate_rng, realized);
    for (const auto& ev : arrivals_at(virtual_flows, tau, arrival_rng)) {
      injected += ev.count;
      if (ev.node == ev.commodity) {
        consumed += ev.count;
        continue;
      }
      for (int k = 0; k < ev.count; ++k) q_node[ev.node].push_back(ev.commodity);
    }
    for (int i = 0; i < n; ++i) {
      auto& q = q_node[i];
      while (!q.empty()) {
        int c = q.front();
        q.pop_front();
        q_link[policy.sample(g, i, c, forward_rng)].push_back(c);
      }
    }
    utility.assign(g.link_count(), 0.0);
    for (int e = 0; e < g.link_count(); ++e)
      if (g.alive[e]) utility[e] = double(q_link[e].size()) * realized[e];
    Schedule s = lgs_schedule(cg, utility);
    deposits.clear();
    for (int e = 0; e < g.link_count(); ++e) {
      if (!s[e]) continue;
      auto& q = q_link[e];
      long mu = std::min(long(q.size()), long(realized[e]));
      int j = g.links[e].dst;
      for (long k = 0; k < mu; ++k) {
        int c = q.front();
        q.pop_front();
        if (j == c)
          ++consumed;
        else
          q_node[j].push_back(c);
        deposits.push_back({{e, c}, cfg.params.deposit});
      }
    }
    evaporate(rho, cfg.params.evaporation);
    for (auto& [key, amount] : deposits) deposit(rho, key.first, key.second, amount);
    if (cfg.debug_checks) {
      long queued = 0;
      for (auto& q : q_node) queued += long(q.size());
      for (auto& q : q_link) queued += long(q.size());
      if (injected != consumed + queued)
        throw std::runtime_error("aco virtual phase: ant conservation violated");
    }
  }
  if (stats) {
    long queued = 0;
    for (auto& q : q_node) queued += long(q.size());
    for (auto& q : q_link) queued += long(q.size());
    stats->ants_injected = injected;
    stats->ants_consumed = consumed;
    stats->residual = queued;
  }
}

// ---- per-commodity reference plane ----

void SpBpPlane::init(const NetworkGraph* g) {
  g_ = g;
  n_ = g->node_count();
  packets_.clear();
  q_.assign(size_t(n_) * n_, {});
  backlog_ = injected_total_ = delivered_total_ = 0;
}

void SpBpPlane::inject(const std::vector<ArrivalEvent>& events, int t) {
  for (const auto& ev : events) {
    for (int k = 0; k < ev.count; ++k) {
      Packet p;
      p.id = uint32_t(packets_.size());
      p.src = ev.node;
      p.commodity = ev.commodity;
      p.injected_at = t;
      ++injected_total_;
      if (ev.node == ev.commodity) {
        p.delivered_at = t;
        ++delivered_total_;
        packets_.push_back(p);
        continue;
      }
      packets_.push_back(p);
      q_[size_t(ev.node) * n_ + ev.commodity].push_back(p.id);
      ++backlog_;
    }
  }
}

int SpBpPlane::select_commodity(const NetworkGraph& g, int link, const BiasField& bias,
                                double* pressure_out) const {
  int i = g.links[link].src, j = g.links[link].dst;
  int best = 0;
  double best_p = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < n_; ++c) {
    double p = double(count(i, c) - count(j, c)) + (bias.at(i, c) - bias.at(j, c));
    if (p > best_p) {
      best_p = p;
      best = c;
    }
  }
  if (pressure_out) *pressure_out = best_p;
  return best;
}

void SpBpPlane::compute_utilities(const NetworkGraph& g, const BiasField& bias,
                                  const std::vector<double>& realized,
                                  std::vector<int>& chosen,
                                  std::vector<double>& utility) const {
  int m = g.link_count();
  chosen.assign(m, -1);
  utility.assign(m, 0.0);
  for (int e = 0; e < m; ++e) {
    if (!g.alive[e]) continue;
    double pressure = 0.0;
    int c = select_commodity(g, e, bias, &pressure);
    chosen[e] = c;
    double w = std::max(pressure, 0.0);
    if (count(g.links[e].src, c) <= 0) w = 0.0;
    utility[e] = w * realized[e];
  }
}

void SpBpPlane::transmit(const NetworkGraph& g, const Schedule& schedule,
                         const std::vector<int>& chosen,
                         const std::vector<double>& realized,
                         const std::vector<double>& utility, int t,
                         const BiasField& bias, SlotReport& report) {
  for (int e = 0; e < g.link_count(); ++e) {
    if (!schedule[e] || utility[e] <= 0.0) continue;  // positive weight only
    if (!g.alive[e]) throw std::runtime_error("transmit: dead link scheduled");
    ++report.active_links;
    int c = chosen[e];
    int i = g.links[e].src, j = g.links[e].dst;
    auto& q = q_[size_t(i) * n_ + c];
    long mu = std::min(long(q.size()), long(realized[e]));
    if (mu <= 0) continue;
    for (long k = 0; k < mu; ++k) {
      uint32_t id = q.front();
      q.pop_front();
      Packet& p = packets_[id];
      ++p.hops;
      if (j == c) {
        p.delivered_at = t + 1;  // the slot-t transmission completes at t+1
        ++delivered_total_;
        ++report.delivered;
        --backlog_;
      } else {
        q_[size_t(j) * n_ + c].push_back(id);
      }
    }
    report.moves.push_back({e, c, int(mu)});
    report.routing_cost += double(mu) * (bias.at(j, c) - bias.at(i, c));
  }
  report.backlog = backlog_;
}

void SpBpPlane::check_counts() const {
  long total = 0;
  for (const auto& q : q_) total += long(q.size());
  if (total != backlog_) throw std::runtime_error("sp-bp plane: backlog counter drifted");
  if (injected_total_ != delivered_total_ + backlog_)
    throw std::runtime_error("sp-bp plane: packet conservation violated");
}

// ---- proactive ants ----

void AntIdealState::init(size_t n_flows) {
  ants.clear();
  injected_per_flow.assign(n_flows, 0);
  emitted_per_flow.assign(n_flows, 0);
  ants_emitted_total = ants_delivered_total = ants_discarded_total = 0;
}

void AntIdealState::note_arrivals(const std::vector<FlowSpec>& flows,
                                  const std::vector<ArrivalEvent>& events) {
  for (const auto& ev : events)
    for (size_t f = 0; f < flows.size(); ++f)
      if (flows[f].src == ev.node && flows[f].dst == ev.commodity) {
        injected_per_flow[f] += ev.count;
        break;
      }
}

void ant_ideal_step(AntIdealState& st, const NetworkGraph& g, const BiasField& bias,
                    PheromoneField& rho, const SchemeParams& params,
                    const std::vector<FlowSpec>& flows, int t, Rng& rng) {
  BiasPheromoneViewPolicy policy;
  policy.rho = &rho;
  policy.bias = &bias;
  policy.floor = params.eps;
  size_t hop_cap = size_t(params.hop_cap_factor) * size_t(g.node_count());

  std::vector<AntPath> delivered;
  std::vector<ProactiveAnt> survivors;
  survivors.reserve(st.ants.size());
  for (auto& ant : st.ants) {
    int e;
    if (rng.bernoulli(params.explore_prob)) {
      const auto& out = g.out_links(ant.node);
      if (out.empty()) throw std::runtime_error("ant step: node with no out-links");
      e = out[size_t(rng.uniform_int(0, int64_t(out.size()) - 1))];
    } else {
      e = policy.sample(g, ant.node, ant.commodity, rng);
    }
    ant.node = g.links[e].dst;
    ant.links.push_back(e);
    if (ant.node == ant.commodity) {
      AntPath path;
      path.commodity = ant.commodity;
      path.links = std::move(ant.links);
      path.departure = ant.departure;
      path.arrival = t;
      delivered.push_back(std::move(path));
      ++st.ants_delivered_total;
    } else if (ant.links.size() >= hop_cap) {
      ++st.ants_discarded_total;  // lost, no reinforcement
    } else {
      survivors.push_back(std::move(ant));
    }
  }
  st.ants.swap(survivors);

  aco_update(rho, delivered, params.evaporation,
             {DepositRule::InversePathCost, params.deposit});

  for (size_t f = 0; f < flows.size(); ++f) {
    long due = st.injected_per_flow[f] / params.ant_interval;
    while (st.emitted_per_flow[f] < due) {
      ProactiveAnt ant;
      ant.commodity = flows[f].dst;
      ant.node = flows[f].src;
      ant.departure = t;
      st.ants.push_back(std::move(ant));
      ++st.emitted_per_flow[f];
      ++st.ants_emitted_total;
    }
  }
}

}  // namespace antbp
