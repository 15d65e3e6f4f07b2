#include "antbp/virtualplane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace antbp {

void VirtualPlane::init(const NetworkGraph* g) {
  g_ = g;
  n_ = g->node_count();
  q_.assign(size_t(n_) * n_, 0);
  n_cross_.assign(size_t(g->link_count()) * n_, 0.0);
  injected_ = consumed_ = exchanges_ = 0;
}

void VirtualPlane::seed_backlog(int node, int commodity, long count) {
  if (count <= 0) return;
  if (node == commodity) {  // already home; counts as served
    injected_ += count;
    consumed_ += count;
    return;
  }
  q_[size_t(node) * n_ + commodity] += count;
  injected_ += count;
}

long VirtualPlane::total_queued() const {
  long s = 0;
  for (long v : q_) s += v;
  return s;
}

void VirtualPlane::inject(const std::vector<ArrivalEvent>& events) {
  for (const auto& ev : events) {
    if (ev.node == ev.commodity) {
      injected_ += ev.count;
      consumed_ += ev.count;
      continue;
    }
    q_[size_t(ev.node) * n_ + ev.commodity] += ev.count;
    injected_ += ev.count;
  }
}

int VirtualPlane::select_commodity(const NetworkGraph& g, int link, const BiasField& bias,
                                   double* pressure_out) const {
  int i = g.links[link].src, j = g.links[link].dst;
  int best = 0;
  double best_p = -std::numeric_limits<double>::infinity();
  for (int c = 0; c < n_; ++c) {
    double p = double(q_[size_t(i) * n_ + c] - q_[size_t(j) * n_ + c]) +
               (bias.at(i, c) - bias.at(j, c));
    if (p > best_p) {
      best_p = p;
      best = c;
    }
  }
  if (pressure_out) *pressure_out = best_p;
  return best;
}

void VirtualPlane::compute_utilities(const NetworkGraph& g, const BiasField& bias,
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
    if (q_[size_t(g.links[e].src) * n_ + c] <= 0) w = 0.0;
    utility[e] = w * realized[e];
  }
}

void VirtualPlane::transmit(const NetworkGraph& g, const Schedule& schedule,
                            const std::vector<int>& chosen,
                            const std::vector<double>& realized,
                            const std::vector<double>& utility) {
  for (int e = 0; e < g.link_count(); ++e) {
    if (!schedule[e] || utility[e] <= 0.0) continue;  // positive weight only
    int c = chosen[e];
    int i = g.links[e].src, j = g.links[e].dst;
    long mu = std::min(q_[size_t(i) * n_ + c], long(realized[e]));
    if (mu <= 0) continue;
    q_[size_t(i) * n_ + c] -= mu;
    if (j == c)
      consumed_ += mu;
    else
      q_[size_t(j) * n_ + c] += mu;
    n_cross_[size_t(e) * n_ + c] += double(mu);
    ++exchanges_;
  }
}

void VirtualPlane::evaporate_crossings(double eps) {
  if (eps <= 0.0) return;
  for (double& v : n_cross_) v *= (1.0 - eps);
}

void VirtualPlane::check_conservation() const {
  if (injected_ != consumed_ + total_queued())
    throw std::runtime_error("virtual plane: count conservation violated");
  for (long v : q_)
    if (v < 0) throw std::runtime_error("virtual plane: negative counter");
}

PheromoneField pheromone_from_counts(const VirtualPlane& vp, const NetworkGraph& g,
                                     double eps) {
  PheromoneField ph;
  ph.init(g.link_count(), g.node_count(), eps);
  for (int e = 0; e < g.link_count(); ++e) {
    if (!g.alive[e]) continue;
    int rev = g.find_link(g.links[e].dst, g.links[e].src);
    for (int c = 0; c < g.node_count(); ++c) {
      double fwd = vp.crossings(e, c);
      double bwd = rev >= 0 ? vp.crossings(rev, c) : 0.0;
      ph.at(e, c) = std::max(fwd - bwd, 0.0) + eps;
    }
  }
  return ph;
}

void MatrixPolicy::probs(const NetworkGraph& g, int node, int commodity,
                         std::vector<double>& out) const {
  const auto& links = g.out_links(node);
  out.assign(links.size(), 0.0);
  double sum = 0.0;
  for (size_t k = 0; k < links.size(); ++k) {
    out[k] = p[size_t(links[k]) * n_nodes + commodity];
    sum += out[k];
  }
  if (sum <= 0.0)
    throw std::runtime_error("forwarding policy: zero mass over alive out-links");
  for (double& v : out) v /= sum;
}

MatrixPolicy policy_from_pheromone(const PheromoneField& ph, const NetworkGraph& g) {
  MatrixPolicy mp;
  mp.n_nodes = g.node_count();
  mp.p.assign(size_t(g.link_count()) * mp.n_nodes, 0.0);
  for (int i = 0; i < g.node_count(); ++i) {
    const auto& out = g.out_links(i);
    if (out.empty())
      throw std::runtime_error("policy_from_pheromone: node with no alive out-links");
    for (int c = 0; c < mp.n_nodes; ++c) {
      double sum = 0.0;
      for (int e : out) sum += ph.at(e, c);
      for (int e : out) mp.p[size_t(e) * mp.n_nodes + c] = ph.at(e, c) / sum;
    }
  }
  return mp;
}

PheromoneField run_virtual_spbp(const NetworkGraph& g, const ConflictGraph& cg,
                                const BiasField& bias, const LinkRateModel& rates,
                                const std::vector<FlowSpec>& virtual_flows,
                                const VirtualRunConfig& cfg, Rng& arrival_rng,
                                Rng& rate_rng, const std::vector<long>* initial_backlogs,
                                VirtualRunStats* stats) {
  VirtualPlane vp;
  vp.init(&g);
  if (initial_backlogs) {
    int n = g.node_count();
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c)
        vp.seed_backlog(i, c, (*initial_backlogs)[size_t(i) * n + c]);
  }
  std::vector<double> realized, utility;
  std::vector<int> chosen;
  for (int tau = 0; tau < cfg.steps; ++tau) {
    rates.realized_all(g, rate_rng, realized);
    vp.inject(arrivals_at(virtual_flows, tau, arrival_rng));
    vp.compute_utilities(g, bias, realized, chosen, utility);
    Schedule s = lgs_schedule(cg, utility);
    // n <- (1 - evap) * n + mu: decay the old trail, then add this step's
    vp.evaporate_crossings(cfg.crossing_evaporation);
    vp.transmit(g, s, chosen, realized, utility);
    if (cfg.debug_checks) vp.check_conservation();
  }
  if (stats) {
    stats->injected = vp.injected_total();
    stats->consumed = vp.consumed_total();
    stats->exchanges = vp.exchange_count();
    stats->residual = vp.total_queued();
  }
  return pheromone_from_counts(vp, g, cfg.eps);
}

}  // namespace antbp
