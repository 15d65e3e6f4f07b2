#include "antbp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace antbp {

void FailureProcess::build(const NetworkGraph& g, const FailureConfig& cfg, int horizon,
                           Rng& rng) {
  cfg_ = cfg;
  horizon_ = horizon;
  targets_.clear();
  window_.clear();
  fails_.assign(horizon, {});
  if (cfg.kind == FailureConfig::None) return;

  if (cfg.kind == FailureConfig::AllLinks) {
    for (int e = 0; e < g.link_count(); ++e)
      if (g.alive[e]) targets_.emplace_back(e, rng.uniform(0.0, cfg.p_max));
    // memoryless: resolve every (slot, link) attempt up front
    for (int t = 0; t < horizon; ++t)
      for (auto& [e, p] : targets_)
        if (rng.bernoulli(p)) fails_[t].push_back(e);
    return;
  }

  if (cfg.kind == FailureConfig::BwPersist) {
    std::vector<int> ranked = edge_betweenness_ranking(g);
    int k = std::max(1, int(std::ceil(cfg.top_fraction * double(ranked.size()))));
    for (int i = 0; i < k && i < int(ranked.size()); ++i)
      targets_.emplace_back(ranked[i], rng.uniform(0.0, cfg.p_max));
  } else {  // LocalPersist: links inside a random disk holding ~5-6% of nodes
    int n = g.node_count();
    int lo = int(std::ceil(cfg.region_lo * n));
    int hi = std::max(lo, int(std::floor(cfg.region_hi * n)));
    int k = std::clamp(int(std::lround(0.5 * (cfg.region_lo + cfg.region_hi) * n)), lo, hi);
    double cx = rng.uniform(0.0, g.area_side);
    double cy = rng.uniform(0.0, g.area_side);
    std::vector<double> d2(n);
    for (int i = 0; i < n; ++i) {
      double dx = g.nodes[i].x - cx, dy = g.nodes[i].y - cy;
      d2[i] = dx * dx + dy * dy;
    }
    std::vector<double> sorted = d2;
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    double r2 = sorted[k - 1];
    std::vector<uint8_t> inside(n, 0);
    for (int i = 0; i < n; ++i) inside[i] = d2[i] <= r2;
    for (int e = 0; e < g.link_count(); ++e)
      if (g.alive[e] && inside[g.links[e].src] && inside[g.links[e].dst])
        targets_.emplace_back(e, rng.uniform(0.0, cfg.p_max));
  }

  // M/G/infinity outage windows per target: event rate p_e / mean_duration, so
  // the long-run fraction of time under threat is ~p_e
  window_.assign(targets_.size(), std::vector<uint8_t>(horizon, 0));
  for (size_t k = 0; k < targets_.size(); ++k) {
    double lambda = targets_[k].second / cfg.mean_duration;
    for (int t = 0; t < horizon; ++t) {
      long events = rng.poisson(lambda);
      for (long ev = 0; ev < events; ++ev) {
        long dur = std::max(1l, std::lround(rng.normal(cfg.mean_duration, cfg.duration_std)));
        for (int u = t; u < std::min<long>(horizon, t + dur); ++u) window_[k][u] = 1;
      }
    }
  }
  // attempts are resolved for every threatened (slot, link) pair whether or
  // not a scheme ends up scheduling the link: keeps schemes comparable
  for (size_t k = 0; k < targets_.size(); ++k)
    for (int t = 0; t < horizon; ++t)
      if (window_[k][t] && (cfg.full_outage || rng.bernoulli(targets_[k].second)))
        fails_[t].push_back(targets_[k].first);
  for (auto& v : fails_) std::sort(v.begin(), v.end());
}

const std::vector<int>& FailureProcess::failing_at(int t) const {
  if (t < 0 || t >= horizon_) return empty_;
  return fails_[t];
}

std::vector<std::pair<int, double>> FailureProcess::mask_at(int t) const {
  std::vector<std::pair<int, double>> out;
  if (t < 0 || t >= horizon_ || cfg_.kind == FailureConfig::None) return out;
  if (cfg_.kind == FailureConfig::AllLinks) {
    for (int e : fails_[t]) out.emplace_back(e, 1.0);
    return out;
  }
  for (size_t k = 0; k < targets_.size(); ++k)
    if (window_[k][t])
      out.emplace_back(targets_[k].first, cfg_.full_outage ? 1.0 : targets_[k].second);
  std::sort(out.begin(), out.end());
  return out;
}

bool FailureProcess::window_active(int target_idx, int t) const {
  return window_[target_idx][t] != 0;
}

double FailureProcess::occupancy_fraction(int target_idx) const {
  long active = 0;
  for (uint8_t v : window_[target_idx]) active += v;
  return horizon_ ? double(active) / horizon_ : 0.0;
}

std::vector<int> apply_failures(Schedule& schedule, const FailureProcess& fp, int t,
                                PheromoneField* rho, double decay, double eps) {
  std::vector<int> cancelled;
  for (int e : fp.failing_at(t)) {
    if (!schedule[e]) continue;
    schedule[e] = 0;
    cancelled.push_back(e);
    if (rho)
      for (int c = 0; c < rho->n_nodes; ++c)
        rho->at(e, c) = std::max(rho->at(e, c) * (1.0 - decay), eps);
  }
  return cancelled;
}

namespace {
double reflect_into(double v, double side) {
  double period = 2.0 * side;
  v = std::fmod(v, period);
  if (v < 0.0) v += period;
  return v > side ? period - v : v;
}

// unit-disk connectivity for a candidate position set
bool positions_connected(const std::vector<Vec2>& pos) {
  int n = int(pos.size());
  if (n == 0) return true;
  std::vector<int> stack{0};
  std::vector<uint8_t> seen(n, 0);
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u) {
      if (seen[u]) continue;
      double dx = pos[v].x - pos[u].x, dy = pos[v].y - pos[u].y;
      if (dx * dx + dy * dy <= 1.0) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == n;
}
}  // namespace

MobilityDiff mobility_event(NetworkGraph& g, const MobilityConfig& cfg, Rng& rng) {
  MobilityDiff diff;
  int n = g.node_count();
  int m = std::min(cfg.mobile_nodes, n);
  if (m <= 0) return diff;

  std::set<int> chosen;
  while (int(chosen.size()) < m) chosen.insert(int(rng.uniform_int(0, n - 1)));

  double sigma = cfg.step_std * std::sqrt(double(std::max(1, cfg.walk_steps)));
  std::vector<Vec2> pos = g.nodes;
  for (int node : chosen) {  // ascending id: std::set iterates sorted
    Vec2 keep = pos[node];
    bool moved = false;
    for (int attempt = 0; attempt < cfg.retries; ++attempt) {
      pos[node].x = reflect_into(keep.x + rng.normal(0.0, sigma), g.area_side);
      pos[node].y = reflect_into(keep.y + rng.normal(0.0, sigma), g.area_side);
      if (positions_connected(pos)) {
        moved = true;
        break;
      }
    }
    if (moved)
      diff.moved_nodes.push_back(node);
    else
      pos[node] = keep;  // walk fully rejected, node stays
  }
  g.nodes = pos;

  for (int e = 0; e < g.link_count(); ++e)
    if (g.alive[e] && g.dist(g.links[e].src, g.links[e].dst) > 1.0) {
      g.kill_link(e);
      diff.removed_links.push_back(e);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g.dist(i, j) <= 1.0) {
        if (g.find_link(i, j) < 0) diff.added_links.push_back(g.add_or_revive_link(i, j));
        if (g.find_link(j, i) < 0) diff.added_links.push_back(g.add_or_revive_link(j, i));
      }
  std::sort(diff.added_links.begin(), diff.added_links.end());
  g.rebuild_adjacency();
  return diff;
}

void adapt_after_mobility(DataPlane& dp, PheromoneField& rho, const NetworkGraph& g,
                          const MobilityDiff& diff, bool new_links_take_mean,
                          double eps) {
  for (int e : diff.removed_links) dp.revert_link(e);
  dp.on_topology_extended();
  rho.extend(g.link_count(), eps);
  for (int e : diff.added_links) {
    int src = g.links[e].src;
    for (int c = 0; c < rho.n_nodes; ++c) {
      double v = eps;
      if (new_links_take_mean) {
        // neutral entry: the node's average pheromone toward c
        double sum = 0.0;
        int cnt = 0;
        for (int f : g.out_links(src))
          if (f != e) {
            sum += rho.at(f, c);
            ++cnt;
          }
        v = cnt ? sum / cnt : eps;
      }
      rho.at(e, c) = v;
    }
  }
}

}  // namespace antbp
