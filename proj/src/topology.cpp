#include "antbp/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stack>

namespace antbp {

static uint64_t pair_key(int src, int dst) {
  return (uint64_t(uint32_t(src)) << 32) | uint32_t(dst);
}

int NetworkGraph::alive_link_count() const {
  int n = 0;
  for (uint8_t a : alive) n += a;
  return n;
}

int NetworkGraph::find_link(int src, int dst) const {
  auto it = index_.find(pair_key(src, dst));
  if (it == index_.end() || !alive[it->second]) return -1;
  return it->second;
}

int NetworkGraph::add_or_revive_link(int src, int dst) {
  auto it = index_.find(pair_key(src, dst));
  if (it != index_.end()) {
    alive[it->second] = 1;
    return it->second;
  }
  int id = int(links.size());
  links.push_back({src, dst});
  alive.push_back(1);
  index_.emplace(pair_key(src, dst), id);
  return id;
}

void NetworkGraph::kill_link(int id) { alive[id] = 0; }

void NetworkGraph::rebuild_adjacency() {
  out_.assign(nodes.size(), {});
  in_.assign(nodes.size(), {});
  for (int e = 0; e < link_count(); ++e) {
    if (!alive[e]) continue;
    out_[links[e].src].push_back(e);
    in_[links[e].dst].push_back(e);
  }
}

bool NetworkGraph::connected() const {
  int n = node_count();
  if (n == 0) return true;
  std::vector<uint8_t> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    auto visit = [&](int u) {
      if (!seen[u]) {
        seen[u] = 1;
        ++count;
        stack.push_back(u);
      }
    };
    for (int e : out_[v]) visit(links[e].dst);
    for (int e : in_[v]) visit(links[e].src);
  }
  return count == n;
}

double NetworkGraph::dist(int a, int b) const {
  double dx = nodes[a].x - nodes[b].x;
  double dy = nodes[a].y - nodes[b].y;
  return std::sqrt(dx * dx + dy * dy);
}

NetworkGraph generate_topology(int n_nodes, double density, Rng& rng, int max_retries) {
  if (n_nodes <= 0) throw std::invalid_argument("generate_topology: n_nodes must be positive");
  if (density <= 0.0) throw std::invalid_argument("generate_topology: density must be positive");
  // density = nodes per unit area; square of area n/density
  double side = std::sqrt(double(n_nodes) / density);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    NetworkGraph g;
    g.area_side = side;
    g.nodes.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      g.nodes[i].x = rng.uniform(0.0, side);
      g.nodes[i].y = rng.uniform(0.0, side);
    }
    for (int i = 0; i < n_nodes; ++i)
      for (int j = i + 1; j < n_nodes; ++j)
        if (g.dist(i, j) <= 1.0) {
          g.add_or_revive_link(i, j);
          g.add_or_revive_link(j, i);
        }
    g.rebuild_adjacency();
    if (g.connected()) return g;
  }
  throw std::runtime_error("generate_topology: no connected sample within max_retries");
}

ConflictGraph build_conflict_graph(const NetworkGraph& g) {
  ConflictGraph cg;
  int m = g.link_count();
  cg.adj.assign(m, {});
  // directed links conflict when they touch a common node in any role
  std::vector<std::vector<int>> incident(g.node_count());
  for (int e = 0; e < m; ++e) {
    if (!g.alive[e]) continue;
    incident[g.links[e].src].push_back(e);
    incident[g.links[e].dst].push_back(e);
  }
  std::vector<int> last_seen(m, -1);
  for (int e = 0; e < m; ++e) {
    if (!g.alive[e]) continue;
    auto scan = [&](const std::vector<int>& bucket) {
      for (int f : bucket) {
        if (f == e || last_seen[f] == e) continue;  // dedup (i,j)/(j,i) double hit
        last_seen[f] = e;
        if (f > e) cg.edges.emplace_back(e, f);
        cg.adj[e].push_back(f);
      }
    };
    scan(incident[g.links[e].src]);
    scan(incident[g.links[e].dst]);
  }
  for (auto& a : cg.adj) std::sort(a.begin(), a.end());
  return cg;
}

void LinkRateModel::sample_long_term(const NetworkGraph& g, Rng& rng) {
  long_term.resize(g.link_count());
  for (int e = 0; e < g.link_count(); ++e) long_term[e] = rng.uniform(rate_lo, rate_hi);
}

void LinkRateModel::extend_for_new_links(const NetworkGraph& g, Rng& rng) {
  size_t old = long_term.size();
  long_term.resize(g.link_count());
  for (size_t e = old; e < long_term.size(); ++e)
    long_term[e] = rng.uniform(rate_lo, rate_hi);
}

double LinkRateModel::realized(int link, Rng& rng) const {
  double v = rng.normal_truncated(long_term[link], noise_std, trunc_halfwidth);
  return std::max(0.0, std::round(v));
}

void LinkRateModel::realized_all(const NetworkGraph& g, Rng& rng,
                                 std::vector<double>& out) const {
  out.assign(g.link_count(), 0.0);
  for (int e = 0; e < g.link_count(); ++e)
    if (g.alive[e]) out[e] = realized(e, rng);
}

double LinkRateModel::mean_alive(const NetworkGraph& g) const {
  double sum = 0.0;
  int n = 0;
  for (int e = 0; e < g.link_count(); ++e)
    if (g.alive[e]) {
      sum += long_term[e];
      ++n;
    }
  return n ? sum / n : 0.0;
}

double LinkRateModel::max_alive(const NetworkGraph& g) const {
  double mx = 0.0;
  for (int e = 0; e < g.link_count(); ++e)
    if (g.alive[e]) mx = std::max(mx, long_term[e]);
  return mx;
}

// Dijkstra toward `commodity`, relaxing links backward: the tentative label of
// a node is the cheapest cost of its outgoing path to c.
static void bias_to_commodity(const NetworkGraph& g, const std::vector<double>& delta,
                              int commodity, double* out) {
  int n = g.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::fill(out, out + n, inf);
  out[commodity] = 0.0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.emplace(0.0, commodity);
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > out[v]) continue;
    for (int e : g.in_links(v)) {
      int u = g.links[e].src;
      double nd = d + delta[e];
      if (nd < out[u]) {
        out[u] = nd;
        pq.emplace(nd, u);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (out[i] == inf)
      throw std::runtime_error("compute_bias_field: commodity unreachable from some node");
}

static BiasField bias_field_common(const NetworkGraph& g, const LinkRateModel& rates,
                                   bool parallel) {
  BiasField bf;
  bf.n_nodes = g.node_count();
  double rbar = rates.mean_alive(g);
  double rmax = rates.max_alive(g);
  bf.delta.assign(g.link_count(), std::numeric_limits<double>::infinity());
  for (int e = 0; e < g.link_count(); ++e)
    if (g.alive[e]) bf.delta[e] = rbar * rmax / rates.long_term[e];
  bf.b.assign(size_t(bf.n_nodes) * bf.n_nodes, 0.0);
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int c = 0; c < bf.n_nodes; ++c)
      bias_to_commodity(g, bf.delta, c, bf.b.data() + size_t(c) * bf.n_nodes);
  } else {
    for (int c = 0; c < bf.n_nodes; ++c)
      bias_to_commodity(g, bf.delta, c, bf.b.data() + size_t(c) * bf.n_nodes);
  }
  return bf;
}

BiasField compute_bias_field(const NetworkGraph& g, const LinkRateModel& rates) {
  return bias_field_common(g, rates, true);
}

BiasField compute_bias_field_serial(const NetworkGraph& g, const LinkRateModel& rates) {
  return bias_field_common(g, rates, false);
}

// One Brandes pass (unit weights) rooted at s over the undirected skeleton.
// Adds the pair-dependency of every ordered (s, t) pair to `acc`, keyed by
// undirected edge index.
static void brandes_pass(const std::vector<std::vector<std::pair<int, int>>>& adj, int s,
                         double* acc) {
  int n = int(adj.size());
  std::vector<int> dist(n, -1), sigma(n, 0), order;
  std::vector<double> delta(n, 0.0);
  order.reserve(n);
  std::queue<int> q;
  dist[s] = 0;
  sigma[s] = 1;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    order.push_back(v);
    for (auto [w, _] : adj[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
      if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
    }
  }
  for (int idx = int(order.size()) - 1; idx >= 0; --idx) {
    int w = order[idx];
    for (auto [v, eid] : adj[w]) {
      if (dist[v] == dist[w] - 1) {
        double share = double(sigma[v]) / double(sigma[w]) * (1.0 + delta[w]);
        acc[eid] += share;
        delta[v] += share;
      }
    }
  }
}

// Builds the undirected skeleton; returns per-directed-link scores.
static std::vector<double> betweenness_common(const NetworkGraph& g, bool parallel) {
  int n = g.node_count();
  // undirected edge ids in order of the lower directed link id
  std::vector<int> undirected_id(g.link_count(), -1);
  int n_edges = 0;
  for (int e = 0; e < g.link_count(); ++e) {
    if (!g.alive[e]) continue;
    if (undirected_id[e] >= 0) continue;
    int rev = g.find_link(g.links[e].dst, g.links[e].src);
    undirected_id[e] = n_edges;
    if (rev >= 0) undirected_id[rev] = n_edges;
    ++n_edges;
  }
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge id)
  for (int e = 0; e < g.link_count(); ++e) {
    if (!g.alive[e]) continue;
    adj[g.links[e].src].emplace_back(g.links[e].dst, undirected_id[e]);
  }
  std::vector<double> edge_score(n_edges, 0.0);
  if (parallel) {
    // per-source slabs reduced in source order, so the floating-point sum is
    // identical whatever the thread count
    std::vector<double> slabs(size_t(n) * n_edges, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int s = 0; s < n; ++s) brandes_pass(adj, s, slabs.data() + size_t(s) * n_edges);
    for (int s = 0; s < n; ++s)
      for (int e = 0; e < n_edges; ++e) edge_score[e] += slabs[size_t(s) * n_edges + e];
  } else {
    std::vector<double> tmp(n_edges);
    for (int s = 0; s < n; ++s) {
      std::fill(tmp.begin(), tmp.end(), 0.0);
      brandes_pass(adj, s, tmp.data());
      for (int e = 0; e < n_edges; ++e) edge_score[e] += tmp[e];
    }
  }
  std::vector<double> out(g.link_count(), 0.0);
  for (int e = 0; e < g.link_count(); ++e)
    if (g.alive[e]) out[e] = edge_score[undirected_id[e]];
  return out;
}

std::vector<double> edge_betweenness(const NetworkGraph& g) {
  return betweenness_common(g, true);
}

std::vector<double> edge_betweenness_serial(const NetworkGraph& g) {
  return betweenness_common(g, false);
}

std::vector<int> edge_betweenness_ranking(const NetworkGraph& g) {
  std::vector<double> score = edge_betweenness(g);
  std::vector<int> ids;
  for (int e = 0; e < g.link_count(); ++e)
    if (g.alive[e]) ids.push_back(e);
  std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  return ids;
}

void save_topology(const std::string& path, const NetworkGraph& g,
                   const LinkRateModel& rates) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_topology: cannot open " + path);
  char buf[160];
  std::snprintf(buf, sizeof buf, "nodes %d side %.17g\n", g.node_count(), g.area_side);
  f << buf;
  for (int i = 0; i < g.node_count(); ++i) {
    std::snprintf(buf, sizeof buf, "node %d %.17g %.17g\n", i, g.nodes[i].x, g.nodes[i].y);
    f << buf;
  }
  for (int e = 0; e < g.link_count(); ++e) {
    if (!g.alive[e]) continue;
    std::snprintf(buf, sizeof buf, "link %d %d %.17g\n", g.links[e].src, g.links[e].dst,
                  rates.long_term[e]);
    f << buf;
  }
}

NetworkGraph load_topology(const std::string& path, LinkRateModel& rates) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_topology: cannot open " + path);
  NetworkGraph g;
  std::string word;
  int n = 0;
  if (!(f >> word >> n) || word != "nodes")
    throw std::runtime_error("load_topology: malformed header in " + path);
  if (!(f >> word >> g.area_side) || word != "side")
    throw std::runtime_error("load_topology: malformed header in " + path);
  g.nodes.resize(n);
  std::vector<std::pair<std::pair<int, int>, double>> links;
  while (f >> word) {
    if (word == "node") {
      int id;
      double x, y;
      if (!(f >> id >> x >> y) || id < 0 || id >= n)
        throw std::runtime_error("load_topology: bad node line in " + path);
      g.nodes[id] = {x, y};
    } else if (word == "link") {
      int s, d;
      double r;
      if (!(f >> s >> d >> r) || s < 0 || s >= n || d < 0 || d >= n)
        throw std::runtime_error("load_topology: bad link line in " + path);
      links.push_back({{s, d}, r});
    } else {
      throw std::runtime_error("load_topology: unknown record '" + word + "' in " + path);
    }
  }
  rates.long_term.clear();
  for (auto& [pair, r] : links) {
    int id = g.add_or_revive_link(pair.first, pair.second);
    rates.long_term.resize(g.link_count());
    rates.long_term[id] = r;
  }
  g.rebuild_adjacency();
  return g;
}

}  // namespace antbp
