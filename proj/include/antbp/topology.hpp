#pragma once
// Random geometric network topologies, interference (conflict) graphs, and the
// distance-like bias field used by the routing planes.
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "antbp/rng.hpp"

namespace antbp {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

// A directed link. Links are never erased once created: removing one (failure
// or mobility) clears its alive flag so queue/pheromone state stays index
// addressable, and a link that re-forms revives the same id.
struct Link {
  int src = -1, dst = -1;
};

class NetworkGraph {
 public:
  std::vector<Vec2> nodes;
  std::vector<Link> links;
  std::vector<uint8_t> alive;
  double area_side = 0.0;

  int node_count() const { return int(nodes.size()); }
  int link_count() const { return int(links.size()); }
  int alive_link_count() const;

  // link ids per node, alive only, ascending id
  const std::vector<int>& out_links(int node) const { return out_[node]; }
  const std::vector<int>& in_links(int node) const { return in_[node]; }

  int find_link(int src, int dst) const;  // -1 if absent or dead
  int add_or_revive_link(int src, int dst);
  void kill_link(int id);
  void rebuild_adjacency();

  bool connected() const;  // over alive links, treated as undirected
  double dist(int a, int b) const;

 private:
  std::vector<std::vector<int>> out_, in_;
  std::unordered_map<uint64_t, int> index_;  // (src,dst) -> link id, dead included
};

// Uniform points on a square sized so that the expected number of nodes per
// unit-disk neighborhood matches `density`; directed links join every pair
// within unit range; resampled until connected. Throws after max_retries
// failures.
NetworkGraph generate_topology(int n_nodes, double density, Rng& rng,
                               int max_retries = 1000);

// Interference: two directed links conflict when they share any endpoint, in
// either role. Vertices are link ids; dead links keep empty adjacency.
struct ConflictGraph {
  std::vector<std::pair<int, int>> edges;  // a < b
  std::vector<std::vector<int>> adj;
  int vertex_count() const { return int(adj.size()); }
};

ConflictGraph build_conflict_graph(const NetworkGraph& g);

// Per-link long-term rates plus the per-slot realized-rate sampler.
class LinkRateModel {
 public:
  double rate_lo = 10.0, rate_hi = 42.0;
  double noise_std = 3.0, trunc_halfwidth = 9.0;
  std::vector<double> long_term;  // indexed by link id

  void sample_long_term(const NetworkGraph& g, Rng& rng);
  void extend_for_new_links(const NetworkGraph& g, Rng& rng);

  // N(r_e, noise_std^2) truncated to ±trunc_halfwidth, rounded to an integer,
  // floored at zero
  double realized(int link, Rng& rng) const;
  // draws for every alive link in id order (dead entries left at 0) so the
  // stream advances identically no matter which scheme consumes it
  void realized_all(const NetworkGraph& g, Rng& rng, std::vector<double>& out) const;

  double mean_alive(const NetworkGraph& g) const;
  double max_alive(const NetworkGraph& g) const;
};

// B[c][i] = cheapest directed i->c distance under link weights
// delta_e = mean_rate * max_rate / r_e  (slow links are long). Dead links
// excluded. Throws if some commodity is unreachable.
class BiasField {
 public:
  int n_nodes = 0;
  std::vector<double> delta;  // per link id, weight used
  std::vector<double> b;      // [c * n_nodes + i]

  double at(int node, int commodity) const { return b[size_t(commodity) * n_nodes + node]; }
  // B_i - B_j for link (i,j): positive when the link heads toward c
  double drop(const NetworkGraph& g, int link, int commodity) const {
    return at(g.links[link].src, commodity) - at(g.links[link].dst, commodity);
  }
};

BiasField compute_bias_field(const NetworkGraph& g, const LinkRateModel& rates);
BiasField compute_bias_field_serial(const NetworkGraph& g, const LinkRateModel& rates);

// Shortest-path edge betweenness over the alive undirected skeleton, unit
// weights, summed over ordered source-target pairs (Brandes). Both directions
// of a link carry the undirected edge's score.
std::vector<double> edge_betweenness(const NetworkGraph& g);
std::vector<double> edge_betweenness_serial(const NetworkGraph& g);

// alive link ids sorted by descending betweenness, ties by ascending id
std::vector<int> edge_betweenness_ranking(const NetworkGraph& g);

void save_topology(const std::string& path, const NetworkGraph& g,
                   const LinkRateModel& rates);
// returns the graph and fills `rates.long_term`
NetworkGraph load_topology(const std::string& path, LinkRateModel& rates);

}  // namespace antbp
