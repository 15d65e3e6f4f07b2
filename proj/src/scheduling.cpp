#include "antbp/scheduling.hpp"

#include <algorithm>
#include <stdexcept>

namespace antbp {

namespace {
enum : uint8_t { UNDECIDED = 0, ACTIVE = 1, INACTIVE = 2 };

// does e beat f in a comparison (strict utility, tie to lower id)?
inline bool dominates(const std::vector<double>& u, int e, int f) {
  return u[e] > u[f] || (u[e] == u[f] && e < f);
}
}  // namespace

Schedule lgs_schedule(const ConflictGraph& cg, const std::vector<double>& utility) {
  int m = cg.vertex_count();
  std::vector<uint8_t> state(m, UNDECIDED);
  std::vector<int> pending;
  for (int e = 0; e < m; ++e) {
    if (utility[e] > 0.0)
      pending.push_back(e);
    else
      state[e] = INACTIVE;  // can never win, never blocks
  }
  while (!pending.empty()) {
    std::vector<int> winners;
    for (int e : pending) {
      bool wins = true;
      for (int f : cg.adj[e])
        if (state[f] == UNDECIDED && utility[f] > 0.0 && !dominates(utility, e, f)) {
          wins = false;
          break;
        }
      if (wins) winners.push_back(e);
    }
    // winners computed against the round-start state, then applied at once
    for (int e : winners) {
      state[e] = ACTIVE;
      for (int f : cg.adj[e])
        if (state[f] == UNDECIDED) state[f] = INACTIVE;
    }
    std::vector<int> next;
    for (int e : pending)
      if (state[e] == UNDECIDED) next.push_back(e);
    pending.swap(next);
  }
  Schedule s(m, 0);
  for (int e = 0; e < m; ++e) s[e] = (state[e] == ACTIVE);
  return s;
}

Schedule greedy_schedule(const ConflictGraph& cg, const std::vector<double>& utility) {
  int m = cg.vertex_count();
  std::vector<int> order;
  for (int e = 0; e < m; ++e)
    if (utility[e] > 0.0) order.push_back(e);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (utility[a] != utility[b]) return utility[a] > utility[b];
    return a < b;
  });
  Schedule s(m, 0);
  std::vector<uint8_t> blocked(m, 0);
  for (int e : order) {
    if (blocked[e]) continue;
    s[e] = 1;
    for (int f : cg.adj[e]) blocked[f] = 1;
  }
  return s;
}

namespace {
struct MwisSolver {
  const ConflictGraph& cg;
  const std::vector<double>& u;
  const std::vector<int>& verts;
  std::vector<uint8_t> excluded;
  std::vector<uint8_t> chosen, best_set;
  double best = 0.0;

  MwisSolver(const ConflictGraph& c, const std::vector<double>& util,
             const std::vector<int>& v)
      : cg(c), u(util), verts(v), excluded(cg.vertex_count(), 0),
        chosen(cg.vertex_count(), 0), best_set(cg.vertex_count(), 0) {}

  void search(size_t idx, double acc, double remaining) {
    if (acc > best) {
      best = acc;
      best_set = chosen;
    }
    if (idx >= verts.size() || acc + remaining <= best) return;
    int v = verts[idx];
    double rest = remaining - u[v];
    if (!excluded[v]) {
      // branch: take v
      std::vector<int> newly;
      for (int f : cg.adj[v])
        if (!excluded[f]) {
          excluded[f] = 1;
          newly.push_back(f);
        }
      chosen[v] = 1;
      search(idx + 1, acc + u[v], rest);
      chosen[v] = 0;
      for (int f : newly) excluded[f] = 0;
    }
    // branch: skip v
    search(idx + 1, acc, rest);
  }
};
}  // namespace

Schedule exact_mwis(const ConflictGraph& cg, const std::vector<double>& utility) {
  std::vector<int> verts;
  for (int e = 0; e < cg.vertex_count(); ++e)
    if (utility[e] > 0.0) verts.push_back(e);
  if (verts.size() > 24)
    throw std::invalid_argument("exact_mwis: more than 24 positive-utility links");
  std::sort(verts.begin(), verts.end(),
            [&](int a, int b) { return utility[a] > utility[b]; });
  double total = 0.0;
  for (int v : verts) total += utility[v];
  MwisSolver solver(cg, utility, verts);
  solver.search(0, 0.0, total);
  Schedule s(cg.vertex_count(), 0);
  for (int e = 0; e < cg.vertex_count(); ++e) s[e] = solver.best_set[e];
  return s;
}

bool schedule_is_independent(const ConflictGraph& cg, const Schedule& s) {
  for (auto [a, b] : cg.edges)
    if (s[a] && s[b]) return false;
  return true;
}

bool schedule_is_maximal(const ConflictGraph& cg, const std::vector<double>& utility,
                         const Schedule& s) {
  for (int e = 0; e < cg.vertex_count(); ++e) {
    if (s[e] || utility[e] <= 0.0) continue;
    bool blocked = false;
    for (int f : cg.adj[e])
      if (s[f]) {
        blocked = true;
        break;
      }
    if (!blocked) return false;
  }
  return true;
}

double schedule_weight(const std::vector<double>& utility, const Schedule& s) {
  double w = 0.0;
  for (size_t e = 0; e < s.size(); ++e)
    if (s[e]) w += utility[e];
  return w;
}

}  // namespace antbp
