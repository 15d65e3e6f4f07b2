// Times the OpenMP graph kernels against their serial references and checks
// that both produce identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "antbp/topology.hpp"

using namespace antbp;

namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    double t0 = now();
    f();
    best = std::min(best, now() - t0);
  }
  return best;
}

bool close(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return false;  // deterministic reductions: exact match
  return true;
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP: parallel kernels fall back to serial\n");
#endif
  std::printf("%-6s %-16s %10s %10s %8s %s\n", "nodes", "kernel", "serial_ms",
              "parallel_ms", "speedup", "match");

  for (int n : {100, 200, 400}) {
    Rng rng(12345u + uint64_t(n));
    NetworkGraph g = generate_topology(n, 8.0 / M_PI, rng);
    LinkRateModel rates;
    rates.sample_long_term(g, rng);

    BiasField bs, bp;
    double ts = time_best_of(3, [&] { bs = compute_bias_field_serial(g, rates); });
    double tp = time_best_of(3, [&] { bp = compute_bias_field(g, rates); });
    std::printf("%-6d %-16s %10.2f %10.2f %7.2fx %s\n", n, "bias_field", ts * 1e3,
                tp * 1e3, ts / tp, close(bs.b, bp.b) ? "yes" : "NO");

    std::vector<double> cs, cp;
    ts = time_best_of(3, [&] { cs = edge_betweenness_serial(g); });
    tp = time_best_of(3, [&] { cp = edge_betweenness(g); });
    std::printf("%-6d %-16s %10.2f %10.2f %7.2fx %s\n", n, "betweenness", ts * 1e3,
                tp * 1e3, ts / tp, close(cs, cp) ? "yes" : "NO");
  }
  return 0;
}
