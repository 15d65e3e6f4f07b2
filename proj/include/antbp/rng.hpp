#pragma once
// Deterministic random streams. All distributions are implemented here instead
// of using <random>'s distribution classes, whose output is implementation
// defined: with a fixed seed the sequences below are identical on every
// platform that ships a conforming mt19937_64.
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>

namespace antbp {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// One named random stream. Streams derived from the same master seed with
// different labels are independent for practical purposes, so e.g. the
// arrival process is unchanged when a policy draws a different number of
// forwarding decisions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  static Rng stream(uint64_t master, std::string_view label) {
    return Rng(splitmix64(master ^ fnv1a64(label)));
  }

  uint64_t next_u64() { return eng_(); }

  // uniform in [0, 1), 53-bit resolution
  double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // uniform integer in [lo, hi], rejection sampled so every value is exactly
  // equally likely
  int64_t uniform_int(int64_t lo, int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
    uint64_t span = uint64_t(hi - lo) + 1;
    if (span == 0) return int64_t(eng_());  // full 64-bit range
    uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    uint64_t x;
    do {
      x = eng_();
    } while (x >= limit);
    return lo + int64_t(x % span);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller (cosine branch only, one value per call)
  double normal(double mu, double sigma) {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    double u2 = uniform01();
    double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    return mu + sigma * z;
  }

  // normal rejected until it lands within ±halfwidth of the mean
  double normal_truncated(double mu, double sigma, double halfwidth) {
    for (;;) {
      double v = normal(mu, sigma);
      if (v >= mu - halfwidth && v <= mu + halfwidth) return v;
    }
  }

  // Knuth's product method; fine for the small means used here
  int64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    double limit = std::exp(-lambda);
    int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform01();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace antbp
