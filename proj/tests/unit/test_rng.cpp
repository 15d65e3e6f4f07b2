#include "doctest.h"

#include <cmath>

#include "antbp/rng.hpp"

using namespace antbp;

TEST_CASE("labeled streams are reproducible and distinct") {
  Rng a = Rng::stream(42, "arrivals");
  Rng b = Rng::stream(42, "arrivals");
  Rng c = Rng::stream(42, "forwarding");
  bool all_equal = true, any_equal_cross = false;
  for (int i = 0; i < 64; ++i) {
    uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    all_equal = all_equal && va == vb;
    any_equal_cross = any_equal_cross || va == vc;
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal_cross);
}

TEST_CASE("uniform01 stays in [0,1) with mean near one half") {
  Rng r(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    double v = r.uniform01();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  CHECK(std::abs(sum / 100000.0 - 0.5) < 0.005);
}

TEST_CASE("uniform_int covers its range uniformly") {
  Rng r(11);
  int counts[6] = {0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 60000; ++i) {
    int64_t v = r.uniform_int(10, 15);
    REQUIRE(v >= 10);
    REQUIRE(v <= 15);
    ++counts[v - 10];
  }
  for (int k = 0; k < 6; ++k) CHECK(std::abs(counts[k] - 10000) < 500);
}

TEST_CASE("poisson draws match the requested mean") {
  Rng r(3);
  long long sum = 0;
  for (int i = 0; i < 100000; ++i) sum += r.poisson(2.0);
  CHECK(std::abs(sum / 100000.0 - 2.0) < 0.02);
  CHECK(r.poisson(0.0) == 0);
  CHECK(r.poisson(-1.0) == 0);
}

TEST_CASE("truncated normal respects the halfwidth") {
  Rng r(5);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double v = r.normal_truncated(26.0, 3.0, 9.0);
    REQUIRE(v >= 17.0);
    REQUIRE(v <= 35.0);
    sum += v;
  }
  CHECK(std::abs(sum / 20000.0 - 26.0) < 0.1);
}

TEST_CASE("bernoulli frequency tracks p") {
  Rng r(9);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += r.bernoulli(0.3);
  CHECK(std::abs(hits / 100000.0 - 0.3) < 0.01);
}
