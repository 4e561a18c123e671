#include "doctest.h"

#include <cmath>
#include <vector>

#include "sspt/dyadic.hpp"
#include "sspt/rng.hpp"

using namespace sspt;

TEST_CASE("truncation level examples") {
  CHECK(truncation_level(1) == 0);
  CHECK(truncation_level(2) == 1);
  CHECK(truncation_level(1024) == 5);
  CHECK(truncation_level(std::int64_t{1} << 15) == 8);
  CHECK(truncation_level(std::int64_t{1} << 17) == 10);
  CHECK_THROWS_AS(truncation_level(0), std::invalid_argument);
}

TEST_CASE("truncation level is monotone and bracketed") {
  int prev = 0;
  for (std::int64_t n = 1; n <= 5000; ++n) {
    const int L = truncation_level(n);
    CHECK(L >= prev);
    prev = L;
    CHECK((std::int64_t{1} << L) * L * L <= n);
    if (n >= 2) {
      // Either the defining product bound binds at L+1 or the log2 cap does.
      const std::int64_t next = (std::int64_t{1} << (L + 1)) * (L + 1) * (L + 1);
      const bool cap = (std::int64_t{1} << (L + 1)) > n;
      CHECK((next > n || cap));
    }
  }
}

TEST_CASE("interval_of is exact dyadic") {
  auto [a0, b0] = interval_of(NodeIndex(0, 0));
  CHECK(a0 == 0.0);
  CHECK(b0 == 1.0);
  auto [a1, b1] = interval_of(NodeIndex(1, 1));
  CHECK(a1 == 0.5);
  CHECK(b1 == 1.0);
  auto [a2, b2] = interval_of(NodeIndex(3, 5));
  CHECK(a2 == 0.625);
  CHECK(b2 == 0.75);
}

TEST_CASE("node addressing") {
  NodeIndex n(3, 5);  // word 101
  CHECK(n.bit(0) == 1);
  CHECK(n.bit(1) == 0);
  CHECK(n.bit(2) == 1);
  CHECK(n.child0() == NodeIndex(4, 10));
  CHECK(n.child1() == NodeIndex(4, 11));
  CHECK(n.parent() == NodeIndex(2, 2));
  CHECK_THROWS_AS(NodeIndex(2, 4), std::invalid_argument);
}

TEST_CASE("count_data examples") {
  {
    const std::vector<double> data{0.3, 0.7};
    const CountTree t = count_data(data, 1);
    CHECK(t.count(1, 0) == 1);
    CHECK(t.count(1, 1) == 1);
    CHECK(t.count(0, 0) == 2);
  }
  {
    // 0.5 belongs to the left half under the half-open convention.
    const std::vector<double> data{0.5};
    const CountTree t = count_data(data, 1);
    CHECK(t.count(1, 0) == 1);
    CHECK(t.count(1, 1) == 0);
  }
  {
    const std::vector<double> data{0.1, 0.6, 0.9, 0.95};
    const CountTree t = count_data(data, 2);
    CHECK(t.count(2, 0) == 1);
    CHECK(t.count(2, 1) == 0);
    CHECK(t.count(2, 2) == 1);
    CHECK(t.count(2, 3) == 2);
  }
}

TEST_CASE("count_data rejects out-of-range points") {
  CHECK_THROWS_AS(count_data(std::vector<double>{0.5, 1.5}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(count_data(std::vector<double>{0.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(count_data(std::vector<double>{-0.1}, 2), std::invalid_argument);
}

TEST_CASE("parent counts equal child sums on random data") {
  Rng rng(1234);
  for (int trial = 0; trial < 4; ++trial) {
    const int L = 3 * trial + 3;  // up to 12
    std::vector<double> data(500);
    for (auto& x : data) x = rng.uniform01_open_left();
    const CountTree t = count_data(data, L);
    CHECK(t.count(0, 0) == 500);
    for (int l = 0; l < L; ++l) {
      std::int64_t level_total = 0;
      for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
        CHECK(t.count(l, k) == t.count(l + 1, 2 * k) + t.count(l + 1, 2 * k + 1));
        level_total += t.count(l, k);
      }
      // partition property: every point lands in exactly one node per level
      CHECK(level_total == 500);
    }
  }
}
