#include <catch_amalgamated.hpp>
#include <cmath>
#include <set>

#include "bandlab/lattice.hpp"
#include "bandlab/rng.hpp"

using namespace bandlab;

TEST_CASE("canonical representatives on the ring") {
  TorusLattice lat(1, 8);
  CHECK(lat.site_count() == 8);
  CHECK(lat.rep(5) == -3);
  std::set<int> reps;
  for (int i = 0; i < 8; ++i) reps.insert(lat.rep(i));
  CHECK(reps == std::set<int>{-4, -3, -2, -1, 0, 1, 2, 3});
}

TEST_CASE("brute-force modular arithmetic oracle, L = 6") {
  TorusLattice lat(1, 6);
  const int expected[12] = {0, 1, 2, -3, -2, -1, 0, 1, 2, -3, -2, -1};
  for (int i = 0; i < 12; ++i) {
    CHECK(lat.rep(i) == expected[i]);
    // oracle: the unique r in [-3,3) with r == i (mod 6)
    int r = i % 6;
    if (r >= 3) r -= 6;
    CHECK(lat.rep(i) == r);
  }
}

TEST_CASE("two-dimensional torus distances") {
  TorusLattice lat(2, 4);
  CHECK(lat.site_count() == 16);
  const std::int64_t s33 = lat.index({3, 3});
  CHECK(lat.periodic_distance(s33, 0) == Catch::Approx(std::sqrt(2.0)));
  CHECK(lat.rep_norm(s33) == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("rejects degenerate construction") {
  CHECK_THROWS_AS(TorusLattice(0, 8), std::invalid_argument);
  CHECK_THROWS_AS(TorusLattice(1, 1), std::invalid_argument);
}

TEST_CASE("periodic distance is symmetric and satisfies the triangle inequality") {
  TorusLattice lat(2, 7);
  CounterRng rng(3, 0);
  const std::int64_t N = lat.site_count();
  for (int t = 0; t < 500; ++t) {
    const std::int64_t a = rng.next_u32() % N, b = rng.next_u32() % N, c = rng.next_u32() % N;
    CHECK(lat.periodic_distance(a, b) == Catch::Approx(lat.periodic_distance(b, a)));
    CHECK(lat.periodic_distance(a, c) <=
          lat.periodic_distance(a, b) + lat.periodic_distance(b, c) + 1e-12);
  }
}

TEST_CASE("diff_index is consistent with coordinates") {
  TorusLattice lat(2, 5);
  const std::int64_t x = lat.index({4, 2}), y = lat.index({1, 3});
  const std::int64_t d = lat.diff_index(x, y);
  CHECK(lat.coords(d) == std::vector<int>{3, 4});  // (4-1, 2-3) mod 5
  CHECK(lat.diff_index(x, x) == 0);
}
