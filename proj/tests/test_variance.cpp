#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "bandlab/variance_matrix.hpp"

using namespace bandlab;

TEST_CASE("delta profile gives the identity matrix") {
  TorusLattice lat(1, 16);
  VarianceMatrix S(lat, BandProfile::delta_profile());
  const Eigen::MatrixXd Sd = S.dense();
  CHECK((Sd - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("direct evaluation oracle: d=1, N=8, W=2 Gaussian") {
  TorusLattice lat(1, 8);
  VarianceMatrix S(lat, BandProfile::gaussian(2));
  // oracle: f([i-j]_8 / 2)/Z with Z the lattice sum of f
  auto f = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  double Z = 0.0;
  for (int x = -4; x < 4; ++x) Z += f(x / 2.0);
  for (int i = 0; i < 8; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < 8; ++j) {
      int r = (i - j) % 8;
      if (r < -4) r += 8;
      if (r >= 4) r -= 8;
      CHECK(S(i, j) == Catch::Approx(f(r / 2.0) / Z).epsilon(1e-14));
      rowsum += S(i, j);
    }
    CHECK(rowsum == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("heavy-tail cutoff support") {
  TorusLattice lat(1, 64);
  VarianceMatrix S(lat, BandProfile::heavy_tail(4, 1.5, 1.0, 0.25, 0.45));
  for (int x = 0; x < 64; ++x) {
    const double r = std::abs(lat.rep(x));
    if (r >= 0.45 * 64) CHECK(S.row()[x] == 0.0);
  }
  CHECK(S.row().sum() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("mean-field mix") {
  TorusLattice lat(1, 2);
  VarianceMatrix S(lat, BandProfile::delta_profile());
  SECTION("eps = 0 leaves S unchanged") {
    VarianceMatrix S0 = mix_mean_field(S, 0.0);
    CHECK((S0.dense() - S.dense()).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("eps = 1/2 on the 2x2 identity") {
    VarianceMatrix Se = mix_mean_field(S, 0.5);
    CHECK(Se(0, 0) == Catch::Approx(0.75));
    CHECK(Se(0, 1) == Catch::Approx(0.25));
    CHECK(Se(1, 0) == Catch::Approx(0.25));
    CHECK(Se(1, 1) == Catch::Approx(0.75));
  }
  SECTION("row sums stay 1, epsilon validated") {
    TorusLattice big(1, 64);
    VarianceMatrix Sb(big, BandProfile::gaussian(8));
    for (double eps : {0.1, 0.3, 0.5}) {
      VarianceMatrix Se = mix_mean_field(Sb, eps);
      CHECK(std::abs(Se.row().sum() - 1.0) < 1e-12);
      CHECK(Se.epsilon() == Catch::Approx(eps));
    }
    CHECK_THROWS_AS(mix_mean_field(Sb, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(mix_mean_field(Sb, -0.1), std::invalid_argument);
  }
}

TEST_CASE("stochasticity, symmetry and spectrum across profiles") {
  struct Config {
    int d, L, W;
    bool heavy;
  };
  for (const Config& c : {Config{1, 128, 16, false}, Config{1, 96, 8, true},
                          Config{2, 12, 3, false}, Config{1, 64, 64, false}}) {
    TorusLattice lat(c.d, c.L);
    BandProfile prof = c.heavy ? BandProfile::heavy_tail(c.W, 1.3) : BandProfile::gaussian(c.W);
    VarianceMatrix S(lat, prof);
    const Eigen::MatrixXd Sd = S.dense();
    const std::int64_t N = S.size();
    for (std::int64_t i = 0; i < N; ++i) CHECK(std::abs(Sd.row(i).sum() - 1.0) < 1e-12);
    CHECK((Sd - Sd.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // circulant spectrum = eigenvalues; Eq.-level window
    const Eigen::ArrayXd& sh = S.spectrum();
    CHECK(sh.minCoeff() >= -1.0 + 1e-6);
    CHECK(sh.maxCoeff() <= 1.0 + 1e-10);
    CHECK(sh[0] == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("M tracks W^d / max f") {
  TorusLattice lat(1, 256);
  VarianceMatrix S(lat, BandProfile::gaussian(32));
  const double f0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  // M * f(0) = Z = W + O(1)
  CHECK(std::abs(S.m_parameter() * f0 - 32.0) < 1.0);
}

TEST_CASE("circulant apply agrees with the dense product") {
  TorusLattice lat(2, 8);
  VarianceMatrix S(lat, BandProfile::gaussian(2));
  const Eigen::MatrixXd Sd = S.dense();
  Eigen::MatrixXd X(64, 3);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 3; ++j) X(i, j) = std::sin(0.1 * i + j);
  const Eigen::MatrixXd fast = S.apply_columns(X);
  const Eigen::MatrixXd slow = Sd * X;
  CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXd fastr = S.apply_rows(X.transpose());
  CHECK((fastr - X.transpose() * Sd).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("all-zero profile row is rejected") {
  TorusLattice lat(1, 16);
  BandProfile p = BandProfile::rapid_decay(2, [](const std::vector<double>&) { return 0.0; });
  CHECK_THROWS_AS(VarianceMatrix(lat, p), std::invalid_argument);
}

TEST_CASE("out-of-range W warns instead of failing") {
  TorusLattice lat(1, 64);
  BandProfile p = BandProfile::gaussian(1);
  p.delta = 0.5;  // L^0.5 = 8 > W = 1
  VarianceMatrix S(lat, p);
  CHECK(!S.warning().empty());
}
