#include <catch_amalgamated.hpp>
#include <cmath>

#include "bandlab/sampling.hpp"

using namespace bandlab;

namespace {
VarianceMatrix small_s(int N, int W) {
  return VarianceMatrix(TorusLattice(1, N), BandProfile::gaussian(W));
}
}  // namespace

TEST_CASE("same seed gives bit-identical draws") {
  VarianceMatrix S = small_s(32, 4);
  const auto a = sample_matrix(S, SymmetryClass::ComplexHermitian, EntryDistribution::Gaussian, 7);
  const auto b = sample_matrix(S, SymmetryClass::ComplexHermitian, EntryDistribution::Gaussian, 7);
  const auto c = sample_matrix(S, SymmetryClass::ComplexHermitian, EntryDistribution::Gaussian, 8);
  CHECK((a.H - b.H).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.H - c.H).cwiseAbs().maxCoeff() != 0.0);
}

TEST_CASE("hermiticity is exact, diagonal real") {
  VarianceMatrix S = small_s(32, 4);
  for (auto sym : {SymmetryClass::RealSymmetric, SymmetryClass::ComplexHermitian}) {
    for (auto dist : {EntryDistribution::Gaussian, EntryDistribution::BernoulliPm1,
                      EntryDistribution::UniformUnitVar}) {
      const auto H = sample_matrix(S, sym, dist, 99);
      CHECK((H.H - H.H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      for (int i = 0; i < 32; ++i) CHECK(H.H(i, i).imag() == 0.0);
      if (sym == SymmetryClass::RealSymmetric) {
        CHECK(H.H.imag().cwiseAbs().maxCoeff() == 0.0);
        CHECK((H.H - H.H.transpose()).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("complex class: zeta^2 averages to zero (Monte Carlo, 3 sigma)") {
  VarianceMatrix S = small_s(2, 1);
  const double s01 = S(0, 1);
  std::complex<double> acc = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const auto H =
        sample_matrix(S, SymmetryClass::ComplexHermitian, EntryDistribution::Gaussian, k);
    const std::complex<double> zeta = H.H(0, 1) / std::sqrt(s01);
    acc += zeta * zeta;
  }
  CHECK(std::abs(acc) / n < 0.02);
}

TEST_CASE("empirical second moments match s_ij (4 standard errors)") {
  VarianceMatrix S = small_s(8, 2);
  const int n = 10000;
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(8, 8);
  for (int k = 0; k < n; ++k) {
    const auto H =
        sample_matrix(S, SymmetryClass::ComplexHermitian, EntryDistribution::Gaussian, 5000 + k);
    second += H.H.cwiseAbs2();
  }
  second /= n;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double s = S(i, j);
      // |h|^2 is s * (chi^2-type variable with unit mean, variance <= 2)
      const double se = s * std::sqrt(2.0 / n);
      CHECK(std::abs(second(i, j) - s) <= 4.0 * se + 1e-12);
    }
}

TEST_CASE("bernoulli entries have |zeta| = 1 exactly") {
  VarianceMatrix S = small_s(16, 2);
  const auto H = sample_matrix(S, SymmetryClass::RealSymmetric, EntryDistribution::BernoulliPm1, 3);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      CHECK(std::abs(H.H(i, j)) == Catch::Approx(std::sqrt(S(i, j))).margin(1e-15));
}

TEST_CASE("mean-field mix: identity at eps = 0, exact hermiticity, variance law") {
  VarianceMatrix S = small_s(64, 8);
  const auto H = sample_matrix(S, SymmetryClass::ComplexHermitian, EntryDistribution::Gaussian, 1);
  SECTION("eps = 0 returns H unchanged") {
    const auto He = sample_mean_field_mix(H, 0.0, 9);
    CHECK((He.H - H.H).cwiseAbs().maxCoeff() == 0.0);
  }
  SECTION("rejects eps outside [0, 1/2]") {
    CHECK_THROWS_AS(sample_mean_field_mix(H, 0.7, 9), std::invalid_argument);
  }
  SECTION("hermiticity exact and entrywise variance matches the mixed profile") {
    const int n = 10000;
    const double eps = 0.5;
    double v01 = 0.0, v05 = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto Hb =
          sample_matrix(S, SymmetryClass::ComplexHermitian, EntryDistribution::Gaussian, 100 + k);
      const auto He = sample_mean_field_mix(Hb, eps, 7000 + k);
      if (k == 0) CHECK((He.H - He.H.adjoint()).cwiseAbs().maxCoeff() == 0.0);
      v01 += std::norm(He.H(0, 1));
      v05 += std::norm(He.H(0, 5));
    }
    v01 /= n;
    v05 /= n;
    const VarianceMatrix Se = mix_mean_field(S, eps);
    CHECK(std::abs(v01 - Se(0, 1)) / Se(0, 1) < 0.05);
    CHECK(std::abs(v05 - Se(0, 5)) / Se(0, 5) < 0.05);
  }
}
