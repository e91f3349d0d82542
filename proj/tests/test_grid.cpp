#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "abnls/functionals.hpp"
#include "abnls/grid.hpp"
#include "oracles.hpp"

using namespace abnls;

TEST(Grid, StaggeredNodes) {
  const auto g = make_grid(8, 1.0, 1);
  EXPECT_DOUBLE_EQ(g.h(), 0.125);
  for (int j = 0; j < 8; ++j) EXPECT_DOUBLE_EQ(g.r(j), (2 * j + 1) / 16.0);
  for (double r : g.nodes()) EXPECT_GT(r, 0.0);
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(make_grid(7, 1.0, 2), ConfigError);
  EXPECT_THROW(make_grid(8, 1.0, 2), ConfigError);
  EXPECT_THROW(make_grid(4, 1.0, 1), ConfigError);
  EXPECT_THROW(make_grid(16, 0.0, 1), ConfigError);
  EXPECT_THROW(make_grid(16, -1.0, 3), ConfigError);
  EXPECT_THROW(make_grid(16, 1.0, 0), ConfigError);
}

TEST(Grid, WeightsSumToDiskArea) {
  const auto g = make_grid(256, 10.0, 1);
  double s = 0.0;
  for (double w : g.weights()) s += w;
  EXPECT_NEAR(s / (oracle::pi * 100.0), 1.0, 1e-12);
  std::vector<double> ones(g.size(), 1.0);
  EXPECT_NEAR(integrate(ones, g) / (oracle::pi * 100.0), 1.0, 1e-10);
}

TEST(Grid, GaussianMassCarriesEndpointCorrection) {
  // The radial integrand r e^{-r^2} has slope 1 at the origin, so the
  // midpoint rule carries a relative h^2/12 error term.
  const auto g = make_grid(1024, 16.0, 1);
  const auto u = Field::from_function(g, [](double r, double) { return std::exp(-r * r / 2.0); });
  const double h = g.h();
  const double m = mass(u);
  EXPECT_NEAR(m / oracle::pi, 1.0, 3e-5);
  // Euler-Maclaurin for the midpoint rule with g'(0) = 1, g'''(0) = -6:
  // sum = 1/2 + h^2/24 + 42 h^4/5760 + O(h^6).
  const double h2 = h * h;
  const double expected = 2.0 * oracle::pi * (0.5 + h2 / 24.0 + 42.0 * h2 * h2 / 5760.0);
  EXPECT_NEAR(m / expected, 1.0, 1e-12);
}

TEST(Grid, FirstMomentGaussian) {
  const auto g = make_grid(1024, 16.0, 1);
  const auto u = Field::from_function(g, [](double r, double) { return r * std::exp(-r * r / 2.0); });
  EXPECT_NEAR(mass(u) / oracle::pi, 1.0, 1e-8);
}

TEST(Grid, ZeroFieldIntegratesToZero) {
  const auto g = make_grid(64, 4.0, 5);
  EXPECT_EQ(mass(Field(g)), 0.0);
  std::vector<cplx> zeros(g.size());
  EXPECT_EQ(integrate(zeros, g), cplx(0.0));
}

TEST(Grid, IntegrateRejectsLengthMismatch) {
  const auto g = make_grid(64, 4.0, 3);
  std::vector<double> bad(10, 1.0);
  EXPECT_THROW(integrate(bad, g), ConfigError);
}

TEST(Grid, QuadratureOrderIsTwo) {
  // int_{|x|<R} |x|^k dx = 2 pi R^{k+2} / (k+2). For k = 0 the midpoint rule
  // is exact; for k = 1, 2 the leading error is h^2 (g'(R) - g'(0)) / 24.
  const double R = 3.0;
  auto err = [R](int k, int n) {
    const auto g = make_grid(n, R, 1);
    std::vector<double> s(g.size());
    for (int j = 0; j < n; ++j) s[j] = std::pow(g.r(j), k);
    const double exact = 2.0 * oracle::pi * std::pow(R, k + 2) / (k + 2);
    return std::abs(integrate(s, g) - exact) / exact;
  };
  EXPECT_LT(err(0, 64), 1e-12);
  for (int k = 1; k <= 2; ++k) {
    const double order = std::log2(err(k, 64) / err(k, 128));
    EXPECT_GE(order, 1.8) << "k=" << k;
    EXPECT_LE(order, 2.2) << "k=" << k;
  }
}

TEST(Grid, RadialFieldHasOnlyModeZero) {
  const auto g = make_grid(32, 3.0, 7);
  const auto u = Field::from_function(g, [](double r, double) { return std::exp(-r); });
  const auto s = analyze(u);
  for (int m = -3; m <= 3; ++m)
    for (int j = 0; j < g.n_r(); ++j) {
      if (m == 0)
        EXPECT_NEAR(std::abs(s.mode(m)[j] - std::exp(-g.r(j))), 0.0, 1e-15);
      else
        EXPECT_LT(std::abs(s.mode(m)[j]), 1e-15);
    }
}

TEST(Grid, SingleHarmonicHasOnlyModeOne) {
  const auto g = make_grid(32, 3.0, 7);
  const auto u = Field::from_function(
      g, [](double r, double th) { return std::exp(-r) * std::exp(cplx(0.0, th)); });
  const auto s = analyze(u);
  for (int m = -3; m <= 3; ++m) {
    double peak = 0.0;
    for (const auto& z : s.mode(m)) peak = std::max(peak, std::abs(z));
    if (m == 1)
      EXPECT_GT(peak, 0.1);
    else
      EXPECT_LT(peak, 1e-15);
  }
}

TEST(Grid, RoundTripAndParseval) {
  const auto g = make_grid(40, 5.0, 9);
  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  Field u(g);
  for (auto& z : u.values()) z = cplx(nd(rng), nd(rng));
  const auto s = analyze(u);
  const auto back = synthesize(s);
  double err = 0.0, nrm = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(back.values()[i] - u.values()[i]));
    nrm = std::max(nrm, std::abs(u.values()[i]));
  }
  EXPECT_LT(err / nrm, 1e-12);
  EXPECT_NEAR(integrate_modes_sq(s) / mass(u), 1.0, 1e-12);
}

TEST(Grid, HandlesCompareByParameters) {
  EXPECT_EQ(make_grid(16, 2.0, 3), make_grid(16, 2.0, 3));
  EXPECT_FALSE(make_grid(16, 2.0, 3) == make_grid(16, 2.0, 5));
}

TEST(Grid, DilationRescalesRadius) {
  const auto g = make_grid(16, 2.0, 1);
  const auto u = Field::from_function(g, [](double r, double) { return r; });
  const auto v = dilate(u, 2.0, 4.0);
  EXPECT_DOUBLE_EQ(v.grid().r_max(), 0.5);
  EXPECT_EQ(v(3, 0), 2.0 * u(3, 0));
}
