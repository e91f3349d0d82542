#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "abnls/functionals.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace abnls;
using testsupport::focusing_params;
using testsupport::reference_ground_state;

namespace {

Field first_harmonic_profile(const PolarGrid& g) {
  return Field::from_function(g, [](double r, double) { return r * std::exp(-r * r / 2.0); });
}

double potential_oracle() {
  // 2 pi int r^{-1/2} r^4 e^{-2 r^2} r dr, checked two independent ways.
  const double closed = 2.0 * oracle::pi * oracle::gaussian_moment(4.5, 2.0);
  const double quad =
      oracle::planar_radial_integral([](double r) { return std::pow(r, -0.5) * std::pow(r, 4) * std::exp(-2 * r * r); });
  EXPECT_NEAR(closed / quad, 1.0, 1e-12);
  return closed;
}

}  // namespace

TEST(Functionals, MassOfGaussian) {
  const auto g = make_grid(2048, 16.0, 1);
  const auto u = Field::from_function(g, [](double r, double) { return std::exp(-r * r / 2.0); });
  EXPECT_NEAR(mass(u) / oracle::pi, 1.0, 1e-5);
  EXPECT_EQ(mass(Field(g)), 0.0);
}

TEST(Functionals, Homogeneity) {
  const auto g = make_grid(256, 8.0, 5);
  const auto prm = focusing_params();
  std::mt19937_64 rng(3);
  const auto u = testsupport::random_field(g, prm, rng);
  const cplx c(0.7, -1.1);
  const auto cu = c * u;
  const double a = std::abs(c);
  EXPECT_NEAR(mass(cu) / (a * a * mass(u)), 1.0, 1e-13);
  EXPECT_NEAR(grad_alpha_sq(cu, prm) / (a * a * grad_alpha_sq(u, prm)), 1.0, 1e-13);
  EXPECT_NEAR(potential(cu, prm) / (std::pow(a, prm.p + 1) * potential(u, prm)), 1.0, 1e-13);
}

TEST(Functionals, PotentialMatchesQuadratureOracle) {
  const auto g = make_grid(2048, 16.0, 1);
  const auto prm = focusing_params();
  EXPECT_NEAR(potential(first_harmonic_profile(g), prm) / potential_oracle(), 1.0, 1e-6);
  EXPECT_EQ(potential(Field(g), prm), 0.0);
}

TEST(Functionals, EnergyComposesOracles) {
  const auto g = make_grid(2048, 16.0, 1);
  const auto prm = focusing_params();
  const double expected = oracle::pi * 1.25 - 0.5 * potential_oracle();
  EXPECT_NEAR(energy(first_harmonic_profile(g), prm) / expected, 1.0, 1e-3);
  EXPECT_EQ(energy(Field(g), prm), 0.0);
  EXPECT_EQ(virial_quantity(Field(g), prm), 0.0);
}

TEST(Functionals, DefocusingEnergyIsNonnegative) {
  const auto g = make_grid(128, 6.0, 5);
  auto prm = focusing_params();
  prm.kappa = 1;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 20; ++i) EXPECT_GE(energy(testsupport::random_field(g, prm, rng), prm), 0.0);
}

TEST(Functionals, VirialEnergyIdentityFocusing) {
  const auto g = make_grid(256, 8.0, 5);
  const auto prm = focusing_params();
  const double B = prm.B();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto u = testsupport::random_field(g, prm, rng);
    const double G = grad_alpha_sq(u, prm);
    const double lhs = virial_quantity(u, prm);
    const double rhs = B / 2.0 * energy(u, prm) - (B - 2.0) / 2.0 * G;
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::max({std::abs(lhs), std::abs(rhs), G}));
  }
}

TEST(CriticalConstants, DirectSubstitution) {
  const auto c = critical_constants(PhysParams{0.5, 0.5, 3.0, -1});
  EXPECT_DOUBLE_EQ(c.B, 2.5);
  EXPECT_DOUBLE_EQ(c.A, 1.5);
  EXPECT_DOUBLE_EQ(c.lambda_c, 3.0);
  EXPECT_DOUBLE_EQ(c.s_c, 0.25);
  const auto q = critical_constants(PhysParams{0.5, 0.0, 5.0, -1});
  EXPECT_DOUBLE_EQ(q.lambda_c, 1.0);
  EXPECT_DOUBLE_EQ(q.s_c, 0.5);
}

TEST(CriticalConstants, MassCriticalIsRejected) {
  try {
    critical_constants(PhysParams{0.5, 0.5, 2.5, -1});
    FAIL() << "expected an exception";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("mass-critical"), std::string::npos);
  }
}

TEST(CriticalConstants, RegimeFlag) {
  EXPECT_TRUE((PhysParams{0.5, 0.5, 3.0, -1}).threshold_regime());
  EXPECT_FALSE((PhysParams{1.0, 0.5, 3.0, -1}).threshold_regime());
  EXPECT_FALSE((PhysParams{0.5, 0.5, 2.0, -1}).threshold_regime());
  EXPECT_NEAR((PhysParams{2.3, 0.5, 3.0, -1}).flux_distance(), 0.3, 1e-15);
  EXPECT_NEAR((PhysParams{-1.75, 0.5, 3.0, -1}).flux_distance(), 0.25, 1e-15);
}

TEST(InvariantRatios, SelfNormalised) {
  const auto& gs = reference_ground_state();
  const auto r = invariant_ratios(gs.field(), gs.ref, gs.params);
  EXPECT_DOUBLE_EQ(r.EM, 1.0);
  EXPECT_DOUBLE_EQ(r.GM, 1.0);
  EXPECT_DOUBLE_EQ(r.PM, 1.0);
}

TEST(InvariantRatios, AmplitudeHomogeneity) {
  const auto& gs = reference_ground_state();
  const double lc = gs.params.lambda_c();
  for (double c : {0.3, 0.5, 0.8, 1.2}) {
    const auto r = invariant_ratios(gs.field(1, c), gs.ref, gs.params);
    EXPECT_NEAR(r.GM / std::pow(c, 1.0 + lc), 1.0, 1e-12);
    EXPECT_NEAR(r.PM / std::pow(c, gs.params.p + 1.0 + 2.0 * lc), 1.0, 1e-12);
    if (c < 1.0) {
      EXPECT_LT(r.GM, 1.0);
    }
  }
}

TEST(InvariantRatios, ScalingFamilyIsInvariant) {
  // u_mu(x) = mu^{(2-rho)/(p-1)} phi(mu x) realised exactly by dilating the grid.
  const auto& gs = reference_ground_state();
  const auto& prm = gs.params;
  const auto base = invariant_ratios(gs.field(1, 0.7), gs.ref, prm);
  for (double mu : {0.8, 1.25, 2.0}) {
    const auto u = dilate(gs.field(1, 0.7), std::pow(mu, (2.0 - prm.rho) / (prm.p - 1.0)), mu);
    const auto r = invariant_ratios(u, gs.ref, prm);
    EXPECT_NEAR(r.EM, base.EM, 1e-10);
    EXPECT_NEAR(r.GM, base.GM, 1e-10);
    EXPECT_NEAR(r.PM, base.PM, 1e-10);
  }
}

TEST(InvariantRatios, ParamsMismatchRejected) {
  const auto& gs = reference_ground_state();
  auto other = gs.params;
  other.p = 4.0;
  EXPECT_THROW(invariant_ratios(gs.field(), gs.ref, other), ConfigError);
}

TEST(GagliardoNirenberg, EqualityAtGroundState) {
  const auto& gs = reference_ground_state();
  EXPECT_LT(std::abs(gn_deficit(gs.field(), gs.ref, gs.params)), 1e-4);
  EXPECT_NEAR(gn_deficit(gs.field(1, 2.7), gs.ref, gs.params), gn_deficit(gs.field(), gs.ref, gs.params), 1e-12);
  EXPECT_TRUE(std::isinf(gn_deficit(Field(gs.grid), gs.ref, gs.params)));
}

TEST(GagliardoNirenberg, SeededRandomFieldsRespectBound) {
  const auto& gs = reference_ground_state();
  const auto g = make_grid(256, 10.0, 5);
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) EXPECT_GE(gn_deficit(testsupport::random_field(g, gs.params, rng), gs.ref, gs.params), -1e-6);
}

TEST(Coercivity, HalfGroundStateSatisfiesAllBounds) {
  const auto& gs = reference_ground_state();
  const auto rep = coercivity_report(gs.field(1, 0.5), gs.ref, gs.params);
  EXPECT_TRUE(rep.hypothesis_met);
  EXPECT_TRUE(rep.coer1_holds);
  // Along the ray c*phi the Q-coercivity bound is an equality.
  EXPECT_GE(rep.coer2_value, -1e-12 * gs.grad_alpha_sq());
  EXPECT_TRUE(rep.coer3_holds);
  // Independent arithmetic on the stored functionals: c = 0.5.
  const double c = 0.5, lc = gs.params.lambda_c();
  EXPECT_NEAR(rep.pm_margin, 1.0 - std::pow(c, gs.params.p + 1.0 + 2.0 * lc), 1e-12);
}

TEST(Coercivity, GroundStateIsBoundaryCase) {
  const auto& gs = reference_ground_state();
  const auto rep = coercivity_report(gs.field(), gs.ref, gs.params);
  EXPECT_NEAR(rep.pm_margin, 0.0, 1e-14);
  EXPECT_NEAR(rep.coer2_margin, 0.0, 1e-14);
}

TEST(Coercivity, MarginMonotoneInEpsilon) {
  for (double B : {2.2, 2.5, 4.0}) {
    double prev = coercivity_margin(0.0, B);
    EXPECT_EQ(prev, 0.0);
    for (int i = 1; i <= 99; ++i) {
      const double next = coercivity_margin(i / 100.0, B);
      EXPECT_GT(next, prev);
      prev = next;
    }
  }
}

TEST(FunctionalRecord, EvaluateAgreesWithIndividualFunctionals) {
  const auto g = make_grid(128, 6.0, 5);
  const auto prm = focusing_params();
  std::mt19937_64 rng(8);
  const auto u = testsupport::random_field(g, prm, rng);
  const auto rec = evaluate(u, 0.25, prm);
  EXPECT_EQ(rec.t, 0.25);
  EXPECT_DOUBLE_EQ(rec.M, mass(u));
  EXPECT_DOUBLE_EQ(rec.P, potential(u, prm));
  EXPECT_DOUBLE_EQ(rec.E, energy(u, prm));
  EXPECT_DOUBLE_EQ(rec.Q, virial_quantity(u, prm));
  EXPECT_FALSE(rec.ratios.has_value());
}
