#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "abnls/diagnostics.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace abnls;

namespace {

PhysParams defocusing() { return PhysParams{0.5, 0.5, 3.0, +1}; }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(RadialWeight, QuadraticDerivatives) {
  const auto w = RadialWeight::quadratic();
  for (double r : {0.1, 1.0, 7.5}) {
    EXPECT_DOUBLE_EQ(w.value(r), r * r);
    EXPECT_DOUBLE_EQ(w.derivative(r, 1), 2 * r);
    EXPECT_DOUBLE_EQ(w.derivative(r, 2), 2.0);
    EXPECT_DOUBLE_EQ(w.laplacian(r), 4.0);
    EXPECT_NEAR(w.bilaplacian(r), 0.0, 1e-12 / (r * r));
  }
}

TEST(RadialWeight, MorawetzShapeAndConvexity) {
  for (double R : {1.0, 2.5}) {
    const auto f = RadialWeight::morawetz(R);
    EXPECT_DOUBLE_EQ(f.value(0.5 * R), 0.25 * R * R);
    EXPECT_NEAR(f.derivative(3 * R, 1), 3 * R, 1e-12 * R);
    EXPECT_NEAR(f.derivative(3 * R, 2), 0.0, 1e-12);
    EXPECT_NEAR(f.value(5 * R) - f.value(4 * R), 3 * R * R, 1e-10 * R * R);
    const auto g = make_grid(400, 3 * R, 1);
    for (int j = 0; j < g.n_r(); ++j) {
      const double r = g.r(j);
      EXPECT_GE(std::min(f.derivative(r, 1), f.derivative(r, 2)), 0.0) << r;
    }
  }
}

TEST(RadialWeight, MorawetzDerivativesScaleLikeRadiusTimesPower) {
  // |d^k f_R| r^{k-1} / R on the annulus is the same function of r/R for every R.
  const auto f1 = RadialWeight::morawetz(1.0), f4 = RadialWeight::morawetz(4.0);
  for (double x = 1.0; x <= 2.0; x += 0.05)
    for (int k = 1; k <= 3; ++k) {
      const double a = std::abs(f1.derivative(x, k)) * std::pow(x, k - 1);
      const double b = std::abs(f4.derivative(4 * x, k)) * std::pow(4 * x, k - 1) / 4.0;
      EXPECT_NEAR(a, b, 1e-10 * (1 + a));
      EXPECT_LE(a, 16.0);
    }
}

TEST(RadialWeight, BlowupConstraintsOnSamples) {
  for (double R : {1.0, 3.0}) {
    const auto b = RadialWeight::blowup(R);
    EXPECT_DOUBLE_EQ(b.value(0.5 * R), 0.125 * R * R);
    EXPECT_NEAR(b.value(2.5 * R), 8.0 / 7.0 * R * R, 1e-12 * R * R);
    EXPECT_EQ(b.derivative(3 * R, 1), 0.0);
    const auto g = make_grid(512, 3 * R, 1);
    for (int j = 0; j < g.n_r(); ++j) {
      const double r = g.r(j);
      EXPECT_LE(b.derivative(r, 2), 1.0 + 1e-14) << r;
      EXPECT_LE(b.derivative(r, 1), r * (1.0 + 1e-14)) << r;
      EXPECT_LE(b.laplacian(r), 2.0 + 1e-13) << r;
    }
  }
}

TEST(RadialWeight, BumpRange) {
  const auto psi = RadialWeight::bump(2.0);
  EXPECT_DOUBLE_EQ(psi.value(0.3), 1.0);
  EXPECT_DOUBLE_EQ(psi.value(2.5), 0.0);
  for (double r = 0.0; r < 3.0; r += 0.01) {
    EXPECT_GE(psi.value(r), -1e-15);
    EXPECT_LE(psi.value(r), 1.0 + 1e-15);
  }
  EXPECT_THROW(RadialWeight::bump(0.0), ConfigError);
}

TEST(VirialValue, GaussianSecondMoment) {
  const auto g = make_grid(1024, 16.0, 1);
  const auto u = Field::from_function(g, [](double r, double) { return std::exp(-r * r / 2); });
  const double oracle = oracle::planar_radial_integral([](double r) { return r * r * std::exp(-r * r); });
  EXPECT_LT(rel(oracle, std::numbers::pi), 1e-12);
  EXPECT_LT(rel(virial_value(u, RadialWeight::quadratic()), oracle), 1e-8);
  EXPECT_EQ(virial_value(Field(g), RadialWeight::quadratic()), 0.0);
  EXPECT_LT(rel(virial_value(2.0 * u, RadialWeight::quadratic()), 4.0 * virial_value(u, RadialWeight::quadratic())),
            1e-14);
}

TEST(VirialSecondDerivative, QuadraticWeightCollapsesToEightQ) {
  const auto g = make_grid(256, 10.0, 9);
  const auto prm = testsupport::focusing_params();
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto u = testsupport::random_field(g, prm, rng);
    const double q = virial_quantity(u, prm);
    EXPECT_LT(std::abs(virial_second_derivative(u, RadialWeight::quadratic(), prm) - 8.0 * q),
              1e-8 * std::max(std::abs(8 * q), grad_alpha_sq(u, prm)));
  }
}

TEST(VirialSecondDerivative, VanishesAtGroundState) {
  const auto& gs = testsupport::reference_ground_state();
  const double v2 = virial_second_derivative(gs.field(), RadialWeight::quadratic(), gs.params);
  EXPECT_LT(std::abs(v2), 8e-5 * gs.grad_alpha_sq());
}

TEST(VirialSecondDerivative, MatchesFiniteDifferencesAlongTrajectory) {
  // The spatial discretisation contributes O(h^2) relative error (about 4e-5
  // here); the remainder is the O(dt^2) splitting defect.
  const auto g = make_grid(2048, 16.0, 1);
  const auto prm = defocusing();
  const auto u0 = gaussian_initial(g, prm, 1.5);
  for (const double R : {0.0, 1.5}) {
    const auto w = R == 0.0 ? RadialWeight::quadratic() : RadialWeight::morawetz(R);
    const double dt = 1e-3;
    SplitStepper st(prm, g);
    std::vector<Field> us{u0};
    for (int k = 0; k < 600; ++k) us.push_back(st.step(us.back(), dt));
    double worst = 0.0, scale = 0.0;
    for (int k = 100; k < 600; k += 100) {
      const double fd = (virial_value(us[k + 1], w) - 2 * virial_value(us[k], w) + virial_value(us[k - 1], w)) /
                        (dt * dt);
      const double formula = virial_second_derivative(us[k], w, prm);
      worst = std::max(worst, std::abs(fd - formula));
      scale = std::max(scale, std::abs(formula));
    }
    EXPECT_LT(worst, (1e-4 + 10 * dt * dt) * scale) << "R=" << R;
  }
}

TEST(Morawetz, DefocusingRunRespectsBound) {
  const auto g = make_grid(1024, 32.0, 1);
  const auto prm = defocusing();
  EvolveConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 8.0;
  cfg.record_every = 2;
  const auto tr = run(gaussian_initial(g, prm, 1.5), cfg, prm);
  const auto rep = morawetz_growth(tr, prm);
  EXPECT_EQ(rep.verdict, Verdict::holds) << rep.summary;
  ASSERT_TRUE(rep.find("slope"));
  EXPECT_LE(*rep.find("slope"), 1.0 / 1.5 + 0.1);
}

TEST(Morawetz, ConstantPotentialGivesLinearGrowth) {
  std::vector<FunctionalRecord> recs;
  for (int i = 0; i <= 64; ++i) {
    FunctionalRecord r;
    r.t = i * 0.125;
    r.P = 2.0;
    recs.push_back(r);
  }
  const auto rep = morawetz_growth(recs, defocusing());
  EXPECT_NEAR(*rep.find("slope"), 1.0, 1e-12);
  EXPECT_EQ(rep.verdict, Verdict::violated);
  EXPECT_EQ(morawetz_growth(std::vector<FunctionalRecord>{}, defocusing()).verdict, Verdict::inconclusive);
}

TEST(VanishingSequence, DefocusingRunDecreases) {
  const auto g = make_grid(1024, 32.0, 1);
  const auto prm = defocusing();
  EvolveConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 8.0;
  cfg.record_every = 5;
  cfg.snapshot_every = 1;
  const auto tr = run(gaussian_initial(g, prm, 1.5), cfg, prm);
  const auto seq = vanishing_sequence(tr, prm);
  ASSERT_EQ(seq.size(), 5u);
  EXPECT_TRUE(is_nonincreasing(seq));
  for (std::size_t i = 1; i < seq.size(); ++i) EXPECT_GT(seq[i].R, seq[i - 1].R);

  Trajectory zero;
  zero.snapshots.push_back({0.0, Field(g)});
  zero.snapshots.push_back({1.0, Field(g)});
  for (const auto& p : vanishing_sequence(zero, prm)) EXPECT_EQ(p.localized, 0.0);

  Trajectory stopped = tr;
  stopped.reason = StopReason::gradient_cap_hit;
  EXPECT_TRUE(vanishing_sequence(stopped, prm).empty());
}

namespace {

Trajectory ground_state_run(double c, double t_end) {
  const auto& gs = testsupport::reference_ground_state();
  const auto u0 = gs.field(1, c);
  EvolveConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = t_end;
  cfg.adapt = true;
  cfg.record_every = 20;
  cfg.snapshot_every = 5;
  cfg.gradient_cap = 10.0 * std::sqrt(grad_sq(u0));
  return run(u0, cfg, gs.params, &gs.ref);
}

}  // namespace

TEST(Monitors, SupercriticalNegativeEnergyShowsBlowupSignature) {
  const auto tr = ground_state_run(1.5, 2.0);
  const auto prm = testsupport::focusing_params();
  const auto b = blowup_monitor(tr, prm);
  EXPECT_EQ(b.verdict, Verdict::holds) << b.summary;
  for (const auto& r : tr.records) EXPECT_LT(r.Q, 0.0);
  EXPECT_EQ(scattering_monitor(tr).verdict, Verdict::violated);
}

TEST(Monitors, SmallDataScattersWithoutSignature) {
  const auto tr = ground_state_run(0.5, 4.0);
  const auto prm = testsupport::focusing_params();
  const auto b = blowup_monitor(tr, prm);
  EXPECT_EQ(b.verdict, Verdict::violated);
  for (const auto& r : tr.records) {
    EXPECT_GT(r.Q, 0.0);
    EXPECT_LT(r.ratios->GM, 1.0);
  }
  const auto s = scattering_monitor(tr);
  EXPECT_EQ(s.verdict, Verdict::holds) << s.summary;
}

TEST(Monitors, GroundStateIsThresholdCase) {
  const auto tr = ground_state_run(1.0, 0.5);
  EXPECT_EQ(scattering_monitor(tr).verdict, Verdict::inconclusive);
}

TEST(Monitors, DefocusingDriverIsNonnegative) {
  const auto g = make_grid(512, 16.0, 1);
  const auto prm = defocusing();
  EvolveConfig cfg;
  cfg.dt = 1e-2;
  cfg.t_end = 1.0;
  const auto tr = run(gaussian_initial(g, prm, 3.0), cfg, prm);
  for (const auto& r : tr.records) {
    EXPECT_GE(signed_virial(r, prm), r.grad_alpha_sq);
    EXPECT_GE(r.E, r.grad_alpha_sq);
  }
  EXPECT_EQ(blowup_monitor(tr, prm).verdict, Verdict::violated);
  EXPECT_EQ(blowup_monitor(Trajectory{}, prm).verdict, Verdict::inconclusive);
}

TEST(ThresholdClassifier, AmplitudeFamily) {
  const auto& gs = testsupport::reference_ground_state();
  const auto& prm = gs.params;
  EXPECT_EQ(threshold_classifier(gs.field(1, 0.5), gs.ref, prm).predicted, Prediction::global_scattering);
  EXPECT_EQ(threshold_classifier(gs.field(1, 1.0), gs.ref, prm).predicted, Prediction::outside_theory);
  EXPECT_EQ(threshold_classifier(gs.field(1, 1.5), gs.ref, prm).predicted, Prediction::blowup);
  const auto q = threshold_classifier(gs.field(1, 1.5), gs.ref, prm).ratios;
  EXPECT_LT(q.EM, 0.0);
}

TEST(ThresholdClassifier, ScalingFamilyMatchesFieldEvaluation) {
  const auto& gs = testsupport::reference_ground_state();
  const auto& prm = gs.params;
  // c phi(mu x) on the dilated grid carries the same samples.
  for (double c : {0.8, 1.2}) {
    for (double mu : {0.7, 1.6}) {
      const auto u = dilate(gs.field(1, 1.0), c, mu);
      const auto direct = invariant_ratios(u, gs.ref, prm);
      const auto scaled = scaled_ratios(c, mu, gs.ref, prm);
      EXPECT_LT(rel(scaled.EM, direct.EM), 1e-10);
      EXPECT_LT(rel(scaled.GM, direct.GM), 1e-10);
      EXPECT_LT(rel(scaled.PM, direct.PM), 1e-10);
    }
  }
}

TEST(ThresholdClassifier, TunedBlowupBelowThreshold) {
  // Positive energy, EM < 1 and GM > 1: scan along the scaling family.
  const auto& gs = testsupport::reference_ground_state();
  const auto& prm = gs.params;
  bool found = false;
  for (double c = 1.0; c <= 1.1 && !found; c += 0.01)
    for (double mu = 0.5; mu <= 2.0 && !found; mu += 0.05) {
      const auto q = scaled_ratios(c, mu, gs.ref, prm);
      if (q.EM > 0.0 && q.EM < 1.0 && q.GM > 1.0) {
        found = true;
        const auto u = dilate(gs.field(1, 1.0), c, mu);
        EXPECT_EQ(threshold_classifier(u, gs.ref, prm).predicted, Prediction::blowup);
      }
    }
  EXPECT_TRUE(found);
}

TEST(MonitorReport, VerdictLineAndLookup) {
  MonitorReport r;
  r.monitor = "demo";
  r.verdict = Verdict::holds;
  r.summary = "ok";
  r.add("x", 1.5);
  EXPECT_EQ(r.verdict_line(), "demo: holds (ok)");
  EXPECT_EQ(*r.find("x"), 1.5);
  EXPECT_FALSE(r.find("y"));
  EXPECT_EQ(parse_weight_kind("blowup_b_R"), WeightKind::blowup);
  EXPECT_THROW(parse_weight_kind("cubic"), ConfigError);
}
