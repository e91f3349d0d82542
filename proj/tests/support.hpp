#pragma once
// Shared fixtures: the reference ground state is expensive enough to compute
// once per test binary.

#include <random>

#include "abnls/groundstate.hpp"

namespace testsupport {

inline abnls::PhysParams focusing_params() {
  return abnls::PhysParams{0.5, 0.5, 3.0, -1};
}

inline const abnls::GroundState& reference_ground_state() {
  static const abnls::GroundState gs =
      abnls::compute_ground_state(focusing_params(), abnls::make_grid(2048, 16.0, 1));
  return gs;
}

/// Smooth random field: a few modes with random Gaussian envelopes and r^nu onsets.
inline abnls::Field random_field(const abnls::PolarGrid& g, const abnls::PhysParams& prm, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> width(0.6, 3.0);
  std::uniform_real_distribution<double> centre(0.0, 3.0);
  abnls::ModeStack s(g);
  for (int m = -g.max_mode(); m <= g.max_mode(); ++m) {
    const double nu = abnls::mode_order(m, prm.alpha);
    const abnls::cplx a(nd(rng), nd(rng));
    const double w = width(rng);
    const double c = centre(rng);
    const double damp = 1.0 / (1.0 + m * m);
    for (int j = 0; j < g.n_r(); ++j) {
      const double r = g.r(j);
      s.mode(m)[j] = damp * a * std::pow(r, nu) * std::exp(-(r - c) * (r - c) / (w * w));
    }
  }
  return abnls::synthesize(s);
}

}  // namespace testsupport
