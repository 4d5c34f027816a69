#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "issl/models/model.hpp"
#include "issl/operators/gram.hpp"
#include "issl/operators/spectrum.hpp"

namespace issl {

/// Constants of |<N(z,Cz), B2* z>| <= -m1 Re<Az, z>_X + m2 ||z||_X^2 on
/// ||z||_X <= delta, and the Gronwall rate they give.
struct DissipationFit {
  double m1 = 0.0;
  double m2 = 0.0;
  double delta = 0.0;
  double mu = 0.0;
  double K = 0.0;
  double p = 0.5;
  /// (1 - m1) w_A + m2, the rate of the dissipation inequality itself.
  double dissipation_rate = 0.0;
  /// nu, with -nu = (1 - m1 - mu) w_A + m2 (self-adjoint) or w_A + mu + m2 (skew).
  double nu = 0.0;
  /// Gain in ||z(t)|| <= ||z0|| e^{-nu t} + c e^{-nu t} ||e^{nu .} u1||.
  double c = 0.0;
  bool feasible = false;
  /// The pairing vanishes identically, so m1 = m2 = 0 holds without delta.
  bool global = false;
  std::size_t violations = 0;
  std::size_t checked = 0;
};

/// Closed-form constants for one (delta, mu). K is the bilinear constant of N;
/// the operator norms of B2* and C are 1 for every shipped model, so K~ = K.
template <SystemModel M>
DissipationFit dissipation_constants(const M& m, double delta, double mu, double K) {
  const auto& info = m.info();
  if (info.structure == Structure::DampedWave)
    throw std::invalid_argument("fit_dissipation: the wave model needs the modified energy (wave_energy_fit)");
  if (!(delta > 0.0) || !(mu > 0.0)) throw std::invalid_argument("fit_dissipation: need delta > 0 and mu > 0");
  DissipationFit fit;
  fit.delta = delta;
  fit.mu = mu;
  fit.K = K;
  fit.p = info.p;
  const double wa = m.w_A();
  const double b = info.b_adjoint_norm;
  fit.global = info.global_dissipation;
  if (fit.global) {
    fit.m1 = 0.0;
    fit.m2 = 0.0;
  } else if (info.structure == Structure::SelfAdjoint) {
    const double p = info.p;
    fit.m1 = std::pow(mu, 2.0 / (1.0 + p));
    fit.m2 = 0.5 * (1.0 - p) * std::pow(K * b / mu, 2.0 / (1.0 - p)) * std::pow(delta, 2.0 / (1.0 - p));
  } else {
    fit.m1 = 0.0;
    fit.m2 = K * b * delta;
  }
  fit.dissipation_rate = (1.0 - fit.m1) * wa + fit.m2;
  if (info.structure == Structure::SelfAdjoint) {
    fit.nu = -((1.0 - fit.m1 - mu) * wa + fit.m2);
    fit.feasible = 1.0 - fit.m1 - mu > 0.0 && fit.nu > 0.0;
  } else {
    fit.nu = -(wa + mu + fit.m2);
    fit.feasible = fit.nu > 0.0;
  }
  fit.c = std::sqrt(b * b / (2.0 * mu));
  return fit;
}

/// dissipation_constants plus a sampled check of the inequality on the ball
/// ||z||_X <= delta (on all of X for global models).
template <SystemModel M>
DissipationFit fit_dissipation(const M& m, double delta, double mu, double K, std::size_t samples, const Rng& rng) {
  if (samples < 1) throw std::invalid_argument("fit_dissipation: samples must be >= 1");
  auto fit = dissipation_constants(m, delta, mu, K);
  for (std::size_t i = 0; i < samples; ++i) {
    Rng r = rng.split(i);
    auto z = m.random_state(r, shape_by_index(i));
    const double radius = fit.global ? std::pow(10.0, r.uniform(-3.0, 3.0)) : delta * r.uniform(0.01, 1.0);
    z = scaled_to(std::move(z), radius, [&](const auto& s) { return m.x_norm(s); });
    const double lhs = std::abs(feedback_pairing(m, z));
    const double az = m.x_inner(m.generator(z), z);
    const double zz = m.x_norm(z) * m.x_norm(z);
    const double rhs = -fit.m1 * az + fit.m2 * zz;
    // Rounding allowance: the pairing is a sum of O(n) terms of size ||N|| ||z||.
    const double slack = 1e-12 * (std::abs(fit.m1 * az) + fit.m2 * zz + m.u_norm(m.feedback(z, z)) * m.x_norm(z) + lhs);
    ++fit.checked;
    if (lhs > rhs + slack) ++fit.violations;
  }
  return fit;
}

/// Best feasible fit over a mu grid (largest nu); feasible = false if none.
template <SystemModel M>
DissipationFit best_dissipation_fit(const M& m, double delta, double K, const std::vector<double>& mu_grid) {
  DissipationFit best;
  best.nu = -std::numeric_limits<double>::infinity();
  for (double mu : mu_grid) {
    auto fit = dissipation_constants(m, delta, mu, K);
    if (fit.feasible && (!best.feasible || fit.nu > best.nu)) best = fit;
  }
  return best;
}

inline std::vector<double> default_mu_grid() { return {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5}; }

// ---------------------------------------------------------------------------
// Damped wave: modified energy E_eps = ||phi||_H10^2 + ||psi||^2 + eps <phi, psi>.

struct WaveRate {
  double eps_energy = 0.0;
  double mu = 0.0;
  double beta = 0.0;
  double d1 = 0.0;      // (1/2) dE/dt <= -d1 E + ||u||^2 / (4 mu)
  double lower = 1.0;   // lower ||z||^2 <= E_eps <= upper ||z||^2
  double upper = 1.0;
  double c0 = 1.0;      // state gain sqrt(upper / lower)
  double c = 0.0;       // input gain sqrt(1 / (2 mu lower))
  bool feasible = false;
};

template <class State>
double wave_energy(const State& z, double eps) {
  return norm_sq(z.phi, NormKind::H10) + norm_sq(z.psi, NormKind::L2) + eps * l2_inner(z.phi, z.psi);
}

/// Equivalence constants 1 -+ eps / (2 sqrt(mu_1)), from |<phi, psi>| <=
/// mu_1^{-1/2} ||phi||_H10 ||psi||_L2 (discrete Poincare).
inline std::pair<double, double> wave_equivalence(std::size_t n, double eps) {
  const double mu1 = neg_laplacian_eigenvalue(n, 1);
  const double a = eps / (2.0 * std::sqrt(mu1));
  return {1.0 - a, 1.0 + a};
}

/// Rate from the energy identity along the closed loop with ||z|| <= delta:
///   (1/2) E' <= Q(phi, psi) + beta ||z||_X^2 + ||u||^2 / (4 mu),
///   Q = -(1 - eps/2) ||psi||^2 - (eps/2) ||phi||_H10^2 - (eps/2) <phi, psi>,
///   beta = mu kappa^2 + K delta kappa,  kappa^2 = 1 + eps^2 / (4 mu_1),
/// where kappa bounds ||psi + (eps/2) phi||_L2 by ||z||_X. Q + beta ||z||^2 is
/// diagonal in the sine basis, so d1 is the smallest over modes of the
/// largest d keeping the 2x2 form of Q + beta ||z||^2 + d E negative
/// semidefinite.
inline WaveRate wave_rate(std::size_t n, double eps, double mu, double K, double delta) {
  WaveRate r;
  r.eps_energy = eps;
  r.mu = mu;
  const double mu1 = neg_laplacian_eigenvalue(n, 1);
  const double kappa = std::sqrt(1.0 + eps * eps / (4.0 * mu1));
  r.beta = mu * kappa * kappa + K * delta * kappa;
  std::tie(r.lower, r.upper) = wave_equivalence(n, eps);
  if (!(r.lower > 0.0) || !(mu > 0.0)) return r;

  auto nsd = [&](double lam, double d) {
    const double a11 = lam * (d - 0.5 * eps + r.beta);
    const double a22 = d - 1.0 + 0.5 * eps + r.beta;
    const double a12 = 0.5 * eps * d - 0.25 * eps;
    return a11 <= 0.0 && a22 <= 0.0 && a11 * a22 - a12 * a12 >= 0.0;
  };
  double d1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= n; ++k) {
    const double lam = neg_laplacian_eigenvalue(n, k);
    if (!nsd(lam, 0.0)) {
      d1 = 0.0;
      break;
    }
    double lo = 0.0, hi = std::max(0.0, std::min(0.5 * eps - r.beta, 1.0 - 0.5 * eps - r.beta));
    if (nsd(lam, hi)) {
      lo = hi;
    } else {
      for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (nsd(lam, mid) ? lo : hi) = mid;
      }
    }
    d1 = std::min(d1, lo);
  }
  r.d1 = d1;
  r.feasible = d1 > 0.0;
  r.c0 = std::sqrt(r.upper / r.lower);
  r.c = std::sqrt(1.0 / (2.0 * mu * r.lower));
  return r;
}

inline std::vector<double> default_wave_eps_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 20; ++i) g.push_back(0.05 * i);
  return g;
}

/// Largest d1 over the (eps, mu) grids.
inline WaveRate best_wave_rate(std::size_t n, double K, double delta, const std::vector<double>& eps_grid,
                               const std::vector<double>& mu_grid) {
  WaveRate best;
  for (double eps : eps_grid)
    for (double mu : mu_grid) {
      auto r = wave_rate(n, eps, mu, K, delta);
      if (r.feasible && (!best.feasible || r.d1 > best.d1)) best = r;
    }
  return best;
}

}  // namespace issl
