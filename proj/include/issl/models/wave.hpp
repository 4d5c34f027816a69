#pragma once

#include <stdexcept>

#include "issl/models/model.hpp"
#include "issl/operators/gram.hpp"

namespace issl {

/// Damped semilinear wave as a first-order system on X = H^1_0 x L^2:
///   phi' = psi,  psi' = Delta phi - psi + u1 + phi^2.
/// B1 u = B2 u = (0, u), C = I, N((phi1, psi1), (phi2, psi2)) = phi1 phi2.
/// The damping block K = diag(0, -I) is only semidefinite, so w_A = 0; the
/// generator's spectral abscissa is -1/2.
class Wave {
 public:
  using State = ProductState;
  using Input = RealGrid;

  explicit Wave(std::size_t n, double p = 0.5)
      : n_(n), lap_(dirichlet_laplacian(std::max<std::size_t>(n, 1))),
        info_{"wave", Structure::DampedWave, NormKind::ProductH10xL2, NormKind::ProductH10xL2, NormKind::L2,
              p, false, 1.0, false, true} {
    if (n < 2) throw std::invalid_argument("wave: n must be at least 2");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("wave: p must lie in (0,1)");
  }

  const ModelInfo& info() const { return info_; }
  std::size_t size() const { return n_; }
  double x_norm(const State& z) const { return norm(z, NormKind::ProductH10xL2); }
  double y_norm(const State& y) const { return norm(y, NormKind::ProductH10xL2); }
  double u_norm(const Input& u) const { return norm(u, NormKind::L2); }
  double x_inner(const State& a, const State& b) const { return inner_re(a, b, NormKind::ProductH10xL2); }

  State generator(const State& z) const {
    auto dpsi = lap_.apply(z.phi);
    dpsi -= z.psi;
    return State(z.psi, std::move(dpsi));
  }

  // phi' = (r_phi + c psi') / (1 - c s) eliminates phi', leaving
  // ((1 + c - c s) I - c^2/(1 - c s) Delta) psi' = r_psi + c/(1 - c s) Delta r_phi.
  State resolvent(const State& r, double c, double shift) const {
    const double g = 1.0 - c * shift;
    if (!(g > 0.0)) throw std::invalid_argument("wave: shift too large for the step");
    auto rhs = lap_.apply(r.phi);
    rhs *= c / g;
    rhs += r.psi;
    auto psi = solve_shifted(lap_.scaled(c * c / g), 1.0 + c - c * shift, rhs);
    auto phi = r.phi;
    phi.axpy(c, psi);
    phi *= 1.0 / g;
    return State(std::move(phi), std::move(psi));
  }

  State inject(const Input& u) const { return State(RealGrid(n_), u); }
  State observe(const State& z) const { return z; }
  Input feedback(const State& z, const State& y) const { return hadamard(z.phi, y.phi); }
  State feedback_adjoint_z(const Input& w, const State& y) const { return State(hadamard(y.phi, w), RealGrid(n_)); }

  /// Re <K z, z>_X / ||z||_X^2 = -||psi||^2 / ||z||_X^2.
  double dissipative_quotient(const State& z) const { return -norm_sq(z.psi, NormKind::L2) / norm_sq(z, info_.x_kind); }
  double w_A() const { return 0.0; }
  /// Every mode satisfies mu_k > 1/4, so all eigenvalues have real part -1/2.
  double decay_rate() const { return 0.5; }

  State zero_state() const { return State(n_); }
  Input zero_input() const { return Input(n_); }
  State eigenmode(std::size_t k, double amp) const {
    return scaled_to(State(sine_mode<double>(n_, k), RealGrid(n_)), amp, [&](const State& s) { return x_norm(s); });
  }
  State random_state(Rng& rng, FieldShape shape) const {
    auto phi = random_field<double>(n_, shape, rng);
    auto psi = random_field<double>(n_, shape, rng);
    return State(std::move(phi), std::move(psi));
  }
  Input random_input(Rng& rng, FieldShape shape) const { return random_field<double>(n_, shape, rng); }

  const TridiagOperator& laplacian() const { return lap_; }

 private:
  std::size_t n_;
  TridiagOperator lap_;
  ModelInfo info_;
};

}  // namespace issl
