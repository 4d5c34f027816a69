#pragma once

#include <stdexcept>

#include "issl/models/model.hpp"
#include "issl/operators/gram.hpp"

namespace issl {

/// Damped Schrodinger on complex H^1_0: A = i Delta_h - damping I,
/// X = Y = U = H^1_0, B1 = B2 = C = I and N(z, y) = z y.
class Schrodinger {
 public:
  using State = ComplexGrid;
  using Input = ComplexGrid;

  explicit Schrodinger(std::size_t n, double p = 0.5, double damping = 1.0)
      : n_(n), damping_(damping), lap_(dirichlet_laplacian(std::max<std::size_t>(n, 1))),
        info_{"schrodinger", Structure::SkewPlusDissipative, NormKind::H10, NormKind::H10, NormKind::H10,
              p, true, 1.0, false, true} {
    if (n < 2) throw std::invalid_argument("schrodinger: n must be at least 2");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("schrodinger: p must lie in (0,1)");
    if (damping < 0.0) throw std::invalid_argument("schrodinger: damping must be nonnegative");
  }

  const ModelInfo& info() const { return info_; }
  std::size_t size() const { return n_; }
  double damping() const { return damping_; }
  double x_norm(const State& z) const { return norm(z, NormKind::H10); }
  double y_norm(const State& y) const { return norm(y, NormKind::H10); }
  double u_norm(const Input& u) const { return norm(u, NormKind::H10); }
  double x_inner(const State& a, const State& b) const { return inner_re(a, b, NormKind::H10); }

  State generator(const State& z) const {
    auto out = lap_.apply(z);
    out *= Complex(0.0, 1.0);
    out.axpy(-damping_, z);
    return out;
  }

  // (alpha I - i c Delta) x = r with alpha = 1 + c (damping - shift), written
  // as i c (gamma I - Delta) x = r, gamma = -i alpha / c.
  State resolvent(const State& r, double c, double shift) const {
    if (c == 0.0) return r;
    const double alpha = 1.0 + c * (damping_ - shift);
    const Complex gamma(0.0, -alpha / c);
    auto rhs = r;
    rhs *= Complex(0.0, -1.0 / c);
    return solve_shifted(lap_, gamma, rhs);
  }

  State inject(const Input& u) const { return u; }
  State observe(const State& z) const { return z; }
  Input feedback(const State& z, const State& y) const { return hadamard(z, y); }
  State feedback_adjoint_z(const Input& w, const State& y) const {
    State out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = std::conj(y[i]) * w[i];
    return out;
  }

  /// Re <L z, z>_X / ||z||_X^2 with L = -damping I.
  double dissipative_quotient(const State&) const { return -damping_; }
  double w_A() const { return -damping_; }
  double decay_rate() const { return damping_; }

  State zero_state() const { return State(n_); }
  Input zero_input() const { return Input(n_); }
  State eigenmode(std::size_t k, double amp) const {
    return scaled_to(sine_mode<Complex>(n_, k), amp, [&](const State& s) { return x_norm(s); });
  }
  State random_state(Rng& rng, FieldShape shape) const { return random_field<Complex>(n_, shape, rng); }
  Input random_input(Rng& rng, FieldShape shape) const { return random_field<Complex>(n_, shape, rng); }

  const TridiagOperator& laplacian() const { return lap_; }

 private:
  std::size_t n_;
  double damping_;
  TridiagOperator lap_;
  ModelInfo info_;
};

}  // namespace issl
