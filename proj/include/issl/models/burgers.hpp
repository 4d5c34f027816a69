#pragma once

#include <stdexcept>

#include "issl/models/model.hpp"
#include "issl/operators/gram.hpp"
#include "issl/operators/spectrum.hpp"

namespace issl {

namespace detail {

/// State handling shared by the two Burgers variants: real field, A = Delta_h,
/// B1 = B2 = C = identity.
class BurgersBase {
 public:
  using State = RealGrid;
  using Input = RealGrid;

  BurgersBase(std::size_t n, ModelInfo info)
      : n_(n), lap_(dirichlet_laplacian(n)), w_a_(max_eigenvalue(lap_)), info_(std::move(info)) {
    if (!(info_.p > 0.0 && info_.p < 1.0)) throw std::invalid_argument("burgers: p must lie in (0,1)");
  }

  const ModelInfo& info() const { return info_; }
  std::size_t size() const { return n_; }
  double x_norm(const State& z) const { return norm(z, info_.x_kind); }
  double y_norm(const State& y) const { return norm(y, info_.y_kind); }
  double u_norm(const Input& u) const { return norm(u, info_.u_kind); }
  double x_inner(const State& a, const State& b) const { return inner_re(a, b, info_.x_kind); }

  State generator(const State& z) const { return lap_.apply(z); }
  State resolvent(const State& r, double c, double shift) const {
    return solve_shifted(lap_.scaled(c), 1.0 - c * shift, r);
  }
  State inject(const Input& u) const { return u; }
  State observe(const State& z) const { return z; }

  /// <A z, z>_X / ||z||_X^2.
  double dissipative_quotient(const State& z) const { return x_inner(generator(z), z) / norm_sq(z, info_.x_kind); }
  /// A and the Gram operator of X share the sine eigenbasis, so w_A is the
  /// top eigenvalue of Delta_h in either norm.
  double w_A() const { return w_a_; }
  double decay_rate() const { return -w_a_; }

  State zero_state() const { return State(n_); }
  Input zero_input() const { return Input(n_); }
  State eigenmode(std::size_t k, double amp) const {
    return scaled_to(sine_mode<double>(n_, k), amp, [&](const State& s) { return x_norm(s); });
  }
  State random_state(Rng& rng, FieldShape shape) const { return random_field<double>(n_, shape, rng); }
  Input random_input(Rng& rng, FieldShape shape) const { return random_field<double>(n_, shape, rng); }

  const TridiagOperator& laplacian() const { return lap_; }

 protected:
  std::size_t n_;
  TridiagOperator lap_;
  double w_a_;
  ModelInfo info_;
};

}  // namespace detail

/// Viscous Burgers with X = H^1_0, Y = H^2 cap H^1_0, U = L^2 and
/// N(z, y) = -z D_c y.
class BurgersH1 : public detail::BurgersBase {
 public:
  explicit BurgersH1(std::size_t n, double p = 0.5)
      : BurgersBase(check(n), ModelInfo{"burgers_h1", Structure::SelfAdjoint, NormKind::H10, NormKind::H2capH10,
                                        NormKind::L2, p, false, 1.0, false, true}) {}

  Input feedback(const State& z, const State& y) const { return -hadamard(z, central_difference(y)); }
  State feedback_adjoint_z(const Input& w, const State& y) const { return -hadamard(central_difference(y), w); }

 private:
  static std::size_t check(std::size_t n) {
    if (n < 4) throw std::invalid_argument("burgers_h1: n must be at least 4");
    return n;
  }
};

/// Viscous Burgers with X = L^2, Y = H^1_0, U = H^{-1}. The convective term
/// uses the split form N(z, y) = -(1/3) [D_c(z y) + z D_c y], for which
/// <N(z, z), z> = 0 holds exactly on the grid.
class BurgersL2 : public detail::BurgersBase {
 public:
  explicit BurgersL2(std::size_t n, double p = 0.75)
      : BurgersBase(check(n), ModelInfo{"burgers_l2", Structure::SelfAdjoint, NormKind::L2, NormKind::H10,
                                        NormKind::Hminus1, p, false, 1.0, true, true}) {}

  Input feedback(const State& z, const State& y) const {
    auto out = central_difference(hadamard(z, y));
    out += hadamard(z, central_difference(y));
    out *= -1.0 / 3.0;
    return out;
  }
  // D_c is antisymmetric under zero padding, so its transpose is -D_c.
  State feedback_adjoint_z(const Input& w, const State& y) const {
    auto out = hadamard(central_difference(y), w);
    out -= hadamard(y, central_difference(w));
    out *= -1.0 / 3.0;
    return out;
  }

 private:
  static std::size_t check(std::size_t n) {
    if (n < 2) throw std::invalid_argument("burgers_l2: n must be at least 2");
    return n;
  }
};

}  // namespace issl
