#include <doctest.h>

#include <cmath>

#include "issl/models/burgers.hpp"
#include "issl/models/schrodinger.hpp"
#include "issl/models/wave.hpp"
#include "issl/operators/gram.hpp"
#include "oracles.hpp"

using namespace issl;

namespace {

template <SystemModel M>
double state_diff(const M& m, const typename M::State& a, const typename M::State& b) {
  auto d = a;
  d -= b;
  return m.x_norm(d);
}

/// (I - c (A + s I)) applied to the resolvent output must give back r.
template <SystemModel M>
void check_resolvent(const M& m, double c, double shift) {
  Rng rng(21);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto r = m.random_state(rng, shape_by_index(i));
    const auto x = m.resolvent(r, c, shift);
    auto back = x;
    back.axpy(-c, m.generator(x));
    back.axpy(-c * shift, x);
    CHECK(state_diff(m, back, r) <= 1e-9 * m.x_norm(r));
  }
}

/// Euclidean adjoint of z -> N(z, y): Re<N(z,y), w> = Re<z, N*(w, y)>.
template <SystemModel M>
void check_adjoint(const M& m) {
  Rng rng(5);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto z = m.random_state(rng, shape_by_index(i));
    const auto y = m.random_state(rng, shape_by_index(i + 1));
    const auto w = m.random_input(rng, shape_by_index(i + 2));
    const double lhs = euclid_re(m.feedback(z, y), w);
    const double rhs = euclid_re(z, m.feedback_adjoint_z(w, y));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

/// N is linear in its first argument.
template <SystemModel M>
void check_linearity(const M& m) {
  Rng rng(6);
  const auto z1 = m.random_state(rng, FieldShape::RandomSmooth);
  const auto z2 = m.random_state(rng, FieldShape::WhiteNoise);
  const auto y = m.random_state(rng, FieldShape::Bump);
  auto zs = z1;
  zs.axpy(2.0, z2);
  auto lhs = m.feedback(zs, y);
  auto rhs = m.feedback(z1, y);
  rhs.axpy(2.0, m.feedback(z2, y));
  lhs -= rhs;
  CHECK(m.u_norm(lhs) <= 1e-12 * (1.0 + m.u_norm(rhs)));
}

}  // namespace

TEST_CASE("burgers_h1: structure and operators") {
  const BurgersH1 m(48);
  CHECK(m.info().x_kind == NormKind::H10);
  CHECK(m.info().y_kind == NormKind::H2capH10);
  CHECK(m.info().u_kind == NormKind::L2);
  CHECK(m.info().p == 0.5);
  CHECK(m.w_A() == doctest::Approx(-oracle::lap_mag(48, 1)).epsilon(1e-12));
  check_resolvent(m, 1e-3, 0.0);
  check_resolvent(m, 0.05, 2.0);
  check_adjoint(m);
  check_linearity(m);
  // N(z, y) = -z * D_c y against the explicit stencil.
  Rng rng(3);
  const auto z = m.random_state(rng, FieldShape::RandomSmooth);
  const auto y = m.random_state(rng, FieldShape::RandomSmooth);
  const auto n = m.feedback(z, y);
  const double h = z.h();
  for (std::size_t i = 0; i < 48; ++i) {
    const auto ii = static_cast<std::ptrdiff_t>(i);
    const double dy = (y.padded(ii + 1) - y.padded(ii - 1)) / (2 * h);
    CHECK(n[i] == doctest::Approx(-z[i] * dy).epsilon(1e-12));
  }
  CHECK_THROWS_AS(BurgersH1(3), std::invalid_argument);
  CHECK_THROWS_AS(BurgersH1(16, 1.0), std::invalid_argument);
}

TEST_CASE("burgers_l2: exact discrete cancellation of the convective pairing") {
  const BurgersL2 m(128);
  CHECK(m.info().global_dissipation);
  check_resolvent(m, 1e-3, 0.0);
  check_adjoint(m);
  check_linearity(m);
  Rng rng(77);
  for (std::size_t i = 0; i < 500; ++i) {
    auto z = m.random_state(rng, shape_by_index(i));
    z *= std::pow(10.0, rng.uniform(-3.0, 3.0));
    const double x = norm(z, NormKind::L2);
    CHECK(std::abs(l2_inner(m.feedback(z, z), z)) <= 1e-12 * x * x * x);
    CHECK(std::abs(feedback_pairing(m, z)) <= 1e-12 * x * x * x);
  }
}

TEST_CASE("schrodinger: skew part conserves, damping dissipates") {
  const Schrodinger m(40);
  Rng rng(2);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto z = m.random_state(rng, shape_by_index(i));
    const double zz = norm_sq(z, NormKind::H10);
    CHECK(m.x_inner(m.generator(z), z) == doctest::Approx(-zz).epsilon(1e-9));
  }
  check_resolvent(m, 1e-3, 0.0);
  check_resolvent(m, 0.1, 0.5);
  check_adjoint(m);
  check_linearity(m);
  CHECK(m.resolvent(m.eigenmode(2, 1.0), 0.0, 0.0)[3] == m.eigenmode(2, 1.0)[3]);
  // Eigenmode k is mapped by A to (-i lambda_k - 1) times itself.
  const auto e = m.eigenmode(3, 1.0);
  const auto ae = m.generator(e);
  const Complex lam(-1.0, -oracle::lap_mag(40, 3));
  for (std::size_t i = 0; i < 40; ++i) CHECK(std::abs(ae[i] - lam * e[i]) < 1e-8 * std::abs(lam));
}

TEST_CASE("wave: energy identity and resolvent") {
  const Wave m(32);
  Rng rng(8);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto z = m.random_state(rng, shape_by_index(i));
    CHECK(m.x_inner(m.generator(z), z) == doctest::Approx(-norm_sq(z.psi, NormKind::L2)).epsilon(1e-9));
    CHECK(m.dissipative_quotient(z) <= 0.0);
  }
  check_resolvent(m, 1e-3, 0.0);
  check_resolvent(m, 0.2, 0.4);
  check_adjoint(m);
  check_linearity(m);
  const auto u = m.random_input(rng, FieldShape::RandomSmooth);
  const auto injected = m.inject(u);
  CHECK(norm(injected.phi, NormKind::L2) == 0.0);
  CHECK(norm(injected.psi, NormKind::L2) == doctest::Approx(m.u_norm(u)));
}

TEST_CASE("eigenmodes are scaled in the state norm") {
  CHECK(BurgersH1(32).x_norm(BurgersH1(32).eigenmode(2, 0.3)) == doctest::Approx(0.3));
  CHECK(BurgersL2(32).x_norm(BurgersL2(32).eigenmode(1, 2.0)) == doctest::Approx(2.0));
  CHECK(Schrodinger(32).x_norm(Schrodinger(32).eigenmode(1, 0.5)) == doctest::Approx(0.5));
  CHECK(Wave(32).x_norm(Wave(32).eigenmode(1, 0.5)) == doctest::Approx(0.5));
}

TEST_CASE("linearized variant drops N and keeps A") {
  const Linearized<BurgersH1> lin(BurgersH1(32));
  CHECK(lin.info().name == "burgers_h1_linear");
  CHECK_FALSE(lin.info().feedback);
  Rng rng(1);
  const auto z = lin.random_state(rng, FieldShape::RandomSmooth);
  CHECK(lin.u_norm(lin.feedback(z, z)) == 0.0);
  CHECK(lin.w_A() == lin.base().w_A());
  const auto g1 = lin.generator(z), g2 = lin.base().generator(z);
  for (std::size_t i = 0; i < 32; ++i) CHECK(g1[i] == g2[i]);
}
