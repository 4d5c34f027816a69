#include <doctest.h>

#include <cmath>
#include <complex>

#include "issl/linsys/linsys.hpp"
#include "issl/models/burgers.hpp"
#include "issl/models/schrodinger.hpp"
#include "issl/models/wave.hpp"
#include "oracles.hpp"

using namespace issl;

namespace {

template <SystemModel M>
Trajectory<typename M::State> free_decay(const M& m, double dt, double T, Scheme s = Scheme::ImplicitEuler) {
  const LinearSim<M> sim(m, dt, s);
  const auto zero = InputSignal<typename M::Input>::zero(dt);
  return simulate_linear(sim, m.eigenmode(1, 1.0), zero, zero, T);
}

}  // namespace

TEST_CASE("burgers eigenmode decays by the implicit Euler factor") {
  const double dt = 1e-3;
  const BurgersH1 m(64);
  const auto traj = free_decay(m, dt, 1.0);
  const double lam = m.w_A();
  for (std::size_t j = 0; j < traj.size(); j += 50)
    CHECK(traj.x_norms[j] == doctest::Approx(std::pow(1.0 - dt * lam, -static_cast<double>(j))).epsilon(1e-10));
}

TEST_CASE("crank-nicolson eigenmode factor") {
  const double dt = 1e-2;
  const BurgersL2 m(32);
  const auto traj = free_decay(m, dt, 0.5, Scheme::CrankNicolson);
  const double lam = m.w_A();
  const double g = (1.0 + 0.5 * dt * lam) / (1.0 - 0.5 * dt * lam);
  for (std::size_t j = 0; j < traj.size(); ++j)
    CHECK(traj.x_norms[j] == doctest::Approx(std::pow(std::abs(g), static_cast<double>(j))).epsilon(1e-10));
}

TEST_CASE("schrodinger eigenmode decays by |1 - dt lambda|^{-j}") {
  const double dt = 1e-3;
  const Schrodinger m(32);
  const auto traj = free_decay(m, dt, 1.0);
  const std::complex<double> lam(-1.0, -oracle::lap_mag(32, 1));
  for (std::size_t j = 0; j < traj.size(); j += 50)
    CHECK(traj.x_norms[j] == doctest::Approx(std::pow(std::abs(1.0 - dt * lam), -static_cast<double>(j))).epsilon(1e-10));
}

TEST_CASE("wave eigenmode follows the per-mode 2x2 recurrence") {
  const double dt = 1e-3;
  const std::size_t n = 32;
  const Wave m(n);
  const auto traj = free_decay(m, dt, 1.0);
  const double mu = oracle::lap_mag(n, 1);
  // (I - dt M)^{-1} with M = [[0, 1], [-mu, -1]] acting on (phi, psi) coefficients.
  const double a11 = 1.0, a12 = -dt, a21 = dt * mu, a22 = 1.0 + dt;
  const double det = a11 * a22 - a12 * a21;
  double a = 1.0, b = 0.0;
  const double e0 = std::sqrt(mu * a * a + b * b);
  for (std::size_t j = 0; j < traj.size(); ++j) {
    CHECK(traj.x_norms[j] == doctest::Approx(std::sqrt(mu * a * a + b * b) / e0).epsilon(1e-10));
    const double na = (a22 * a - a12 * b) / det, nb = (-a21 * a + a11 * b) / det;
    a = na;
    b = nb;
  }
}

TEST_CASE("input map and output map compose linearly") {
  const double dt = 2e-3, T = 0.4;
  const BurgersH1 m(32);
  const LinearSim<BurgersH1> sim(m, dt);
  Rng rng(4);
  const std::size_t count = steps_to(T, dt) + 1;
  const auto u = InputSignal<RealGrid>::separable(m.random_input(rng, FieldShape::RandomSmooth), count, dt,
                                                  [](double t) { return std::cos(5 * t); });
  const auto zero = InputSignal<RealGrid>::zero(dt);
  const auto z0 = m.random_state(rng, FieldShape::Bump);
  const auto both = simulate_linear(sim, z0, u, zero, T);
  const auto state_only = simulate_linear(sim, z0, zero, zero, T);
  const auto input_only = simulate_linear(sim, m.zero_state(), u, zero, T);
  const auto via_u2 = simulate_linear(sim, m.zero_state(), zero, u, T);
  for (std::size_t j = 0; j < both.size(); ++j) {
    auto sum = state_only.states[j];
    sum += input_only.states[j];
    sum -= both.states[j];
    CHECK(m.x_norm(sum) <= 1e-12 * (1.0 + both.x_norms[j]));
    CHECK(via_u2.x_norms[j] == doctest::Approx(input_only.x_norms[j]));
  }
  // Inputs act at the left endpoint: u_0 reaches z_1.
  CHECK(input_only.x_norms[0] == 0.0);
  CHECK(input_only.x_norms[1] > 0.0);
}

TEST_CASE("shifted simulation equals the weighted unshifted one") {
  const double dt = 1e-3, T = 0.5, w = 2.0;
  const BurgersH1 m(32);
  const LinearSim<BurgersH1> sim(m, dt);
  const auto zero = InputSignal<RealGrid>::zero(dt);
  const auto z0 = m.eigenmode(2, 1.0);
  const auto plain = simulate_linear(sim, z0, zero, zero, T);
  const auto shifted = simulate_shifted(sim, w, z0, zero, zero, T);
  const double lam = -oracle::lap_mag(32, 2);
  for (std::size_t j = 0; j < plain.size(); j += 25) {
    const double ratio = std::pow((1.0 - dt * lam) / (1.0 - dt * (lam + w)), static_cast<double>(j));
    CHECK(shifted.x_norms[j] == doctest::Approx(plain.x_norms[j] * ratio).epsilon(1e-10));
  }
  CHECK_THROWS_AS(simulate_shifted(sim, 100.0, z0, zero, zero, T), std::invalid_argument);
  CHECK_THROWS_AS(simulate_shifted(sim, -1.0, z0, zero, zero, T), std::invalid_argument);
}

TEST_CASE("signal validation") {
  const BurgersH1 m(16);
  const LinearSim<BurgersH1> sim(m, 1e-2);
  const auto zero = InputSignal<RealGrid>::zero(1e-2);
  const auto short_u = InputSignal<RealGrid>::separable(m.zero_input(), 5, 1e-2, [](double) { return 1.0; });
  CHECK_THROWS_AS(simulate_linear(sim, m.zero_state(), short_u, zero, 1.0), std::invalid_argument);
  const auto wrong_dt = InputSignal<RealGrid>::separable(m.zero_input(), 300, 5e-3, [](double) { return 1.0; });
  CHECK_THROWS_AS(simulate_linear(sim, m.zero_state(), wrong_dt, zero, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate_linear(sim, RealGrid(8), zero, zero, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LinearSim<BurgersH1>(m, 0.0), std::invalid_argument);
}

TEST_CASE("semilinear run: small data decays, large data is flagged") {
  const double dt = 1e-3;
  const BurgersH1 m(64);
  const auto zero = InputSignal<RealGrid>::zero(dt);
  const auto small = simulate_semilinear(m, m.eigenmode(1, 0.1), zero, 1.0, dt);
  CHECK_FALSE(small.blowup_step.has_value());
  CHECK(small.x_norms.back() < small.x_norms.front());

  // The wave nonlinearity phi^2 grows without bound for large data of one sign.
  const Wave w(32);
  auto z0 = w.zero_state();
  z0.phi = RealGrid::sample(32, [](double x) { return 400.0 * x * (1.0 - x); });
  const auto big = simulate_semilinear(w, z0, InputSignal<RealGrid>::zero(dt), 5.0, dt);
  REQUIRE(big.blowup_step.has_value());
  CHECK(big.size() == *big.blowup_step + 1);
}

TEST_CASE("well-posedness constants are finite and at least the trivial bound") {
  const BurgersH1 m(32);
  const LinearSim<BurgersH1> sim(m, 2e-3);
  const auto c = wellposedness_constants(sim, 8, Rng(3), 1.0);
  CHECK(c.k1 >= 0.99);  // state-only members have x(0) = z0
  CHECK(std::isfinite(c.k1));
  CHECK(c.k2 > 0.0);
  CHECK(std::isfinite(c.k2));
  const auto c2 = wellposedness_constants(sim, 8, Rng(3), 1.0, Exec::serial());
  CHECK(c.k1 == c2.k1);
  CHECK(c.k2 == c2.k2);
}
