#include <doctest.h>

#include <cmath>
#include <limits>

#include "issl/certify/iss.hpp"
#include "issl/models/burgers.hpp"
#include "issl/models/schrodinger.hpp"
#include "issl/models/wave.hpp"
#include "oracles.hpp"

using namespace issl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("bilinear constant of the zero feedback is zero") {
  const Linearized<BurgersH1> m(BurgersH1(32));
  CHECK(estimate_bilinear_K(m, 0.5, 200, Rng(1)) == 0.0);
}

TEST_CASE("bilinear ratio is invariant under (z, y) -> (a z, b y)") {
  const BurgersH1 h1(48);
  const BurgersL2 l2(48);
  const Schrodinger s(48);
  const Wave w(48);
  Rng rng(5);
  auto check = [&](const auto& m) {
    for (std::size_t i = 0; i < 50; ++i) {
      auto [z, y] = random_pair(m, i, rng);
      const double r = bilinear_ratio(m, z, y, m.info().p);
      const double a = std::pow(10.0, rng.uniform(-3, 3)) * (i % 2 ? -1.0 : 1.0);
      const double b = std::pow(10.0, rng.uniform(-3, 3)) * (i % 3 ? 1.0 : -1.0);
      z *= a;
      y *= b;
      CHECK(bilinear_ratio(m, z, y, m.info().p) == doctest::Approx(r).epsilon(1e-10));
    }
  };
  check(h1);
  check(l2);
  check(s);
  check(w);
}

TEST_CASE("sup over z is attained and dominates sampled ratios") {
  const BurgersH1 m(32);
  Rng rng(2);
  for (std::size_t i = 0; i < 10; ++i) {
    auto [z, y] = random_pair(m, i, rng);
    const double p = 0.5;
    CHECK(sup_ratio_for_y(m, y, z, p) >= bilinear_ratio(m, z, y, p) * (1.0 - 1e-12));
  }
}

TEST_CASE("fitted K has no violations on a disjoint sample") {
  const BurgersH1 m(32);
  const double K = estimate_bilinear_K(m, 0.5, 500, Rng(10));
  CHECK(K > 0.0);
  CHECK(count_bound_violations(m, 0.5, K, 2000, Rng(11)) == 0);
}

TEST_CASE("burgers_l2 estimate stabilizes as the sample grows") {
  const BurgersL2 m(64);
  const double k4 = estimate_bilinear_K(m, 0.75, 10000, Rng(100));
  const double k5 = estimate_bilinear_K(m, 0.75, 100000, Rng(100));
  CHECK(k5 >= k4 * (1.0 - 1e-12));
  CHECK(std::abs(k5 - k4) <= 0.05 * k5);
}

TEST_CASE("dissipation fit: zero feedback is feasible with rate w_A") {
  const Linearized<BurgersH1> m(BurgersH1(32));
  const auto fit = fit_dissipation(m, 0.1, 0.2, 0.0, 100, Rng(1));
  CHECK(fit.m1 == 0.0);
  CHECK(fit.m2 == 0.0);
  CHECK(fit.feasible);
  CHECK(fit.dissipation_rate == doctest::Approx(m.w_A()));
  CHECK(fit.violations == 0);
}

TEST_CASE("dissipation fit: burgers_l2 holds globally with m1 = m2 = 0") {
  const BurgersL2 m(64);
  const auto fit = fit_dissipation(m, 1.0, 0.2, 1.0, 2000, Rng(2));
  CHECK(fit.global);
  CHECK(fit.m1 == 0.0);
  CHECK(fit.m2 == 0.0);
  CHECK(fit.violations == 0);
  CHECK(fit.checked == 2000);
}

TEST_CASE("dissipation fit: burgers_h1 closed-form constants at delta = 0.01") {
  const BurgersH1 m(64);
  const double K = estimate_bilinear_K(m, 0.5, 2000, Rng(3));
  const double mu = 0.2;
  const auto fit = fit_dissipation(m, 0.01, mu, K, 10000, Rng(4));
  CHECK(fit.m1 == doctest::Approx(std::pow(mu, 2.0 / 1.5)));
  CHECK(fit.m2 == doctest::Approx(0.25 * std::pow(K / mu, 4.0) * std::pow(0.01, 4.0)));
  CHECK(fit.violations == 0);
  CHECK(fit.feasible);
  CHECK(-fit.nu == doctest::Approx((1.0 - fit.m1 - mu) * m.w_A() + fit.m2));
  CHECK(fit.c == doctest::Approx(std::sqrt(1.0 / (2.0 * mu))));
}

TEST_CASE("dissipation fit: skew case uses m1 = 0, m2 = K delta") {
  const Schrodinger m(32);
  const auto fit = dissipation_constants(m, 0.1, 0.2, 0.5);
  CHECK(fit.m1 == 0.0);
  CHECK(fit.m2 == doctest::Approx(0.05));
  CHECK(fit.nu == doctest::Approx(1.0 - 0.2 - 0.05));
  const auto sampled = fit_dissipation(m, 0.1, 0.2, estimate_bilinear_K(m, 0.5, 500, Rng(1)), 2000, Rng(2));
  CHECK(sampled.violations == 0);
}

TEST_CASE("dissipation fit: feasibility is monotone in delta; wave is rejected") {
  const BurgersH1 m(32);
  const double K = 0.2;
  for (double mu : {0.05, 0.2, 0.5}) {
    bool prev = true;
    for (double delta = 1e-3; delta < 1e3; delta *= 1.5) {
      const bool f = dissipation_constants(m, delta, mu, K).feasible;
      CHECK((prev || !f));  // once infeasible, larger delta never becomes feasible
      prev = f;
    }
  }
  CHECK_THROWS_AS(dissipation_constants(Wave(16), 0.1, 0.2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dissipation_constants(m, 0.0, 0.2, 1.0), std::invalid_argument);
}

TEST_CASE("lyapunov check: zero trajectory and linear eigenmode decay") {
  const double dt = 1e-3;
  const Linearized<BurgersH1> m(BurgersH1(64));
  const auto zero = InputSignal<RealGrid>::zero(dt);
  const LinearSim<Linearized<BurgersH1>> sim(m, dt);
  DissipationFit fit = dissipation_constants(m, 1.0, 0.1, 0.0);

  const auto flat = simulate_linear(sim, m.zero_state(), zero, zero, 0.1);
  const auto c0 = lyapunov_derivative_check(m, flat, zero, fit);
  CHECK(c0.violations == 0);
  CHECK(c0.worst_margin == c0.tol);

  // Exact recurrence: V_j - V_{j+1} = ((1 - dt w)^2 - 1) V_{j+1} >= 2 nu dt V_{j+1}.
  const auto decay = simulate_linear(sim, m.eigenmode(1, 1.0), zero, zero, 0.5);
  const auto c1 = lyapunov_derivative_check(m, decay, zero, fit);
  CHECK(c1.violations == 0);
  CHECK(c1.worst_margin >= 0.0);
}

TEST_CASE("lyapunov check: closed-loop burgers_h1 small data") {
  const double dt = 1e-3, T = 2.0;
  const BurgersH1 m(64);
  const double K = estimate_bilinear_K(m, 0.5, 1000, Rng(1));
  Rng rng(2);
  for (std::size_t i = 0; i < 8; ++i) {
    auto [z0, u1] = scale_pair(make_data_pair(m, i, rng, 1.0, T, dt), 0.05);
    const auto traj = simulate_semilinear(m, z0, u1, T, dt);
    double delta = 0.0;
    for (double x : traj.x_norms) delta = std::max(delta, x);
    const auto fit = best_dissipation_fit(m, delta, K, default_mu_grid());
    REQUIRE(fit.feasible);
    CHECK(lyapunov_derivative_check(m, traj, u1, fit).violations == 0);
  }
}

TEST_CASE("lp check: p = 2 bound holds exactly") {
  Rng rng(3);
  for (int s = 0; s < 1000; ++s) {
    const std::size_t len = 2 + static_cast<std::size_t>(rng.uniform_int(0, 200));
    std::vector<double> un(len);
    for (auto& v : un) v = std::abs(rng.normal()) * std::pow(10.0, rng.uniform(-2, 2));
    const double dt = rng.uniform(1e-3, 1e-1), nu = rng.uniform(0.01, 5.0);
    const double t = dt * static_cast<double>(rng.uniform_int(0, static_cast<std::int64_t>(len - 1)));
    const auto r = lp_iss_check(un, dt, nu, 2.0, t);
    double l2 = 0.0;
    for (std::size_t j = 0; j < samples_before(t, dt); ++j) l2 += dt * un[j] * un[j];
    CHECK(r.rhs_paper == doctest::Approx(std::sqrt(l2)).epsilon(1e-12));
    CHECK(r.lhs <= r.rhs_paper);
    CHECK(r.lhs <= r.rhs_sharp * (1.0 + 1e-12));
  }
}

TEST_CASE("lp check: constant input at p = infinity") {
  const double dt = 1e-4, T = 20.0;
  std::vector<double> un(steps_to(T, dt) + 1, 1.0);
  const auto r = lp_iss_check(un, dt, 1.0, kInf, T);
  CHECK(r.lhs == doctest::Approx(std::sqrt((1.0 - std::exp(-2.0 * T)) / 2.0)).epsilon(1e-3));
  CHECK(r.rhs_paper == 1.0);
  CHECK(r.lhs <= r.rhs_sharp * (1.0 + 1e-12));
  CHECK(r.rhs_sharp == doctest::Approx(r.lhs).epsilon(1e-12));  // Hoelder is tight for constant u
}

TEST_CASE("lp check: sharp bound dominates for every p, zero input, bad p") {
  Rng rng(4);
  for (double p : {2.0, 3.0, 4.0, 8.0, kInf})
    for (int s = 0; s < 100; ++s) {
      std::vector<double> un(101);
      for (auto& v : un) v = std::abs(rng.normal());
      const auto r = lp_iss_check(un, 0.01, rng.uniform(0.1, 3.0), p, rng.uniform(0.0, 1.0));
      CHECK(r.lhs <= r.rhs_sharp * (1.0 + 1e-12));
    }
  std::vector<double> zero(11, 0.0);
  const auto z = lp_iss_check(zero, 0.1, 1.0, 4.0, 1.0);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs_paper == 0.0);
  CHECK(z.rhs_sharp == 0.0);
  CHECK_THROWS_AS(lp_iss_check(zero, 0.1, 1.0, 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(lp_iss_check(zero, 0.1, 0.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("wave energy: eps = 0 is the plain energy, zero trajectory fits d2 = 0") {
  const double dt = 1e-3;
  const Wave m(32);
  const auto zero = InputSignal<RealGrid>::zero(dt);
  const auto flat = simulate_semilinear(m, m.zero_state(), zero, 0.1, dt);
  const auto fit = wave_energy_fit(m, flat, zero, {0.0});
  REQUIRE(fit.valid);
  CHECK(fit.equivalence_consts.first == 1.0);
  CHECK(fit.equivalence_consts.second == 1.0);
  CHECK(fit.d2 == 0.0);
  CHECK(std::isinf(fit.d1));
}

TEST_CASE("wave energy: implicit Euler dissipates E0 for the linear wave") {
  const double dt = 1e-3;
  const Linearized<Wave> m(Wave(32));
  const LinearSim<Linearized<Wave>> sim(m, dt);
  const auto zero = InputSignal<RealGrid>::zero(dt);
  Rng rng(5);
  const auto traj = simulate_linear(sim, m.random_state(rng, FieldShape::RandomSmooth), zero, zero, 2.0);
  for (std::size_t j = 0; j + 1 < traj.size(); ++j)
    CHECK(wave_energy(traj.states[j + 1], 0.0) <= wave_energy(traj.states[j], 0.0));
}

TEST_CASE("wave energy: small closed-loop run has d1 > 0 for some eps") {
  const double dt = 1e-3, T = 5.0;
  const Wave m(64);
  Rng rng(6);
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.05 * i);
  auto [z0, u1] = scale_pair(make_data_pair(m, 2, rng, 0.25, T, dt), 0.05);
  const auto traj = simulate_semilinear(m, z0, u1, T, dt);
  const auto fit = wave_energy_fit(m, traj, u1, grid);
  REQUIRE(fit.valid);
  CHECK(fit.d1_strict > 0.0);
  CHECK(fit.eps_energy > 0.0);  // E0 alone cannot give decay: psi = 0 states do not dissipate
  CHECK(fit.equivalence_consts.first > 0.0);
  for (const auto& e : fit.entries) CHECK(e.equivalent);
}

TEST_CASE("wave proof rate: equivalence constants and positive rate for small delta") {
  const auto [lo, hi] = wave_equivalence(64, 0.5);
  CHECK(lo == doctest::Approx(1.0 - 0.25 / std::sqrt(oracle::lap_mag(64, 1))));
  CHECK(hi == doctest::Approx(1.0 + 0.25 / std::sqrt(oracle::lap_mag(64, 1))));
  const auto r = best_wave_rate(64, 0.2, 1e-3, default_wave_eps_grid(), default_mu_grid());
  CHECK(r.feasible);
  CHECK(r.d1 > 0.0);
  CHECK(r.d1 < 0.5);
  const auto big = best_wave_rate(64, 0.2, 100.0, default_wave_eps_grid(), default_mu_grid());
  CHECK_FALSE(big.feasible);
}

TEST_CASE("certify_iss: linear variants pass with nu = |w_A| (1 - 5 dt)") {
  const double dt = 1e-3, T = 2.0;
  IssOptions o;
  o.keep_runs = false;
  auto run = [&](const auto& m) {
    const auto cert = certify_iss(m, 0.5 * m.decay_rate(), 1.0, 12, T, dt, Rng(7), o);
    CHECK_MESSAGE(!cert.violated, m.info().name);
    CHECK(cert.worst_margin >= 0.0);
    CHECK(cert.nu == doctest::Approx(std::abs(m.w_A()) * (1.0 - 5.0 * dt)));
    CHECK(cert.lyapunov_violations == 0);
  };
  run(Linearized<BurgersH1>(BurgersH1(32)));
  run(Linearized<BurgersL2>(BurgersL2(32)));
  run(Linearized<Schrodinger>(Schrodinger(32)));
  run(Linearized<Wave>(Wave(32)));
}

TEST_CASE("certify_iss: pure eigenmode decay with arbitrary c") {
  const double dt = 1e-3;
  const Linearized<BurgersH1> m(BurgersH1(32));
  const auto traj = simulate_semilinear(m, m.eigenmode(1, 1.0), InputSignal<RealGrid>::zero(dt), 1.0, dt);
  const double nu = std::abs(m.w_A()) * (1.0 - 5.0 * dt);
  for (std::size_t j = 0; j < traj.size(); ++j) CHECK(traj.x_norms[j] <= std::exp(-nu * traj.times[j]));
}

TEST_CASE("certify_iss: burgers_l2 global case") {
  IssOptions o;
  o.K = 1.0;
  o.keep_runs = false;
  const auto cert = certify_iss(BurgersL2(64), 1.0, kInf, 12, 2.0, 1e-3, Rng(8), o);
  CHECK_FALSE(cert.violated);
  CHECK(cert.blowups == 0);
  CHECK(cert.delta > 1.0);  // amplitudes up to 10 were exercised
  CHECK_THROWS_AS(certify_iss(BurgersH1(32), 1.0, kInf, 4, 1.0, 1e-3, Rng(1), o), std::invalid_argument);
}

TEST_CASE("certify_iss: doubled inputs re-certify with the same constants") {
  const double dt = 1e-3, T = 2.0;
  const BurgersH1 m(64);
  IssOptions o;
  o.K = estimate_bilinear_K(m, 0.5, 1000, Rng(9));
  o.keep_runs = false;
  const auto base = certify_iss(m, 1.0, 0.02, 12, T, dt, Rng(10), o);
  REQUIRE_FALSE(base.violated);
  o.nu_override = base.nu;
  o.c_override = base.c;
  o.input_scale = 2.0;
  const auto doubled = certify_iss(m, 1.0, 0.02, 12, T, dt, Rng(10), o);
  CHECK_FALSE(doubled.violated);
  CHECK(doubled.nu == base.nu);
  CHECK(doubled.c == base.c);
}

TEST_CASE("certify_iss: empirical c never exceeds the proof c when certified; serial = parallel") {
  const Schrodinger m(32);
  IssOptions o;
  o.K = estimate_bilinear_K(m, 0.5, 500, Rng(1));
  const auto a = certify_iss(m, 0.25, 0.05, 8, 2.0, 1e-3, Rng(2), o);
  o.exec = Exec::serial();
  const auto b = certify_iss(m, 0.25, 0.05, 8, 2.0, 1e-3, Rng(2), o);
  CHECK_FALSE(a.violated);
  CHECK(a.c_empirical <= a.c * (1.0 + 1e-9));
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.c_empirical == b.c_empirical);
  REQUIRE(a.runs.size() == 8);
  CHECK(a.runs[3].lhs == b.runs[3].lhs);
}

TEST_CASE("lyapunov margins on a hand-computed sequence") {
  const std::vector<double> V{1.0, 0.5, 0.5};
  const std::vector<double> u{0.0, 1.0};
  const auto r = lyapunov_margins(V, u, 0.5, 1.0, 0.25, 0.0);
  // Step 0: lhs = -1, rhs = -0.5. Step 1: lhs = 0, rhs = -0.5 + 0.25.
  CHECK(r.worst_margin == doctest::Approx(-0.25));
  CHECK(r.violations == 1);
  CHECK(r.tol == 0.0);
  CHECK(lyapunov_margins(V, u, 0.5, 1.0, 0.25, 1.0).tol == doctest::Approx(5.0));
}
