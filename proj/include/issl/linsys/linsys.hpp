#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "issl/core/input_signal.hpp"
#include "issl/core/parallel.hpp"
#include "issl/models/model.hpp"

namespace issl {

enum class Scheme { ImplicitEuler, CrankNicolson };

/// States z_j at t_j = j dt with their X-norms and output norms ||C z_j||_Y.
/// A semilinear run that escapes is truncated at blowup_step.
template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> x_norms;
  std::vector<double> y_norms;
  std::optional<std::size_t> blowup_step;

  std::size_t size() const { return states.size(); }
};

template <SystemModel M>
struct LinearSim {
  const M& model;
  double dt;
  Scheme scheme = Scheme::ImplicitEuler;

  LinearSim(const M& m, double step, Scheme s = Scheme::ImplicitEuler) : model(m), dt(step), scheme(s) {
    if (!(dt > 0.0)) throw std::invalid_argument("LinearSim: dt must be positive");
  }
};

namespace detail {

template <class U>
void check_signal(const InputSignal<U>& u, double dt, std::size_t steps, std::size_t n, const char* what) {
  if (u.is_zero()) return;
  if (std::abs(u.dt - dt) > 1e-12 * dt) throw std::invalid_argument(std::string(what) + ": input dt differs from the step");
  if (u.count() < steps + 1) throw std::invalid_argument(std::string(what) + ": input does not cover [0, t_final]");
  if (u.samples.front().size() != n) throw std::invalid_argument(std::string(what) + ": input grid differs from model");
}

template <SystemModel M>
void record(Trajectory<typename M::State>& traj, const M& m, double t, typename M::State z) {
  traj.times.push_back(t);
  traj.x_norms.push_back(m.x_norm(z));
  traj.y_norms.push_back(m.y_norm(m.observe(z)));
  traj.states.push_back(std::move(z));
}

/// One step z -> z_next with explicit forcing f (already injected into X).
template <SystemModel M>
typename M::State step(const M& m, Scheme scheme, double dt, double shift, const typename M::State& z,
                       const typename M::State& f) {
  auto rhs = z;
  if (scheme == Scheme::CrankNicolson) {
    rhs.axpy(0.5 * dt, m.generator(z));
    if (shift != 0.0) rhs.axpy(0.5 * dt * shift, z);
    rhs.axpy(dt, f);
    return m.resolvent(rhs, 0.5 * dt, shift);
  }
  rhs.axpy(dt, f);
  return m.resolvent(rhs, dt, shift);
}

}  // namespace detail

/// Linear system with A replaced by A + omega I; the inputs are expected to
/// carry the e^{omega t} factor already. Inputs enter at the left endpoint of
/// each step. With omega = 0 this is simulate_linear.
template <SystemModel M>
Trajectory<typename M::State> simulate_shifted(const LinearSim<M>& sim, double omega, const typename M::State& z0,
                                               const InputSignal<typename M::Input>& u1,
                                               const InputSignal<typename M::Input>& u2, double t_final) {
  const M& m = sim.model;
  if (omega < 0.0 || (omega > 0.0 && omega >= m.decay_rate()))
    throw std::invalid_argument("simulate_shifted: omega must lie in [0, decay rate)");
  if (z0.size() != m.size()) throw std::invalid_argument("simulate_shifted: z0 grid differs from model");
  const std::size_t steps = steps_to(t_final, sim.dt);
  detail::check_signal(u1, sim.dt, steps, m.size(), "simulate_shifted");
  detail::check_signal(u2, sim.dt, steps, m.size(), "simulate_shifted");

  Trajectory<typename M::State> traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  detail::record(traj, m, 0.0, z0);
  for (std::size_t j = 0; j < steps; ++j) {
    auto f = m.zero_state();
    if (!u1.is_zero()) f += m.inject(u1.samples[j]);
    if (!u2.is_zero()) f += m.inject(u2.samples[j]);
    auto next = detail::step(m, sim.scheme, sim.dt, omega, traj.states.back(), f);
    if (!next.all_finite()) throw std::runtime_error("simulate_shifted: solver produced non-finite values");
    detail::record(traj, m, static_cast<double>(j + 1) * sim.dt, std::move(next));
  }
  return traj;
}

/// z_{j+1} = (I - dt A)^{-1} (z_j + dt (B1 u1_j + B2 u2_j)) for implicit Euler,
/// trapezoidal in A for Crank-Nicolson. The input map is the run with z0 = 0,
/// the output map the run with u1 = u2 = 0.
template <SystemModel M>
Trajectory<typename M::State> simulate_linear(const LinearSim<M>& sim, const typename M::State& z0,
                                              const InputSignal<typename M::Input>& u1,
                                              const InputSignal<typename M::Input>& u2, double t_final) {
  return simulate_shifted(sim, 0.0, z0, u1, u2, t_final);
}

/// Closed loop with N treated explicitly (linearly implicit Euler):
///   z_{j+1} = (I - dt A)^{-1} (z_j + dt (B1 u1_j + B2 N(z_j, C z_j))).
/// Escape beyond 1e6 times the data scale, or a non-finite state, ends the
/// run and is recorded in blowup_step.
template <SystemModel M>
Trajectory<typename M::State> simulate_semilinear(const M& m, const typename M::State& z0,
                                                  const InputSignal<typename M::Input>& u1, double t_final,
                                                  double dt, Scheme scheme = Scheme::ImplicitEuler) {
  if (!(dt > 0.0)) throw std::invalid_argument("simulate_semilinear: dt must be positive");
  if (z0.size() != m.size()) throw std::invalid_argument("simulate_semilinear: z0 grid differs from model");
  const std::size_t steps = steps_to(t_final, dt);
  detail::check_signal(u1, dt, steps, m.size(), "simulate_semilinear");

  double scale = m.x_norm(z0);
  for (std::size_t j = 0; j < steps && !u1.is_zero(); ++j) scale = std::max(scale, m.u_norm(u1.samples[j]));
  const double limit = 1e6 * scale;

  Trajectory<typename M::State> traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  detail::record(traj, m, 0.0, z0);
  for (std::size_t j = 0; j < steps; ++j) {
    const auto& z = traj.states.back();
    auto f = m.inject(m.feedback(z, m.observe(z)));
    if (!u1.is_zero()) f += m.inject(u1.samples[j]);
    auto next = detail::step(m, scheme, dt, 0.0, z, f);
    const bool finite = next.all_finite();
    detail::record(traj, m, static_cast<double>(j + 1) * dt, std::move(next));
    if (!finite || !(traj.x_norms.back() <= limit)) {
      traj.blowup_step = j + 1;
      break;
    }
  }
  return traj;
}

struct WellposednessConstants {
  double k1 = 0.0;  // sup ||x(t)||_X / data
  double k2 = 0.0;  // sup ||y||_{L2(0,t;Y)} / data
};

/// Empirical bounds in ||x(t)|| <= k1 (||z0|| + ||u1|| + ||u2||) and the
/// output analogue, over random (z0, u1, u2) of mixed shapes.
template <SystemModel M>
WellposednessConstants wellposedness_constants(const LinearSim<M>& sim, std::size_t ensemble, const Rng& rng,
                                               double t_final = 5.0, Exec exec = {}) {
  const M& m = sim.model;
  if (!(m.decay_rate() > 0.0)) throw std::invalid_argument("wellposedness_constants: generator is not stable");
  const std::size_t count = steps_to(t_final, sim.dt) + 1;
  std::vector<WellposednessConstants> per(ensemble);
  parallel_for(ensemble, exec, [&](std::size_t i) {
    Rng r = rng.split(i);
    const auto shape = shape_by_index(i);
    // Members cycle through state-only, u1-only, u2-only and mixed data.
    const int kind = static_cast<int>(i % 4);
    auto z0 = kind == 0 || kind == 3 ? m.random_state(r, shape) : m.zero_state();
    auto profile_signal = [&](double rate) {
      auto prof = m.random_input(r, shape);
      return InputSignal<typename M::Input>::separable(prof, count, sim.dt,
                                                       [rate](double t) { return std::exp(-rate * t); });
    };
    auto u1 = kind == 1 || kind == 3 ? profile_signal(r.uniform(0.0, 2.0)) : InputSignal<typename M::Input>::zero(sim.dt);
    auto u2 = kind == 2 || kind == 3 ? profile_signal(r.uniform(0.0, 2.0)) : InputSignal<typename M::Input>::zero(sim.dt);
    const auto traj = simulate_linear(sim, z0, u1, u2, t_final);

    const auto n1 = sample_norms(u1, [&](const auto& s) { return m.u_norm(s); });
    const auto n2 = sample_norms(u2, [&](const auto& s) { return m.u_norm(s); });
    const double data = m.x_norm(z0) + weighted_l2_from_norms(n1, sim.dt, 0.0, t_final) +
                        weighted_l2_from_norms(n2, sim.dt, 0.0, t_final);
    if (!(data > 0.0)) return;
    double ymass = 0.0;
    WellposednessConstants c;
    for (std::size_t j = 0; j < traj.size(); ++j) {
      c.k1 = std::max(c.k1, traj.x_norms[j] / data);
      if (j > 0) ymass += sim.dt * traj.y_norms[j - 1] * traj.y_norms[j - 1];
      c.k2 = std::max(c.k2, std::sqrt(ymass) / data);
    }
    per[i] = c;
  });
  WellposednessConstants out;
  for (const auto& c : per) {
    out.k1 = std::max(out.k1, c.k1);
    out.k2 = std::max(out.k2, c.k2);
  }
  return out;
}

}  // namespace issl
