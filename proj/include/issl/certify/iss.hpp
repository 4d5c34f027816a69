#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "issl/certify/bilinear.hpp"
#include "issl/certify/dissipation.hpp"
#include "issl/linsys/linsys.hpp"
#include "issl/picard/picard.hpp"

namespace issl {

// ---------------------------------------------------------------------------
// Lyapunov derivative check

struct LyapunovCheck {
  double worst_margin = std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  double tol = 0.0;
};

/// (V_{j+1} - V_j)/dt <= -rate V_{j+1} + gain ||u_j||^2 + tol at every step, with
/// tol = 10 dt scale^2. The dissipative term sits at the implicit endpoint, where
/// the backward Euler step applies A. Margins are RHS - LHS; a violation is a negative one.
inline LyapunovCheck lyapunov_margins(std::span<const double> V, std::span<const double> unorms, double dt,
                                      double rate, double gain, double scale) {
  LyapunovCheck out;
  out.tol = 10.0 * dt * scale * scale;
  for (std::size_t j = 0; j + 1 < V.size(); ++j) {
    const double u = j < unorms.size() ? unorms[j] : 0.0;
    const double lhs = (V[j + 1] - V[j]) / dt;
    const double rhs = -rate * V[j + 1] + gain * u * u + out.tol;
    const double margin = rhs - lhs;
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < 0.0) ++out.violations;
  }
  if (V.size() < 2) out.worst_margin = out.tol;
  return out;
}

/// d/dt ||z||_X^2 <= -2 nu ||z||_X^2 + (||B1*||^2 / (2 mu)) ||u1||^2 along a
/// sampled trajectory, on the scale max(sup ||z_j||, sup ||u_j||).
template <SystemModel M>
LyapunovCheck lyapunov_derivative_check(const M& m, const Trajectory<typename M::State>& traj,
                                        const InputSignal<typename M::Input>& u1, const DissipationFit& fit) {
  if (traj.size() >= 2 && std::abs(traj.times[1] - traj.times[0] - u1.dt) > 1e-12 * u1.dt && !u1.is_zero())
    throw std::invalid_argument("lyapunov_derivative_check: input dt differs from the trajectory step");
  if (!traj.states.empty() && traj.states.front().size() != m.size())
    throw std::invalid_argument("lyapunov_derivative_check: trajectory grid differs from model");
  const double dt = traj.size() >= 2 ? traj.times[1] - traj.times[0] : (u1.dt > 0.0 ? u1.dt : 1.0);
  std::vector<double> V(traj.size());
  double scale = 0.0;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    V[j] = traj.x_norms[j] * traj.x_norms[j];
    scale = std::max(scale, traj.x_norms[j]);
  }
  const auto un = sample_norms(u1, [&](const auto& s) { return m.u_norm(s); });
  for (double u : un) scale = std::max(scale, u);
  const double b = m.info().b_adjoint_norm;
  return lyapunov_margins(V, un, dt, 2.0 * fit.nu, b * b / (2.0 * fit.mu), scale);
}

// ---------------------------------------------------------------------------
// L^p bounds of the weighted input term

struct LpIssCheck {
  double lhs = 0.0;        // e^{-nu t} ||e^{nu .} u||_{L2(0,t)}
  double rhs_paper = 0.0;  // ((p-2)/p)^{(p-2)/p} ||u||_{Lp(0,t)}
  double rhs_sharp = 0.0;  // discrete Hoelder bound with the exact weight norm
  double lp_norm = 0.0;
  bool paper_bound_holds = true;
};

/// All quantities use the left rectangle rule on [0, t] (samples t_j < t).
/// p = infinity is passed as std::numeric_limits<double>::infinity().
inline LpIssCheck lp_iss_check(std::span<const double> unorms, double dt, double nu, double p, double t) {
  if (!(p >= 2.0)) throw std::invalid_argument("lp_iss_check: p must be >= 2");
  if (!(nu > 0.0)) throw std::invalid_argument("lp_iss_check: nu must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("lp_iss_check: dt must be positive");
  LpIssCheck r;
  if (unorms.empty()) return r;
  const std::size_t m = std::min(samples_before(t, dt), unorms.size());
  const bool inf = std::isinf(p);

  double lp = 0.0;
  for (std::size_t j = 0; j < m; ++j) lp = inf ? std::max(lp, unorms[j]) : lp + dt * std::pow(unorms[j], p);
  r.lp_norm = inf ? lp : std::pow(lp, 1.0 / p);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += dt * std::exp(2.0 * nu * (j * dt - t)) * unorms[j] * unorms[j];
  r.lhs = std::sqrt(acc);

  const double paper_factor = (p == 2.0 || inf) ? 1.0 : std::pow((p - 2.0) / p, (p - 2.0) / p);
  r.rhs_paper = paper_factor * r.lp_norm;

  double sharp_factor = 0.0;
  if (m > 0) {
    if (p == 2.0) {
      sharp_factor = std::exp(nu * ((m - 1) * dt - t));
    } else {
      const double q = inf ? 1.0 : p / (p - 2.0);
      double wsum = 0.0;
      for (std::size_t j = 0; j < m; ++j) wsum += dt * std::exp(2.0 * nu * q * (j * dt - t));
      sharp_factor = std::pow(wsum, 1.0 / (2.0 * q));
    }
  }
  r.rhs_sharp = sharp_factor * r.lp_norm;
  r.paper_bound_holds = r.lhs <= r.rhs_paper;
  return r;
}

template <class U, class NormFn>
LpIssCheck lp_iss_check(const InputSignal<U>& u, NormFn&& unorm, double nu, double p, double t) {
  const auto un = sample_norms(u, unorm);
  return lp_iss_check(un, u.dt > 0.0 ? u.dt : 1.0, nu, p, t);
}

// ---------------------------------------------------------------------------
// Wave modified energy along a trajectory

struct WaveEnergyEntry {
  double eps_energy = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double sampled_lower = 0.0;  // min E / ||z||^2 over the equivalence sample
  bool equivalent = false;
  double d1 = 0.0;             // with dt tolerance
  double d1_strict = 0.0;      // without tolerance
  double d2 = 0.0;
};

struct WaveEnergyFit {
  bool valid = false;  // some eps gave norm equivalence
  double eps_energy = 0.0;
  double d1 = 0.0;
  double d1_strict = 0.0;
  double d2 = 0.0;
  std::pair<double, double> equivalence_consts{0.0, 0.0};
  std::vector<WaveEnergyEntry> entries;
};

struct WaveEnergyOptions {
  double mu = 0.25;              // Young parameter fixing the reference d2 = 1/(4 mu)
  std::size_t equivalence_samples = 200;
  std::uint64_t seed = 0x5eed;
};

/// Fits (1/2) dE_eps/dt <= -d1 E_eps + d2 ||u1||^2 on the discrete derivative
/// (E_{j+1} - E_j) / (2 dt). d1 is the largest value compatible with
/// d2 = 1/(4 mu) at every step (tolerance 10 dt max E); d2 is then lowered to
/// the smallest value still sufficient. The reported eps maximizes d1_strict.
template <SystemModel M>
WaveEnergyFit wave_energy_fit(const M& m, const Trajectory<typename M::State>& traj,
                              const InputSignal<typename M::Input>& u1, const std::vector<double>& eps_grid,
                              const WaveEnergyOptions& opts = {}) {
  if (m.info().structure != Structure::DampedWave) throw std::invalid_argument("wave_energy_fit: wave model required");
  if (!(opts.mu > 0.0)) throw std::invalid_argument("wave_energy_fit: mu must be positive");
  const double dt = traj.size() >= 2 ? traj.times[1] - traj.times[0] : (u1.dt > 0.0 ? u1.dt : 1.0);
  const auto un = sample_norms(u1, [&](const auto& s) { return m.u_norm(s); });
  const double d2_ref = 1.0 / (4.0 * opts.mu);

  WaveEnergyFit fit;
  for (double eps : eps_grid) {
    WaveEnergyEntry e;
    e.eps_energy = eps;
    std::tie(e.lower, e.upper) = wave_equivalence(m.size(), eps);
    Rng rng(opts.seed);
    e.sampled_lower = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < opts.equivalence_samples; ++i) {
      auto z = m.random_state(rng, shape_by_index(i));
      const double zz = m.x_norm(z) * m.x_norm(z);
      if (zz > 0.0) e.sampled_lower = std::min(e.sampled_lower, wave_energy(z, eps) / zz);
    }
    e.equivalent = e.lower > 0.0 && e.sampled_lower >= e.lower * (1.0 - 1e-12);
    if (e.equivalent) {
      std::vector<double> E(traj.size());
      double maxE = 0.0;
      for (std::size_t j = 0; j < traj.size(); ++j) {
        E[j] = wave_energy(traj.states[j], eps);
        maxE = std::max(maxE, E[j]);
      }
      const double tol = 10.0 * dt * maxE;
      double d1 = std::numeric_limits<double>::infinity(), d1s = d1;
      for (std::size_t j = 0; j + 1 < E.size(); ++j) {
        if (!(E[j] > 0.0)) continue;
        const double D = (E[j + 1] - E[j]) / (2.0 * dt);
        const double u2 = j < un.size() ? un[j] * un[j] : 0.0;
        d1 = std::min(d1, (tol + d2_ref * u2 - D) / E[j]);
        d1s = std::min(d1s, (d2_ref * u2 - D) / E[j]);
      }
      e.d1 = d1;
      e.d1_strict = d1s;
      double d2 = 0.0;
      if (std::isfinite(d1)) {
        for (std::size_t j = 0; j + 1 < E.size(); ++j) {
          const double u2 = j < un.size() ? un[j] * un[j] : 0.0;
          if (!(u2 > 0.0)) continue;
          const double D = (E[j + 1] - E[j]) / (2.0 * dt);
          d2 = std::max(d2, (D + d1 * E[j] - tol) / u2);
        }
      }
      e.d2 = d2;
      if (!fit.valid || e.d1_strict > fit.d1_strict) {
        fit.valid = true;
        fit.eps_energy = eps;
        fit.d1 = e.d1;
        fit.d1_strict = e.d1_strict;
        fit.d2 = e.d2;
        fit.equivalence_consts = {e.lower, e.upper};
      }
    }
    fit.entries.push_back(e);
  }
  return fit;
}

// ---------------------------------------------------------------------------
// ISS certificate

struct IssRun {
  std::size_t member = 0;
  std::uint64_t seed = 0;         // stream id of the member's data
  double data_scale = 0.0;        // ||z0|| + ||u1||_{L2(0,T)}
  double z0_norm = 0.0;
  bool blowup = false;
  double worst_margin = 0.0;      // relative to data_scale
  double lyapunov_margin = 0.0;
  std::size_t lyapunov_violations = 0;
  std::vector<double> t, lhs, rhs;
};

struct IssCertificate {
  std::string formula;            // which constants were used
  double nu = 0.0;
  double c = 0.0;                 // proof-formula input gain
  double c0 = 1.0;                // state gain (1 except for the wave energy)
  double c_empirical = 0.0;       // smallest c with zero violations at this nu
  double mu = 0.0;
  double delta = 0.0;
  double K = 0.0;
  double epsilon = 0.0;
  double omega = 0.0;
  std::size_t ensemble_size = 0;
  std::size_t halvings = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tolerance = 0.0;
  bool violated = false;
  std::size_t blowups = 0;
  std::vector<std::uint64_t> blowup_seeds;
  double lyapunov_worst = std::numeric_limits<double>::infinity();
  std::size_t lyapunov_violations = 0;
  bool feasible = true;
  std::vector<IssRun> runs;
};

struct IssOptions {
  std::optional<double> nu_override;
  std::optional<double> c_override;
  std::optional<double> K;                   // estimated when absent
  std::size_t k_samples = 2000;
  std::vector<double> mu_grid = default_mu_grid();
  std::vector<double> wave_eps_grid = default_wave_eps_grid();
  double input_scale = 1.0;                  // multiplies every input after drawing
  double state_amplitude = 10.0;             // global case: max ||z0||_X
  double input_amplitude = 10.0;             // global case: max ||u1||_{L2(0,T;U)}
  std::size_t max_halvings = 20;
  bool keep_runs = true;
  Exec exec{};
};

namespace detail {

struct IssConstants {
  std::string formula;
  double nu = 0.0, c = 0.0, c0 = 1.0, mu = 0.0;
  double lyap_rate = 0.0, lyap_gain = 0.0;  // V' <= -rate V + gain ||u||^2
  double wave_eps = 0.0;                    // V = E_eps for the wave, ||z||^2 otherwise
  bool feasible = false;
};

template <SystemModel M>
IssConstants iss_constants(const M& m, double dt, double delta, double K, const IssOptions& o) {
  const auto& info = m.info();
  const double b = info.b_adjoint_norm;
  IssConstants k;
  if (!info.feedback) {
    if (info.structure == Structure::DampedWave) {
      // (1/2) E0' = -||psi||^2 + <u, psi> <= ||u||^2 / 4.
      k.formula = "linear_energy";
      k.nu = 0.0;
      k.mu = 0.5;
      k.c = std::sqrt(0.5);
    } else {
      k.formula = "linear";
      const double wa = std::abs(m.w_A());
      k.nu = wa * (1.0 - 5.0 * dt);
      k.mu = wa - k.nu;
      k.c = b / std::sqrt(2.0 * k.mu);
    }
    k.lyap_rate = 2.0 * k.nu;
    k.lyap_gain = b * b / (2.0 * k.mu);
    k.feasible = true;
  } else if (info.structure == Structure::DampedWave) {
    const auto r = best_wave_rate(m.size(), K, delta, o.wave_eps_grid, o.mu_grid);
    k.formula = "wave_energy";
    k.feasible = r.feasible;
    k.nu = r.d1;
    k.mu = r.mu;
    k.c = r.c;
    k.c0 = r.c0;
    k.wave_eps = r.eps_energy;
    k.lyap_rate = 2.0 * r.d1;
    k.lyap_gain = r.mu > 0.0 ? 1.0 / (2.0 * r.mu) : 0.0;
  } else {
    const auto fit = best_dissipation_fit(m, delta, K, o.mu_grid);
    k.formula = info.structure == Structure::SelfAdjoint ? "self_adjoint" : "skew";
    if (fit.global) k.formula += "_global";
    k.feasible = fit.feasible;
    k.nu = fit.nu;
    k.mu = fit.mu;
    k.c = fit.c;
    k.lyap_rate = 2.0 * fit.nu;
    k.lyap_gain = fit.mu > 0.0 ? b * b / (2.0 * fit.mu) : 0.0;
  }
  if (o.nu_override) {
    k.nu = *o.nu_override;
    k.lyap_rate = 2.0 * k.nu;
    k.formula += "+nu_override";
    k.feasible = true;
  }
  if (o.c_override) {
    k.c = *o.c_override;
    k.formula += "+c_override";
  }
  return k;
}

}  // namespace detail

/// Local L2_omega-ISS certificate. Draws `ensemble` data pairs with
/// ||z0||_X + ||u1||_{L2_omega} <= epsilon (mixed shapes and time profiles),
/// runs the closed loop, sets (nu, c) from the proof formulas with delta the
/// observed sup ||z||, and records the worst relative margin of
///   ||z(t)|| <= c0 ||z0|| e^{-nu t} + c e^{-nu t} ||e^{nu .} u1||_{L2(0,t)}.
/// If no Young parameter is feasible at the observed delta, epsilon is halved.
/// epsilon = infinity is the global case (only for globally dissipative N):
/// amplitudes then range up to state_amplitude and input_amplitude.
template <SystemModel M>
IssCertificate certify_iss(const M& m, double omega, double epsilon, std::size_t ensemble, double t_final, double dt,
                           const Rng& rng, const IssOptions& o = {}) {
  using State = typename M::State;
  using Input = typename M::Input;
  const auto& info = m.info();
  if (ensemble < 1) throw std::invalid_argument("certify_iss: empty ensemble");
  if (!(omega > 0.0)) throw std::invalid_argument("certify_iss: omega must be positive");
  if (!(epsilon > 0.0)) throw std::invalid_argument("certify_iss: epsilon must be positive");
  const bool global = std::isinf(epsilon);
  if (global && !info.global_dissipation)
    throw std::invalid_argument("certify_iss: epsilon = inf needs a globally dissipative feedback");
  const double weight = std::min(omega, 0.999 * m.decay_rate());

  const double K = o.K ? *o.K
                       : (info.feedback ? estimate_bilinear_K(m, info.p, o.k_samples, rng.split(0xb111), o.exec)
                                        : 0.0);

  std::vector<DataPair<M>> pairs(ensemble);
  parallel_for(ensemble, o.exec, [&](std::size_t i) { pairs[i] = make_data_pair(m, i, rng, weight, t_final, dt); });

  IssCertificate cert;
  cert.omega = omega;
  cert.K = K;
  cert.ensemble_size = ensemble;
  cert.tolerance = 10.0 * dt;

  struct Member {
    State z0;
    InputSignal<Input> u1;
    Trajectory<State> traj;
    std::vector<double> un;
    double scale = 0.0;
  };
  std::vector<Member> runs(ensemble);

  double eps = epsilon;
  detail::IssConstants k;
  for (std::size_t halving = 0;; ++halving) {
    parallel_for(ensemble, o.exec, [&](std::size_t i) {
      Rng r = rng.split(1'000'000 + i);
      auto& mem = runs[i];
      if (global) {
        const double a = r.uniform(0.0, 1.0), b = r.uniform(0.0, 1.0);
        const auto& p = pairs[i];
        mem.z0 = p.z0;
        mem.z0 *= o.state_amplitude * a;
        mem.u1 = p.u1;
        if (!mem.u1.is_zero()) {
          const auto w = sample_norms(mem.u1, [&](const auto& s) { return m.u_norm(s); });
          const double l2 = weighted_l2_from_norms(w, dt, 0.0, t_final);
          if (l2 > 0.0) mem.u1 *= o.input_amplitude * b / l2;
        }
      } else {
        std::tie(mem.z0, mem.u1) = scale_pair(pairs[i], eps * (0.25 + 0.75 * r.uniform()));
      }
      if (o.input_scale != 1.0) mem.u1 *= o.input_scale;
      mem.traj = simulate_semilinear(m, mem.z0, mem.u1, t_final, dt);
      mem.un = sample_norms(mem.u1, [&](const auto& s) { return m.u_norm(s); });
      mem.scale = m.x_norm(mem.z0) + weighted_l2_from_norms(mem.un, dt, 0.0, t_final);
    });

    double delta = 0.0;
    for (const auto& mem : runs)
      for (double x : mem.traj.x_norms)
        if (std::isfinite(x)) delta = std::max(delta, x);
    cert.delta = delta;
    k = detail::iss_constants(m, dt, std::max(delta, 1e-300), K, o);
    cert.halvings = halving;
    if (k.feasible || global || halving >= o.max_halvings) break;
    eps *= 0.5;
  }
  cert.epsilon = eps;
  cert.formula = k.formula;
  cert.feasible = k.feasible;
  cert.nu = k.nu;
  cert.c = k.c;
  cert.c0 = k.c0;
  cert.mu = k.mu;

  std::vector<IssRun> out(ensemble);
  std::vector<double> c_emp(ensemble, 0.0);
  parallel_for(ensemble, o.exec, [&](std::size_t i) {
    const auto& mem = runs[i];
    IssRun& run = out[i];
    run.member = i;
    run.seed = i;
    run.z0_norm = m.x_norm(mem.z0);
    run.data_scale = mem.scale;
    run.blowup = mem.traj.blowup_step.has_value();
    const auto W = weighted_l2_running(mem.un, dt, k.nu, mem.traj.size());
    const double s = mem.scale > 0.0 ? mem.scale : 1.0;
    run.worst_margin = std::numeric_limits<double>::infinity();
    double cmax = 0.0;
    for (std::size_t j = 0; j < mem.traj.size(); ++j) {
      const double t = mem.traj.times[j];
      const double decay = std::exp(-k.nu * t);
      const double lhs = mem.traj.x_norms[j];
      const double rhs = k.c0 * run.z0_norm * decay + k.c * decay * W[j];
      run.worst_margin = std::min(run.worst_margin, std::isfinite(lhs) ? (rhs - lhs) / s : -std::numeric_limits<double>::infinity());
      if (W[j] > 0.0 && std::isfinite(lhs)) cmax = std::max(cmax, (lhs - k.c0 * run.z0_norm * decay) / (decay * W[j]));
      if (o.keep_runs) {
        run.t.push_back(t);
        run.lhs.push_back(lhs);
        run.rhs.push_back(rhs);
      }
    }
    c_emp[i] = cmax;

    std::vector<double> V(mem.traj.size());
    double scale = 0.0;
    for (std::size_t j = 0; j < mem.traj.size(); ++j) {
      V[j] = mem.traj.x_norms[j] * mem.traj.x_norms[j];
      if constexpr (requires(const State& z) { z.phi; })
        if (k.wave_eps > 0.0) V[j] = wave_energy(mem.traj.states[j], k.wave_eps);
      scale = std::max(scale, mem.traj.x_norms[j]);
    }
    for (double u : mem.un) scale = std::max(scale, u);
    const auto ly = lyapunov_margins(V, mem.un, dt, k.lyap_rate, k.lyap_gain, scale);
    run.lyapunov_margin = ly.worst_margin;
    run.lyapunov_violations = ly.violations;
  });

  for (std::size_t i = 0; i < ensemble; ++i) {
    const auto& run = out[i];
    cert.worst_margin = std::min(cert.worst_margin, run.worst_margin);
    cert.c_empirical = std::max(cert.c_empirical, c_emp[i]);
    cert.lyapunov_worst = std::min(cert.lyapunov_worst, run.lyapunov_margin);
    cert.lyapunov_violations += run.lyapunov_violations;
    if (run.blowup) {
      ++cert.blowups;
      cert.blowup_seeds.push_back(run.seed);
    }
  }
  cert.violated = cert.worst_margin < -cert.tolerance || cert.blowups > 0 || !cert.feasible;
  if (o.keep_runs) cert.runs = std::move(out);
  return cert;
}

}  // namespace issl
