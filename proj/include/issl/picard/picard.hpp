#pragma once

#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "issl/core/input_signal.hpp"
#include "issl/core/parallel.hpp"
#include "issl/linsys/linsys.hpp"
#include "issl/models/model.hpp"

namespace issl {

struct PicardConfig {
  double omega = 1.0;
  double epsilon = 1.0;
  double tol = 1e-10;
  std::size_t max_iter = 30;
  /// Abort as soon as an iterate leaves S_eps (used by the epsilon search).
  bool stop_on_escape = false;
};

enum class PicardStatus { Converged, Diverged, EscapedBall, MaxIter };

inline const char* to_string(PicardStatus s) {
  switch (s) {
    case PicardStatus::Converged: return "converged";
    case PicardStatus::Diverged: return "diverged";
    case PicardStatus::EscapedBall: return "escaped_ball";
    case PicardStatus::MaxIter: return "max_iter";
  }
  return "?";
}

template <SystemModel M>
struct PicardResult {
  InputSignal<typename M::Input> u2_star;
  Trajectory<typename M::State> trajectory;
  std::size_t iterations = 0;
  /// increments[k] = ||e^{omega .}(u2^{k+1} - u2^k)||_{L2(0,T;U)}.
  std::vector<double> increments;
  /// contraction_ratios[k] = increments[k] / increments[k-1]; entry 0 is NaN.
  std::vector<double> contraction_ratios;
  /// in_ball[k]: ||e^{omega .} u2^k|| <= epsilon.
  std::vector<bool> in_ball;
  PicardStatus status = PicardStatus::MaxIter;
  /// max_j e^{omega t_j} ||z(t_j)||_X / epsilon on the returned trajectory.
  double envelope_k = 0.0;

  bool converged() const { return status == PicardStatus::Converged; }

  /// Largest ratio from iteration `from` on (1-based iteration numbers).
  double max_ratio_from(std::size_t from) const {
    double worst = 0.0;
    for (std::size_t k = 1; k < contraction_ratios.size(); ++k)
      if (k + 1 >= from && std::isfinite(contraction_ratios[k])) worst = std::max(worst, contraction_ratios[k]);
    return worst;
  }
};

/// Per-sample U-norms of a - b (b may be the zero signal).
template <SystemModel M>
std::vector<double> difference_norms(const M& m, const std::vector<typename M::Input>& a,
                                     const InputSignal<typename M::Input>& b, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t j = 0; j < count; ++j) {
    if (b.is_zero()) {
      out[j] = m.u_norm(a[j]);
    } else {
      auto d = a[j];
      d -= b.samples[j];
      out[j] = m.u_norm(d);
    }
  }
  return out;
}

/// Fixed-point iteration u2 -> N(z, C z) where z solves the linear system
/// driven by (z0, u1, u2), started from u2 = 0. Increments are measured in
/// the e^{omega t}-weighted L2(0, T; U) norm. Non-convergence is reported in
/// the status, with every iterate logged.
template <SystemModel M>
PicardResult<M> picard_solve(const M& m, const typename M::State& z0, const InputSignal<typename M::Input>& u1,
                             const PicardConfig& cfg, double t_final, double dt) {
  if (!(cfg.omega > 0.0) || !(cfg.omega < m.decay_rate()))
    throw std::invalid_argument("picard_solve: omega must lie in (0, decay rate)");
  if (!(cfg.tol > 0.0) || cfg.max_iter < 1) throw std::invalid_argument("picard_solve: need tol > 0, max_iter >= 1");
  const auto u1_norms = sample_norms(u1, [&](const auto& s) { return m.u_norm(s); });
  const double data = m.x_norm(z0) + weighted_l2_from_norms(u1_norms, dt, cfg.omega, t_final);
  if (data > cfg.epsilon * (1.0 + 1e-12))
    throw std::invalid_argument("picard_solve: ||z0|| + ||u1||_omega exceeds epsilon");

  const LinearSim<M> sim(m, dt);
  PicardResult<M> res;
  auto u2 = InputSignal<typename M::Input>::zero(dt);
  double u2_weighted = 0.0;
  for (std::size_t k = 0; k < cfg.max_iter; ++k) {
    auto traj = simulate_linear(sim, z0, u1, u2, t_final);
    std::vector<typename M::Input> next;
    next.reserve(traj.size());
    bool finite = true;
    for (const auto& z : traj.states) {
      next.push_back(m.feedback(z, m.observe(z)));
      finite = finite && next.back().all_finite();
    }
    const auto diff = difference_norms(m, next, u2, next.size());
    const double inc = finite ? weighted_l2_from_norms(diff, dt, cfg.omega, t_final) : INFINITY;

    res.iterations = k + 1;
    res.increments.push_back(inc);
    res.contraction_ratios.push_back(k == 0 ? NAN : (res.increments[k - 1] > 0.0 ? inc / res.increments[k - 1] : 0.0));
    const bool inside = u2_weighted <= cfg.epsilon;
    res.in_ball.push_back(inside);

    if (!std::isfinite(inc)) {
      res.status = PicardStatus::Diverged;
      res.u2_star = std::move(u2);
      res.trajectory = std::move(traj);
      break;
    }
    if (inc <= cfg.tol) {
      res.status = PicardStatus::Converged;
      res.u2_star = std::move(u2);
      res.trajectory = std::move(traj);
      break;
    }
    const std::size_t r = res.increments.size();
    const bool growing = r >= 4 && res.increments[r - 1] > res.increments[r - 2] &&
                         res.increments[r - 2] > res.increments[r - 3] && res.increments[r - 3] > res.increments[r - 4];
    if (growing || (!inside && cfg.stop_on_escape) || k + 1 == cfg.max_iter) {
      res.status = growing ? PicardStatus::Diverged : (!inside ? PicardStatus::EscapedBall : PicardStatus::MaxIter);
      res.u2_star = std::move(u2);
      res.trajectory = std::move(traj);
      break;
    }
    u2 = InputSignal<typename M::Input>(std::move(next), dt);
    const auto w = sample_norms(u2, [&](const auto& s) { return m.u_norm(s); });
    u2_weighted = weighted_l2_from_norms(w, dt, cfg.omega, t_final);
  }

  if (res.status == PicardStatus::Converged) {
    for (bool b : res.in_ball)
      if (!b) res.status = PicardStatus::EscapedBall;
  }
  for (std::size_t j = 0; j < res.trajectory.size(); ++j)
    res.envelope_k = std::max(res.envelope_k, std::exp(cfg.omega * res.trajectory.times[j]) *
                                                  res.trajectory.x_norms[j] / cfg.epsilon);
  return res;
}

/// One member of a data ensemble: shapes fixed, amplitude set by the radius.
template <SystemModel M>
struct DataPair {
  typename M::State z0;                    // unit X-norm (or zero)
  InputSignal<typename M::Input> u1;       // unit weighted norm (or zero)
  double state_share = 0.5;                // fraction of the radius given to z0
};

/// Input time profile by ensemble index: constant, burst on [t0, t1],
/// exponential decay, or none.
enum class TimeProfile { None, Constant, Burst, ExpDecay };

inline TimeProfile profile_by_index(std::size_t i) {
  constexpr TimeProfile p[] = {TimeProfile::None, TimeProfile::Constant, TimeProfile::Burst, TimeProfile::ExpDecay};
  return p[i % 4];
}

template <SystemModel M>
InputSignal<typename M::Input> make_input(const M& m, const typename M::Input& profile, TimeProfile kind,
                                          std::size_t count, double dt, Rng& rng) {
  switch (kind) {
    case TimeProfile::None: return InputSignal<typename M::Input>::zero(dt);
    case TimeProfile::Constant:
      return InputSignal<typename M::Input>::separable(profile, count, dt, [](double) { return 1.0; });
    case TimeProfile::Burst: {
      const double t_end = dt * static_cast<double>(count - 1);
      const double t0 = rng.uniform(0.0, 0.5) * t_end;
      const double t1 = t0 + rng.uniform(0.1, 0.4) * t_end;
      return InputSignal<typename M::Input>::separable(profile, count, dt,
                                                       [=](double t) { return t >= t0 && t < t1 ? 1.0 : 0.0; });
    }
    case TimeProfile::ExpDecay: {
      const double rate = rng.uniform(0.5, 3.0);
      return InputSignal<typename M::Input>::separable(profile, count, dt,
                                                       [=](double t) { return std::exp(-rate * t); });
    }
  }
  (void)m;
  return InputSignal<typename M::Input>::zero(dt);
}

/// Ensemble member i: state shapes cycle through eigenmode / smooth / noise /
/// bump, input time profiles through none / constant / burst / decay. Both
/// parts are normalized to unit size (state in X, input in L2_omega(0, T; U)).
template <SystemModel M>
DataPair<M> make_data_pair(const M& m, std::size_t i, const Rng& rng, double omega, double t_final, double dt) {
  Rng r = rng.split(i);
  const std::size_t count = steps_to(t_final, dt) + 1;
  DataPair<M> pair;
  const auto kind = profile_by_index(i);
  const auto shape = shape_by_index(i / 4);
  pair.z0 = scaled_to(m.random_state(r, shape), 1.0, [&](const auto& s) { return m.x_norm(s); });
  pair.state_share = kind == TimeProfile::None ? 1.0 : r.uniform(0.2, 0.8);
  auto profile = m.random_input(r, shape_by_index(i / 4 + 1));
  pair.u1 = make_input(m, profile, kind, count, dt, r);
  if (!pair.u1.is_zero()) {
    const auto w = sample_norms(pair.u1, [&](const auto& s) { return m.u_norm(s); });
    const double wn = weighted_l2_from_norms(w, dt, omega, t_final);
    if (wn > 0.0) pair.u1 *= 1.0 / wn;
  }
  return pair;
}

/// Scales a unit pair so that ||z0|| + ||u1||_omega = radius.
template <SystemModel M>
std::pair<typename M::State, InputSignal<typename M::Input>> scale_pair(const DataPair<M>& p, double radius) {
  auto z0 = p.z0;
  z0 *= radius * p.state_share;
  auto u1 = p.u1;
  u1 *= radius * (1.0 - p.state_share);
  return {std::move(z0), std::move(u1)};
}

struct EpsilonSearch {
  double epsilon0 = 1.0;
  std::size_t max_halvings = 30;
  std::size_t ensemble = 20;
  std::size_t max_iter = 30;
  double rel_tol = 1e-10;
};

class EpsilonNotFound : public std::runtime_error {
 public:
  explicit EpsilonNotFound(double smallest)
      : std::runtime_error("find_epsilon: no candidate radius converged (smallest tried " +
                           std::to_string(smallest) + ")"),
        smallest_tried(smallest) {}
  double smallest_tried;
};

/// Largest radius 2^{-m} eps0 on which picard_solve converges, stays in the
/// ball and contracts (ratios < 1 after iteration 2) for every member of a
/// fixed ensemble scaled to that radius. Empirical, not a proof.
template <SystemModel M>
double find_epsilon(const M& m, double omega, double t_final, double dt, const Rng& rng,
                    const EpsilonSearch& opts = {}, Exec exec = {}) {
  if (!(omega > 0.0 && omega < m.decay_rate())) throw std::invalid_argument("find_epsilon: omega out of range");
  if (opts.ensemble < 1) throw std::invalid_argument("find_epsilon: empty ensemble");
  std::vector<DataPair<M>> pairs(opts.ensemble);
  parallel_for(opts.ensemble, exec, [&](std::size_t i) { pairs[i] = make_data_pair(m, i, rng, omega, t_final, dt); });

  auto passes = [&](double eps) {
    std::atomic<bool> failed{false};
    parallel_for(opts.ensemble, exec, [&](std::size_t i) {
      if (failed.load()) return;
      auto [z0, u1] = scale_pair(pairs[i], eps);
      PicardConfig cfg{omega, eps, opts.rel_tol * eps, opts.max_iter, true};
      const auto res = picard_solve(m, z0, u1, cfg, t_final, dt);
      if (!res.converged() || !(res.max_ratio_from(3) < 1.0)) failed.store(true);
    });
    return !failed.load();
  };

  auto candidate = [&](std::size_t k) { return std::ldexp(opts.epsilon0, -static_cast<int>(k)); };
  if (passes(candidate(0))) return candidate(0);
  std::size_t lo = 0, hi = opts.max_halvings;
  if (!passes(candidate(hi))) throw EpsilonNotFound(candidate(hi));
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (passes(candidate(mid)))
      hi = mid;
    else
      lo = mid;
  }
  return candidate(hi);
}

/// Radius suggested by the contraction proof, 1 / (4 K ||C|| k1^{2-p} k2^p).
inline double proof_epsilon_bound(double K, double c_norm, double k1, double k2, double p) {
  return 1.0 / (4.0 * K * c_norm * std::pow(k1, 2.0 - p) * std::pow(k2, p));
}

}  // namespace issl
