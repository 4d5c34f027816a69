#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "issl/core/norms.hpp"

namespace issl {

/// Number of steps of size dt needed to reach t (t/dt rounded when it is an
/// integer up to rounding, ceiling otherwise).
inline std::size_t steps_to(double t, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("steps_to: dt must be positive");
  if (t < 0.0) throw std::invalid_argument("steps_to: negative time");
  const double r = t / dt;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, r)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(r));
}

/// Uniformly sampled input u(t_j), t_j = j dt. An empty sample list stands
/// for the identically zero input.
template <class U>
struct InputSignal {
  std::vector<U> samples;
  double dt = 0.0;

  InputSignal() = default;
  InputSignal(std::vector<U> s, double step) : samples(std::move(s)), dt(step) {
    if (!(dt > 0.0)) throw std::invalid_argument("InputSignal: dt must be positive");
  }

  static InputSignal zero(double step) { return InputSignal({}, step); }

  /// u(t_j) = g(t_j) * profile for j = 0..count-1.
  template <class G>
  static InputSignal separable(const U& profile, std::size_t count, double step, G&& g) {
    std::vector<U> s;
    s.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
      U v = profile;
      v *= g(static_cast<double>(j) * step);
      s.push_back(std::move(v));
    }
    return InputSignal(std::move(s), step);
  }

  bool is_zero() const { return samples.empty(); }
  std::size_t count() const { return samples.size(); }
  double t_final() const { return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1); }

  InputSignal& operator*=(double s) {
    for (auto& v : samples) v *= s;
    return *this;
  }
};

/// Per-sample norms ||u_j||_U; empty for the zero signal.
template <class U, class NormFn>
std::vector<double> sample_norms(const InputSignal<U>& u, NormFn&& unorm) {
  std::vector<double> out;
  out.reserve(u.count());
  for (const auto& s : u.samples) out.push_back(unorm(s));
  return out;
}

template <class U>
std::vector<double> sample_norms(const InputSignal<U>& u, NormKind kind) {
  return sample_norms(u, [kind](const U& s) { return norm(s, kind); });
}

/// Number of samples with t_j < t (left-rectangle rule on [0, t]).
inline std::size_t samples_before(double t, double dt) { return steps_to(t, dt); }

/// Weighted L2 norm from precomputed sample norms:
///   (sum_{t_j < t} e^{2 omega t_j} ||u_j||^2 dt)^{1/2}.
/// The zero signal (empty norms) has norm 0 for every t.
inline double weighted_l2_from_norms(std::span<const double> norms, double dt, double omega, double t) {
  if (norms.empty()) return 0.0;
  const double t_final = dt * static_cast<double>(norms.size() - 1);
  if (t < 0.0 || t > t_final * (1.0 + 1e-12) + 1e-15)
    throw std::out_of_range("weighted_l2_norm: t outside [0, t_final]");
  const std::size_t m = std::min(samples_before(t, dt), norms.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = std::exp(2.0 * omega * static_cast<double>(j) * dt);
    acc += w * norms[j] * norms[j];
  }
  return std::sqrt(acc * dt);
}

/// Running version: out[j] = weighted norm on [0, t_j] for j = 0..count-1.
inline std::vector<double> weighted_l2_running(std::span<const double> norms, double dt, double omega,
                                               std::size_t count) {
  std::vector<double> out(count, 0.0);
  double acc = 0.0;
  for (std::size_t j = 1; j < count; ++j) {
    if (j - 1 < norms.size()) {
      const double nj = norms[j - 1];
      acc += std::exp(2.0 * omega * static_cast<double>(j - 1) * dt) * nj * nj;
    }
    out[j] = std::sqrt(acc * dt);
  }
  return out;
}

template <class U>
double weighted_l2_norm(const InputSignal<U>& u, double omega, double t, NormKind kind) {
  if (omega < 0.0) throw std::invalid_argument("weighted_l2_norm: omega must be >= 0");
  if (u.is_zero()) return 0.0;
  return weighted_l2_from_norms(sample_norms(u, kind), u.dt, omega, t);
}

}  // namespace issl
