#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "issl/core/parallel.hpp"
#include "issl/models/model.hpp"
#include "issl/operators/gram.hpp"

namespace issl {

/// ||N(z,y)||_U / (||z||_X ||y||_X^{1-p} ||y||_Y^p); 0 when the denominator is.
template <SystemModel M>
double bilinear_ratio(const M& m, const typename M::State& z, const typename M::State& y, double p) {
  const double den = m.x_norm(z) * std::pow(m.x_norm(y), 1.0 - p) * std::pow(m.y_norm(y), p);
  if (!(den > 0.0)) return 0.0;
  return m.u_norm(m.feedback(z, y)) / den;
}

/// sup_z ||N(z, y)||_U / ||z||_X for fixed y, by power iteration on
/// G_X^{-1} M^* G_U M with M = N(., y). Returns the best quotient seen, which
/// is attained by an actual z and therefore never overshoots.
template <SystemModel M>
double sup_over_z(const M& m, const typename M::State& y, typename M::State z, int max_iter = 40) {
  const auto& info = m.info();
  double best = 0.0;
  double prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    const double zn = m.x_norm(z);
    if (!(zn > 0.0)) break;
    z *= 1.0 / zn;
    const auto w = m.feedback(z, y);
    const double q = m.u_norm(w);
    best = std::max(best, q);
    if (!(q > 0.0) || std::abs(q - prev) <= 1e-10 * q) break;
    prev = q;
    z = gram_solve(m.feedback_adjoint_z(gram_apply(w, info.u_kind), y), info.x_kind);
  }
  return best;
}

template <SystemModel M>
double sup_ratio_for_y(const M& m, const typename M::State& y, const typename M::State& z_start, double p) {
  const double den = std::pow(m.x_norm(y), 1.0 - p) * std::pow(m.y_norm(y), p);
  if (!(den > 0.0)) return 0.0;
  return sup_over_z(m, y, z_start) / den;
}

struct BilinearEstimate {
  double K = 0.0;               // best ratio found, after refinement
  double sampled_max = 0.0;     // plain max over the random pairs
};

/// Random pair i, drawn at amplitudes 10^{-3..3}.
template <SystemModel M>
std::pair<typename M::State, typename M::State> random_pair(const M& m, std::size_t i, const Rng& rng) {
  Rng r = rng.split(i);
  auto z = m.random_state(r, shape_by_index(i));
  auto y = m.random_state(r, shape_by_index(i / 4 + i));
  z *= std::pow(10.0, r.uniform(-3.0, 3.0));
  y *= std::pow(10.0, r.uniform(-3.0, 3.0));
  return {std::move(z), std::move(y)};
}

/// Estimates K in ||N(z,y)||_U <= K ||z||_X ||y||_X^{1-p} ||y||_Y^p. For each
/// sampled y the supremum over z is computed exactly (a generalized
/// eigenproblem); the best few y are then refined by a local random search.
template <SystemModel M>
BilinearEstimate estimate_bilinear_K_detailed(const M& m, double p, std::size_t samples, const Rng& rng,
                                              Exec exec = {}, std::size_t refine_top = 8, std::size_t refine_rounds = 60) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("estimate_bilinear_K: p must lie in (0,1)");
  if (samples < 1) throw std::invalid_argument("estimate_bilinear_K: samples must be >= 1");
  using State = typename M::State;

  std::vector<double> plain(samples), best(samples);
  parallel_for(samples, exec, [&](std::size_t i) {
    auto [z, y] = random_pair(m, i, rng);
    plain[i] = bilinear_ratio(m, z, y, p);
    best[i] = std::max(plain[i], sup_ratio_for_y(m, y, z, p));
  });

  BilinearEstimate est;
  for (std::size_t i = 0; i < samples; ++i) {
    est.sampled_max = std::max(est.sampled_max, plain[i]);
    est.K = std::max(est.K, best[i]);
  }
  if (!(est.K > 0.0)) return est;

  std::vector<std::size_t> order(samples);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t top = std::min(refine_top, samples);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                    [&](std::size_t a, std::size_t b) { return best[a] > best[b] || (best[a] == best[b] && a < b); });

  std::vector<double> refined(top, 0.0);
  parallel_for(top, exec, [&](std::size_t t) {
    const std::size_t i = order[t];
    auto [z, y] = random_pair(m, i, rng);
    Rng r = rng.split(samples + t);
    double f = best[i];
    double sigma = 0.3;
    int misses = 0;
    for (std::size_t round = 0; round < refine_rounds; ++round) {
      State step = m.random_state(r, round % 2 == 0 ? FieldShape::WhiteNoise : FieldShape::RandomSmooth);
      step = scaled_to(std::move(step), sigma * m.x_norm(y), [&](const State& s) { return m.x_norm(s); });
      State cand = y;
      cand += step;
      const double fc = sup_ratio_for_y(m, cand, z, p);
      if (fc > f) {
        f = fc;
        y = std::move(cand);
        misses = 0;
      } else if (++misses >= 5) {
        sigma *= 0.5;
        misses = 0;
      }
    }
    refined[t] = f;
  });
  for (double f : refined) est.K = std::max(est.K, f);
  return est;
}

template <SystemModel M>
double estimate_bilinear_K(const M& m, double p, std::size_t samples, const Rng& rng, Exec exec = {}) {
  return estimate_bilinear_K_detailed(m, p, samples, rng, exec).K;
}

/// Number of fresh random pairs whose ratio exceeds K.
template <SystemModel M>
std::size_t count_bound_violations(const M& m, double p, double K, std::size_t samples, const Rng& rng,
                                   Exec exec = {}) {
  std::vector<unsigned char> bad(samples, 0);
  parallel_for(samples, exec, [&](std::size_t i) {
    auto [z, y] = random_pair(m, i, rng);
    bad[i] = bilinear_ratio(m, z, y, p) > K ? 1 : 0;
  });
  return static_cast<std::size_t>(std::count(bad.begin(), bad.end(), 1));
}

}  // namespace issl
