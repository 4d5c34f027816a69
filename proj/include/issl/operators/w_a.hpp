#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "issl/models/model.hpp"

namespace issl {

struct WAEstimate {
  double sampled;  // max Rayleigh quotient over the sample
  double exact;    // closed form from the model's spectrum
};

/// Sampled supremum of the dissipation quotient next to the exact value.
/// The sample maximum can only undershoot the exact constant.
template <SystemModel M>
WAEstimate estimate_w_A_detailed(const M& model, std::size_t samples, Rng& rng) {
  if (samples < 1) throw std::invalid_argument("estimate_w_A: samples must be >= 1");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    auto z = model.random_state(rng, shape_by_index(i));
    if (!(model.x_norm(z) > 0.0)) continue;
    best = std::max(best, model.dissipative_quotient(z));
  }
  return {best, model.w_A()};
}

/// w_A of the model; the exact spectral value is returned whenever available,
/// which is the case for all shipped models.
template <SystemModel M>
double estimate_w_A(const M& model, std::size_t samples, Rng& rng) {
  return estimate_w_A_detailed(model, samples, rng).exact;
}

}  // namespace issl
