#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "issl/core/grid_function.hpp"
#include "issl/core/rng.hpp"

namespace issl {

enum class FieldShape { Eigenmode, RandomSmooth, WhiteNoise, Bump };

/// sin(k pi x_i); its discrete L2 norm is exactly sqrt(1/2).
template <class T = double>
GridFunction<T> sine_mode(std::size_t n, std::size_t k) {
  return GridFunction<T>::sample(n, [k](double x) { return std::sin(static_cast<double>(k) * std::numbers::pi * x); });
}

namespace detail {

template <class T>
T random_scalar(Rng& rng) {
  if constexpr (is_complex_v<T>) {
    const double re = rng.normal();
    const double im = rng.normal();
    return T(re, im);
  } else {
    return rng.normal();
  }
}

}  // namespace detail

/// sum_{k <= modes} a_k sin(k pi x) / k with normal a_k.
template <class T = double>
GridFunction<T> random_smooth(std::size_t n, Rng& rng, std::size_t modes = 8) {
  GridFunction<T> f(n);
  modes = std::min(modes, n);
  for (std::size_t k = 1; k <= modes; ++k) {
    const T a = detail::random_scalar<T>(rng) / static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i)
      f[i] += a * std::sin(static_cast<double>(k) * std::numbers::pi * f.x(i));
  }
  return f;
}

template <class T = double>
GridFunction<T> white_noise(std::size_t n, Rng& rng) {
  GridFunction<T> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = detail::random_scalar<T>(rng);
  return f;
}

/// Smooth compactly supported bump of random centre and width.
template <class T = double>
GridFunction<T> random_bump(std::size_t n, Rng& rng) {
  const double width = rng.uniform(0.05, 0.3);
  const double centre = rng.uniform(width, 1.0 - width);
  const T amp = detail::random_scalar<T>(rng);
  return GridFunction<T>::sample(n, [&](double x) -> T {
    const double r = (x - centre) / width;
    if (std::abs(r) >= 1.0) return T{};
    return amp * std::exp(1.0 - 1.0 / (1.0 - r * r));
  });
}

template <class T = double>
GridFunction<T> random_field(std::size_t n, FieldShape shape, Rng& rng) {
  switch (shape) {
    case FieldShape::Eigenmode: {
      const auto k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(std::min<std::size_t>(n, 4))));
      auto f = sine_mode<T>(n, k);
      f *= detail::random_scalar<T>(rng);
      return f;
    }
    case FieldShape::RandomSmooth: return random_smooth<T>(n, rng);
    case FieldShape::WhiteNoise: return white_noise<T>(n, rng);
    case FieldShape::Bump: return random_bump<T>(n, rng);
  }
  return GridFunction<T>(n);
}

inline FieldShape shape_by_index(std::size_t i) {
  constexpr FieldShape shapes[] = {FieldShape::Eigenmode, FieldShape::RandomSmooth, FieldShape::WhiteNoise,
                                   FieldShape::Bump};
  return shapes[i % 4];
}

}  // namespace issl
