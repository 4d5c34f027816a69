#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

#include "issl/core/grid_function.hpp"
#include "issl/core/sine_transform.hpp"

namespace issl {

enum class NormKind { L2, H10, H2capH10, Hminus1, ProductH10xL2 };

constexpr std::string_view to_string(NormKind k) {
  switch (k) {
    case NormKind::L2: return "L2";
    case NormKind::H10: return "H10";
    case NormKind::H2capH10: return "H2capH10";
    case NormKind::Hminus1: return "Hminus1";
    case NormKind::ProductH10xL2: return "ProductH10xL2";
  }
  return "?";
}

namespace detail {

template <class T>
double l2_sq(const GridFunction<T>& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += abs2(v);
  return acc * f.h();
}

// Forward differences over the padded vector (n+1 of them), so that
// h * sum |D f|^2 = <-Delta_h f, f>.
template <class T>
double h10_sq(const GridFunction<T>& f) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  double acc = 0.0;
  for (std::ptrdiff_t i = 0; i <= n; ++i) acc += abs2(f.padded(i) - f.padded(i - 1));
  return acc / f.h();
}

template <class T>
double h2_sq(const GridFunction<T>& f) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  const double inv_h2 = 1.0 / (f.h() * f.h());
  double acc = 0.0;
  for (std::ptrdiff_t i = 0; i < n; ++i)
    acc += abs2((f.padded(i - 1) - 2.0 * f.padded(i) + f.padded(i + 1)) * inv_h2);
  return acc * f.h();
}

inline double hminus1_sq_real(std::span<const double> v) {
  const auto c = sine_coefficients(v);
  double acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * c[k] / neg_laplacian_eigenvalue(v.size(), k + 1);
  return acc;
}

template <class T>
double hminus1_sq(const GridFunction<T>& f) {
  if constexpr (is_complex_v<T>) {
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
      re[i] = f[i].real();
      im[i] = f[i].imag();
    }
    return hminus1_sq_real(re) + hminus1_sq_real(im);
  } else {
    return hminus1_sq_real(f.values());
  }
}

inline void require_length(std::size_t n, NormKind kind) {
  if (n == 0) throw std::invalid_argument("norm: empty grid function");
  if (kind != NormKind::L2 && n < 2)
    throw std::invalid_argument("norm: difference-based norms need at least 2 points");
}

}  // namespace detail

/// Squared norm; avoids the square root in hot loops.
template <class T>
double norm_sq(const GridFunction<T>& f, NormKind kind) {
  detail::require_length(f.size(), kind);
  switch (kind) {
    case NormKind::L2: return detail::l2_sq(f);
    case NormKind::H10: return detail::h10_sq(f);
    case NormKind::H2capH10: return detail::h2_sq(f);
    case NormKind::Hminus1: return detail::hminus1_sq(f);
    case NormKind::ProductH10xL2: break;
  }
  throw std::invalid_argument("norm: ProductH10xL2 needs a ProductState");
}

inline double norm_sq(const ProductState& f, NormKind kind) {
  if (kind != NormKind::ProductH10xL2)
    throw std::invalid_argument("norm: a ProductState only carries the ProductH10xL2 norm");
  detail::require_length(f.size(), NormKind::H10);
  return detail::h10_sq(f.phi) + detail::l2_sq(f.psi);
}

template <class F>
double norm(const F& f, NormKind kind) {
  return std::sqrt(norm_sq(f, kind));
}

}  // namespace issl
