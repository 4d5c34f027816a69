#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "issl/core/grid_function.hpp"

namespace issl {

/// Real tridiagonal matrix; row i reads sub[i-1], diag[i], sup[i].
struct TridiagOperator {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> sup;

  TridiagOperator() = default;
  TridiagOperator(std::vector<double> lower, std::vector<double> d, std::vector<double> upper)
      : sub(std::move(lower)), diag(std::move(d)), sup(std::move(upper)) {
    if (diag.empty() || sub.size() + 1 != diag.size() || sup.size() + 1 != diag.size())
      throw std::invalid_argument("TridiagOperator: inconsistent band lengths");
  }

  std::size_t size() const { return diag.size(); }

  bool is_symmetric(double rtol = 0.0) const {
    for (std::size_t i = 0; i < sub.size(); ++i) {
      const double scale = std::max(std::abs(sub[i]), std::abs(sup[i]));
      if (std::abs(sub[i] - sup[i]) > rtol * scale) return false;
    }
    return true;
  }

  /// Constant bands (a Toeplitz matrix).
  bool is_toeplitz() const {
    for (std::size_t i = 1; i < diag.size(); ++i)
      if (diag[i] != diag[0]) return false;
    for (std::size_t i = 1; i < sub.size(); ++i)
      if (sub[i] != sub[0] || sup[i] != sup[0]) return false;
    return true;
  }

  TridiagOperator scaled(double s) const {
    TridiagOperator out = *this;
    for (auto& v : out.sub) v *= s;
    for (auto& v : out.diag) v *= s;
    for (auto& v : out.sup) v *= s;
    return out;
  }

  template <class T>
  GridFunction<T> apply(const GridFunction<T>& f) const {
    const std::size_t n = size();
    if (f.size() != n) throw std::invalid_argument("TridiagOperator::apply: size mismatch");
    GridFunction<T> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      T v = diag[i] * f[i];
      if (i > 0) v += sub[i - 1] * f[i - 1];
      if (i + 1 < n) v += sup[i] * f[i + 1];
      out[i] = v;
    }
    return out;
  }
};

/// (1/h^2) tridiag(1, -2, 1) on n interior points, h = 1/(n+1).
inline TridiagOperator dirichlet_laplacian(std::size_t n) {
  if (n < 1) throw std::invalid_argument("dirichlet_laplacian: n must be positive");
  const double h = GridFunction<double>::spacing(n);
  const double s = 1.0 / (h * h);
  return TridiagOperator(std::vector<double>(n - 1, s), std::vector<double>(n, -2.0 * s),
                         std::vector<double>(n - 1, s));
}

/// Solves (alpha I - op) x = rhs with the Thomas algorithm. alpha and rhs may
/// be complex while op stays real.
template <class S, class T>
auto solve_shifted(const TridiagOperator& op, S alpha, const GridFunction<T>& rhs) {
  using R = std::conditional_t<is_complex_v<S> || is_complex_v<T>, Complex, double>;
  const std::size_t n = op.size();
  if (rhs.size() != n) throw std::invalid_argument("solve_shifted: size mismatch");

  double scale = std::abs(alpha);
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(op.diag[i]));
  for (std::size_t i = 0; i + 1 < n; ++i) scale = std::max({scale, std::abs(op.sub[i]), std::abs(op.sup[i])});
  const double pivot_floor = 1e-14 * (scale > 0.0 ? scale : 1.0);

  // Matrix entries: a_i = -sub, b_i = alpha - diag, c_i = -sup.
  std::vector<R> cprime(n);
  GridFunction<R> x(n);
  R denom = R(alpha) - op.diag[0];
  if (std::abs(denom) < pivot_floor) throw std::runtime_error("solve_shifted: singular system");
  cprime[0] = n > 1 ? R(-op.sup[0]) / denom : R{};
  x[0] = R(rhs[0]) / denom;
  for (std::size_t i = 1; i < n; ++i) {
    const double a = -op.sub[i - 1];
    denom = R(alpha) - op.diag[i] - a * cprime[i - 1];
    if (std::abs(denom) < pivot_floor) throw std::runtime_error("solve_shifted: singular system");
    cprime[i] = i + 1 < n ? R(-op.sup[i]) / denom : R{};
    x[i] = (R(rhs[i]) - a * x[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cprime[i] * x[i + 1];
  return x;
}

}  // namespace issl
