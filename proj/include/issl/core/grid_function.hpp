#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace issl {

using Complex = std::complex<double>;

template <class T>
inline constexpr bool is_complex_v = false;
template <class T>
inline constexpr bool is_complex_v<std::complex<T>> = true;

inline double abs2(double v) { return v * v; }
inline double abs2(const Complex& v) { return std::norm(v); }

inline double real_part(double v) { return v; }
inline double real_part(const Complex& v) { return v.real(); }

inline double conj_if(double v) { return v; }
inline Complex conj_if(const Complex& v) { return std::conj(v); }

/// Function on the interior points x_i = (i+1)h, i = 0..n-1, of a uniform
/// grid on (0,1) with h = 1/(n+1). Dirichlet boundary values are implicit
/// zeros and never stored.
template <class T>
class GridFunction {
 public:
  using value_type = T;

  GridFunction() = default;
  explicit GridFunction(std::size_t n) : values_(n, T{}), h_(spacing(n)) {}
  explicit GridFunction(std::vector<T> values)
      : values_(std::move(values)), h_(spacing(values_.size())) {}

  /// Samples f at the interior grid points.
  template <class F>
  static GridFunction sample(std::size_t n, F&& f) {
    GridFunction g(n);
    for (std::size_t i = 0; i < n; ++i) g.values_[i] = static_cast<T>(f(g.x(i)));
    return g;
  }

  static double spacing(std::size_t n) { return 1.0 / static_cast<double>(n + 1); }

  std::size_t size() const { return values_.size(); }
  double h() const { return h_; }
  double x(std::size_t i) const { return static_cast<double>(i + 1) * h_; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  std::vector<T>& data() { return values_; }
  const std::vector<T>& data() const { return values_; }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  /// Value with the Dirichlet padding: index -1 and n read as zero.
  T padded(std::ptrdiff_t i) const {
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(values_.size())) return T{};
    return values_[static_cast<std::size_t>(i)];
  }

  bool all_finite() const {
    for (const auto& v : values_) {
      if constexpr (is_complex_v<T>) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
      } else {
        if (!std::isfinite(v)) return false;
      }
    }
    return true;
  }

  GridFunction& operator+=(const GridFunction& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  GridFunction& operator-=(const GridFunction& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  template <class S>
  GridFunction& operator*=(const S& s) {
    for (auto& v : values_) v *= s;
    return *this;
  }
  /// this += a * o
  template <class S>
  GridFunction& axpy(const S& a, const GridFunction& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * o.values_[i];
    return *this;
  }

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator-(GridFunction a) { return a *= -1.0; }
  template <class S>
    requires std::is_arithmetic_v<S> || std::is_same_v<S, T>
  friend GridFunction operator*(const S& s, GridFunction a) {
    return a *= s;
  }

  bool operator==(const GridFunction&) const = default;

 private:
  void check_same(const GridFunction& o) const {
    if (o.values_.size() != values_.size())
      throw std::invalid_argument("GridFunction: size mismatch");
  }

  std::vector<T> values_;
  double h_ = 0.0;
};

using RealGrid = GridFunction<double>;
using ComplexGrid = GridFunction<Complex>;

/// Elementwise product.
template <class T>
GridFunction<T> hadamard(const GridFunction<T>& a, const GridFunction<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hadamard: size mismatch");
  GridFunction<T> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

/// Central difference (f_{i+1} - f_{i-1}) / 2h with zero padding.
template <class T>
GridFunction<T> central_difference(const GridFunction<T>& f) {
  const auto n = static_cast<std::ptrdiff_t>(f.size());
  GridFunction<T> out(f.size());
  const double inv2h = 0.5 / f.h();
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = (f.padded(i + 1) - f.padded(i - 1)) * inv2h;
  return out;
}

/// Euclidean L2 pairing h * sum a_i conj(b_i).
template <class T>
T l2_inner(const GridFunction<T>& a, const GridFunction<T>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("l2_inner: size mismatch");
  T acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * conj_if(b[i]);
  return acc * a.h();
}

/// First-order wave state (phi, psi) = (position, velocity).
struct ProductState {
  RealGrid phi;
  RealGrid psi;

  ProductState() = default;
  explicit ProductState(std::size_t n) : phi(n), psi(n) {}
  ProductState(RealGrid p, RealGrid q) : phi(std::move(p)), psi(std::move(q)) {
    if (phi.size() != psi.size())
      throw std::invalid_argument("ProductState: component size mismatch");
  }

  std::size_t size() const { return phi.size(); }
  double h() const { return phi.h(); }
  bool all_finite() const { return phi.all_finite() && psi.all_finite(); }

  ProductState& operator+=(const ProductState& o) {
    phi += o.phi;
    psi += o.psi;
    return *this;
  }
  ProductState& operator-=(const ProductState& o) {
    phi -= o.phi;
    psi -= o.psi;
    return *this;
  }
  ProductState& operator*=(double s) {
    phi *= s;
    psi *= s;
    return *this;
  }
  ProductState& axpy(double a, const ProductState& o) {
    phi.axpy(a, o.phi);
    psi.axpy(a, o.psi);
    return *this;
  }
  friend ProductState operator+(ProductState a, const ProductState& b) { return a += b; }
  friend ProductState operator-(ProductState a, const ProductState& b) { return a -= b; }
  friend ProductState operator-(ProductState a) { return a *= -1.0; }
  friend ProductState operator*(double s, ProductState a) { return a *= s; }

  bool operator==(const ProductState&) const = default;
};

}  // namespace issl
