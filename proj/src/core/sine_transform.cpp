#include "issl/core/sine_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace issl {

namespace {

// DST-I is its own inverse up to the factor 2(n+1); one plan per size serves
// both directions. Planning is not thread-safe in FFTW, execution with the
// new-array interface is.
class Dst1Plans {
 public:
  static Dst1Plans& instance() {
    static Dst1Plans plans;
    return plans;
  }

  fftw_plan get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> in(n), out(n);
    fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), FFTW_RODFT00,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW: failed to create DST-I plan");
    plans_.emplace(n, plan);
    return plan;
  }

  ~Dst1Plans() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  Dst1Plans() = default;
  std::mutex mutex_;
  std::map<std::size_t, fftw_plan> plans_;
};

std::vector<double> dst1(std::span<const double> f) {
  const std::size_t n = f.size();
  std::vector<double> in(f.begin(), f.end());
  std::vector<double> out(n);
  if (n == 0) return out;
  fftw_execute_r2r(Dst1Plans::instance().get(n), in.data(), out.data());
  return out;
}

}  // namespace

std::vector<double> sine_coefficients(std::span<const double> f) {
  // FFTW: Y_k = 2 sum_j X_j sin(pi (j+1)(k+1)/(n+1)); c_k = (h / sqrt 2) Y_k.
  auto y = dst1(f);
  const double h = 1.0 / static_cast<double>(f.size() + 1);
  const double scale = h / std::numbers::sqrt2;
  for (auto& v : y) v *= scale;
  return y;
}

std::vector<double> sine_synthesis(std::span<const double> coeffs) {
  // f_i = sum_k c_k sqrt2 sin(k pi x_i) = Y_i / sqrt2.
  auto y = dst1(coeffs);
  for (auto& v : y) v /= std::numbers::sqrt2;
  return y;
}

double neg_laplacian_eigenvalue(std::size_t n, std::size_t k) {
  const double h = 1.0 / static_cast<double>(n + 1);
  const double s = std::sin(static_cast<double>(k) * std::numbers::pi * h / 2.0);
  return 4.0 * s * s / (h * h);
}

}  // namespace issl
