#include "issl/operators/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace issl {

namespace {

struct Pair {
  double value;
  std::size_t index;  // position in the natural (unsorted) ordering
};

// Number of eigenvalues strictly below x (Sturm count via the LDL^T pivots).
std::size_t count_below(const TridiagOperator& op, double x) {
  const std::size_t n = op.size();
  std::size_t count = 0;
  double d = op.diag[0] - x;
  const double tiny = std::numeric_limits<double>::min();
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    if (d == 0.0) d = tiny;
    d = op.diag[i] - x - op.sub[i - 1] * op.sup[i - 1] / d;
    if (d < 0.0) ++count;
  }
  return count;
}

// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
double bisect_eigenvalue(const TridiagOperator& op, std::size_t k, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(op, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> inverse_iteration(const TridiagOperator& op, double lambda, double scale,
                                      const std::vector<std::vector<double>>& previous) {
  const std::size_t n = op.size();
  const double shift = lambda + 4.0 * std::numeric_limits<double>::epsilon() * scale;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(static_cast<double>(i + 1) * 1.234567);

  std::vector<double> cprime(n), w(n);
  for (int it = 0; it < 4; ++it) {
    // Thomas on (op - shift I) w = v with tiny pivots nudged off zero.
    double denom = op.diag[0] - shift;
    const double floor = std::numeric_limits<double>::epsilon() * scale;
    if (std::abs(denom) < floor) denom = floor;
    cprime[0] = n > 1 ? op.sup[0] / denom : 0.0;
    w[0] = v[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = op.diag[i] - shift - op.sub[i - 1] * cprime[i - 1];
      if (std::abs(denom) < floor) denom = floor;
      cprime[i] = i + 1 < n ? op.sup[i] / denom : 0.0;
      w[i] = (v[i] - op.sub[i - 1] * w[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) w[i] -= cprime[i] * w[i + 1];
    for (const auto& p : previous) {
      const double proj = std::inner_product(w.begin(), w.end(), p.begin(), 0.0);
      for (std::size_t i = 0; i < n; ++i) w[i] -= proj * p[i];
    }
    const double nrm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (!(nrm > 0.0)) throw std::runtime_error("spectrum: inverse iteration broke down");
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nrm;
  }
  return v;
}

std::vector<std::size_t> select_modes(const std::vector<double>& ascending, std::size_t n_modes) {
  std::vector<std::size_t> idx(ascending.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (n_modes >= ascending.size()) return idx;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(ascending[a]) < std::abs(ascending[b]); });
  idx.resize(n_modes);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

Spectrum spectrum(const TridiagOperator& op, std::size_t n_modes, bool with_vectors) {
  if (!op.is_symmetric(1e-14)) throw std::invalid_argument("spectrum: operator is not symmetric");
  const std::size_t n = op.size();
  Spectrum out;

  if (op.is_toeplitz()) {
    // lambda_k = d + 2 s cos(k pi / (n+1)), eigenvector sin(k pi i / (n+1)).
    const double d = op.diag[0];
    const double s = n > 1 ? op.sub[0] : 0.0;
    std::vector<Pair> pairs;
    for (std::size_t k = 1; k <= n; ++k) {
      const double theta = static_cast<double>(k) * std::numbers::pi / static_cast<double>(n + 1);
      // 2 s cos(theta) = 2s - 4s sin^2(theta/2) is more accurate near theta = 0.
      const double sh = std::sin(0.5 * theta);
      pairs.push_back({d + 2.0 * s - 4.0 * s * sh * sh, k});
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.value < b.value; });
    std::vector<double> values;
    for (const auto& p : pairs) values.push_back(p.value);
    const auto keep = select_modes(values, n_modes);
    const double norm = std::sqrt(2.0 / static_cast<double>(n + 1));
    if (with_vectors) out.eigenvectors.emplace();
    for (const auto j : keep) {
      out.eigenvalues.push_back(pairs[j].value);
      if (with_vectors) {
        std::vector<double> v(n);
        const double k = static_cast<double>(pairs[j].index);
        for (std::size_t i = 0; i < n; ++i)
          v[i] = norm * std::sin(k * std::numbers::pi * static_cast<double>(i + 1) / static_cast<double>(n + 1));
        out.eigenvectors->push_back(std::move(v));
      }
    }
    return out;
  }

  // Gershgorin interval.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(op.sub[i - 1]);
    if (i + 1 < n) r += std::abs(op.sup[i]);
    lo = std::min(lo, op.diag[i] - r);
    hi = std::max(hi, op.diag[i] + r);
    scale = std::max(scale, std::abs(op.diag[i]) + r);
  }
  const double pad = 1e-12 * std::max(scale, 1.0);
  lo -= pad;
  hi += pad;

  std::vector<double> values(n);
  for (std::size_t k = 0; k < n; ++k) values[k] = bisect_eigenvalue(op, k, lo, hi);
  const auto keep = select_modes(values, n_modes);
  if (with_vectors) out.eigenvectors.emplace();
  for (const auto j : keep) {
    out.eigenvalues.push_back(values[j]);
    if (with_vectors) {
      // Orthogonalize only against numerically close eigenvalues.
      std::vector<std::vector<double>> close;
      for (std::size_t m = 0; m < out.eigenvectors->size(); ++m)
        if (std::abs(out.eigenvalues[m] - values[j]) < 1e-8 * std::max(scale, 1.0))
          close.push_back((*out.eigenvectors)[m]);
      out.eigenvectors->push_back(inverse_iteration(op, values[j], std::max(scale, 1.0), close));
    }
  }
  return out;
}

double max_eigenvalue(const TridiagOperator& op) {
  const auto s = spectrum(op, op.size());
  return s.eigenvalues.back();
}

}  // namespace issl
