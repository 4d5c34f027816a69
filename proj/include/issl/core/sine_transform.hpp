#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace issl {

/// Coefficients of f in the discrete sine basis s_k(x_i) = sqrt(2) sin(k pi x_i),
/// k = 1..n, which is orthonormal for the h-weighted pairing. Parseval holds
/// exactly: sum c_k^2 = h sum f_i^2.
std::vector<double> sine_coefficients(std::span<const double> f);

/// Inverse of sine_coefficients.
std::vector<double> sine_synthesis(std::span<const double> coeffs);

/// k-th eigenvalue (k = 1..n) of -Delta_h: (4/h^2) sin^2(k pi h / 2).
double neg_laplacian_eigenvalue(std::size_t n, std::size_t k);

}  // namespace issl
