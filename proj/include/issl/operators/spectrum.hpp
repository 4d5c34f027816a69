#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "issl/operators/tridiag.hpp"

namespace issl {

/// Eigenvalues in ascending order. eigenvectors[k] pairs with eigenvalues[k]
/// and is normalized in the Euclidean (unweighted) sense.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::optional<std::vector<std::vector<double>>> eigenvectors;
};

/// Eigen-decomposition of a symmetric tridiagonal operator. Constant-band
/// operators use the closed-form sine solution; others use Sturm bisection
/// with inverse iteration. With n_modes < n only the n_modes eigenvalues of
/// smallest magnitude are returned (still ascending).
Spectrum spectrum(const TridiagOperator& op, std::size_t n_modes, bool with_vectors = false);

/// Largest eigenvalue of a symmetric tridiagonal operator.
double max_eigenvalue(const TridiagOperator& op);

}  // namespace issl
