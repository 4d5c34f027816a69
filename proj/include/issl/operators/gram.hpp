#pragma once

#include <stdexcept>

#include "issl/core/norms.hpp"
#include "issl/operators/tridiag.hpp"

namespace issl {

// Gram operators G of the discrete norms: ||f||^2 = h Re<G f, f> in the
// plain Euclidean pairing. L2 -> I, H10 -> -Delta_h, H2capH10 -> Delta_h^2,
// Hminus1 -> (-Delta_h)^{-1}, ProductH10xL2 -> diag(-Delta_h, I).

template <class T>
GridFunction<T> gram_apply(const GridFunction<T>& f, NormKind kind) {
  const auto lap = dirichlet_laplacian(f.size());
  switch (kind) {
    case NormKind::L2: return f;
    case NormKind::H10: return -lap.apply(f);
    case NormKind::H2capH10: return lap.apply(lap.apply(f));
    case NormKind::Hminus1: return solve_shifted(lap, 0.0, f);
    case NormKind::ProductH10xL2: break;
  }
  throw std::invalid_argument("gram_apply: ProductH10xL2 needs a ProductState");
}

template <class T>
GridFunction<T> gram_solve(const GridFunction<T>& f, NormKind kind) {
  const auto lap = dirichlet_laplacian(f.size());
  switch (kind) {
    case NormKind::L2: return f;
    case NormKind::H10: return solve_shifted(lap, 0.0, f);
    case NormKind::H2capH10: return solve_shifted(lap, 0.0, solve_shifted(lap, 0.0, f));
    case NormKind::Hminus1: return -lap.apply(f);
    case NormKind::ProductH10xL2: break;
  }
  throw std::invalid_argument("gram_solve: ProductH10xL2 needs a ProductState");
}

inline ProductState gram_apply(const ProductState& f, NormKind kind) {
  if (kind != NormKind::ProductH10xL2) throw std::invalid_argument("gram_apply: kind/state mismatch");
  return ProductState(gram_apply(f.phi, NormKind::H10), f.psi);
}

inline ProductState gram_solve(const ProductState& f, NormKind kind) {
  if (kind != NormKind::ProductH10xL2) throw std::invalid_argument("gram_solve: kind/state mismatch");
  return ProductState(gram_solve(f.phi, NormKind::H10), f.psi);
}

/// Real part of the Euclidean h-weighted pairing.
template <class T>
double euclid_re(const GridFunction<T>& a, const GridFunction<T>& b) {
  return real_part(l2_inner(a, b));
}

inline double euclid_re(const ProductState& a, const ProductState& b) {
  return l2_inner(a.phi, b.phi) + l2_inner(a.psi, b.psi);
}

/// Re <a, b>_kind = h Re <G a, b>.
template <class S>
double inner_re(const S& a, const S& b, NormKind kind) {
  return euclid_re(gram_apply(a, kind), b);
}

}  // namespace issl
