#pragma once

#include <concepts>
#include <cstddef>
#include <string>

#include "issl/core/grid_function.hpp"
#include "issl/core/norms.hpp"
#include "issl/core/rng.hpp"
#include "issl/core/sampling.hpp"

namespace issl {

/// Which energy argument applies to a model.
enum class Structure {
  SelfAdjoint,          // A self-adjoint, strictly negative on X
  SkewPlusDissipative,  // A = A0 + L, A0 skew, L strictly dissipative and bounded
  DampedWave,           // A = A0 + K with K only semidefinite; needs the modified energy
};

struct ModelInfo {
  std::string name;
  Structure structure = Structure::SelfAdjoint;
  NormKind x_kind = NormKind::L2;
  NormKind y_kind = NormKind::L2;
  NormKind u_kind = NormKind::L2;
  double p = 0.5;
  bool complex_field = false;
  /// Operator norm of B1* (and B2*) in the pairing used by the energy estimate.
  double b_adjoint_norm = 1.0;
  /// <N(z, Cz), B2* z> vanishes identically, so the dissipation bound is global.
  bool global_dissipation = false;
  bool feedback = true;
};

/// Interface shared by the four discretized systems. All maps act on grid
/// data; B1 = B2 = inject and C = observe.
///
/// resolvent(r, c, s) returns (I - c (A + s I))^{-1} r, which is the single
/// linear solve behind every implicit step.
template <class M>
concept SystemModel = requires(const M& m, const typename M::State& z, const typename M::Input& u, Rng& rng) {
  typename M::State;
  typename M::Input;
  { m.info() } -> std::convertible_to<const ModelInfo&>;
  { m.size() } -> std::convertible_to<std::size_t>;
  { m.x_norm(z) } -> std::convertible_to<double>;
  { m.y_norm(z) } -> std::convertible_to<double>;
  { m.u_norm(u) } -> std::convertible_to<double>;
  { m.x_inner(z, z) } -> std::convertible_to<double>;
  { m.generator(z) } -> std::convertible_to<typename M::State>;
  { m.resolvent(z, 1.0, 0.0) } -> std::convertible_to<typename M::State>;
  { m.inject(u) } -> std::convertible_to<typename M::State>;
  { m.observe(z) } -> std::convertible_to<typename M::State>;
  { m.feedback(z, z) } -> std::convertible_to<typename M::Input>;
  { m.feedback_adjoint_z(u, z) } -> std::convertible_to<typename M::State>;
  { m.dissipative_quotient(z) } -> std::convertible_to<double>;
  { m.w_A() } -> std::convertible_to<double>;
  { m.decay_rate() } -> std::convertible_to<double>;
  { m.zero_state() } -> std::convertible_to<typename M::State>;
  { m.zero_input() } -> std::convertible_to<typename M::Input>;
  { m.eigenmode(std::size_t{1}, 1.0) } -> std::convertible_to<typename M::State>;
  { m.random_state(rng, FieldShape::Eigenmode) } -> std::convertible_to<typename M::State>;
  { m.random_input(rng, FieldShape::Eigenmode) } -> std::convertible_to<typename M::Input>;
};

/// Re <B2 N(z, Cz), z>_X, the pairing bounded by the dissipation inequality.
template <SystemModel M>
double feedback_pairing(const M& m, const typename M::State& z) {
  return m.x_inner(m.inject(m.feedback(z, m.observe(z))), z);
}

/// Rescales v to the given norm (zero stays zero).
template <class V, class NormFn>
V scaled_to(V v, double target, NormFn&& nrm) {
  const double cur = nrm(v);
  if (cur > 0.0) v *= target / cur;
  return v;
}

/// The linear part of a model: identical except N = 0.
template <SystemModel M>
class Linearized {
 public:
  using State = typename M::State;
  using Input = typename M::Input;

  explicit Linearized(M base) : base_(std::move(base)), info_(base_.info()) {
    info_.name += "_linear";
    info_.feedback = false;
    info_.global_dissipation = true;
  }

  const M& base() const { return base_; }
  const ModelInfo& info() const { return info_; }
  std::size_t size() const { return base_.size(); }
  double x_norm(const State& z) const { return base_.x_norm(z); }
  double y_norm(const State& y) const { return base_.y_norm(y); }
  double u_norm(const Input& u) const { return base_.u_norm(u); }
  double x_inner(const State& a, const State& b) const { return base_.x_inner(a, b); }
  State generator(const State& z) const { return base_.generator(z); }
  State resolvent(const State& r, double c, double shift) const { return base_.resolvent(r, c, shift); }
  State inject(const Input& u) const { return base_.inject(u); }
  State observe(const State& z) const { return base_.observe(z); }
  Input feedback(const State&, const State&) const { return base_.zero_input(); }
  State feedback_adjoint_z(const Input&, const State&) const { return base_.zero_state(); }
  double dissipative_quotient(const State& z) const { return base_.dissipative_quotient(z); }
  double w_A() const { return base_.w_A(); }
  double decay_rate() const { return base_.decay_rate(); }
  State zero_state() const { return base_.zero_state(); }
  Input zero_input() const { return base_.zero_input(); }
  State eigenmode(std::size_t k, double amp) const { return base_.eigenmode(k, amp); }
  State random_state(Rng& rng, FieldShape s) const { return base_.random_state(rng, s); }
  Input random_input(Rng& rng, FieldShape s) const { return base_.random_input(rng, s); }

 private:
  M base_;
  ModelInfo info_;
};

}  // namespace issl
