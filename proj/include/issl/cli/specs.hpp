#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "issl/cli/config.hpp"
#include "issl/core/input_signal.hpp"
#include "issl/models/model.hpp"

namespace issl::cli {

/// Textual data specifications:
///   zero | eigenmode:k:amp | random_smooth:amp | burst:t0:t1:amp |
///   exp_decay:rate:amp | file:path
/// States use zero, eigenmode, random_smooth and file. Inputs use every form:
/// the spatial profile is sin(k pi x) with U-norm amp (k = 1 for burst and
/// exp_decay), a random smooth field, or the file's columns; the time course
/// is constant unless burst or exp_decay.
struct DataSpec {
  enum class Kind { Zero, Eigenmode, RandomSmooth, Burst, ExpDecay, File };
  Kind kind = Kind::Zero;
  std::size_t k = 1;
  double amp = 0.0;
  double t0 = 0.0, t1 = 0.0;
  double rate = 0.0;
  std::string path;
};

DataSpec parse_spec(const std::string& text);

/// Columns of a state/profile file: x followed by the value columns
/// (value, or value and value_imag, or phi and psi).
std::vector<std::vector<double>> read_profile_columns(const std::string& path, std::size_t n);

namespace detail {

template <class G>
void fill_from_columns(G& g, const std::vector<std::vector<double>>& cols, std::size_t first) {
  using T = typename G::value_type;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if constexpr (is_complex_v<T>)
      g[i] = T(cols[first][i], first + 1 < cols.size() ? cols[first + 1][i] : 0.0);
    else
      g[i] = cols[first][i];
  }
}

template <class V>
V from_columns(const V& zero, const std::vector<std::vector<double>>& cols) {
  V v = zero;
  if constexpr (requires { v.phi; }) {
    if (cols.size() < 2) throw ConfigError("wave state files need phi and psi columns");
    fill_from_columns(v.phi, cols, 0);
    fill_from_columns(v.psi, {cols[1]}, 0);
  } else {
    fill_from_columns(v, cols, 0);
  }
  return v;
}

}  // namespace detail

template <SystemModel M>
typename M::State make_state(const M& m, const DataSpec& s, Rng rng) {
  auto xn = [&](const auto& z) { return m.x_norm(z); };
  switch (s.kind) {
    case DataSpec::Kind::Zero: return m.zero_state();
    case DataSpec::Kind::Eigenmode:
      if (s.k < 1 || s.k > m.size()) throw ConfigError("eigenmode index out of range");
      return m.eigenmode(s.k, s.amp);
    case DataSpec::Kind::RandomSmooth: return scaled_to(m.random_state(rng, FieldShape::RandomSmooth), s.amp, xn);
    case DataSpec::Kind::File: return detail::from_columns(m.zero_state(), read_profile_columns(s.path, m.size()));
    default: throw ConfigError("z0: burst and exp_decay describe inputs, not states");
  }
}

template <SystemModel M>
InputSignal<typename M::Input> make_input_signal(const M& m, const DataSpec& s, double t_final, double dt, Rng rng) {
  using Input = typename M::Input;
  if (s.kind == DataSpec::Kind::Zero) return InputSignal<Input>::zero(dt);
  const std::size_t count = steps_to(t_final, dt) + 1;
  auto un = [&](const Input& u) { return m.u_norm(u); };
  Input profile = m.zero_input();
  if (s.kind == DataSpec::Kind::File) {
    profile = detail::from_columns(m.zero_input(), read_profile_columns(s.path, m.size()));
  } else if (s.kind == DataSpec::Kind::RandomSmooth) {
    profile = scaled_to(m.random_input(rng, FieldShape::RandomSmooth), s.amp, un);
  } else {
    if (s.k < 1 || s.k > m.size()) throw ConfigError("eigenmode index out of range");
    profile = sine_mode<typename Input::value_type>(m.size(), s.k);
    profile = scaled_to(std::move(profile), s.amp, un);
  }
  switch (s.kind) {
    case DataSpec::Kind::Burst: {
      const double t0 = s.t0, t1 = s.t1;
      return InputSignal<Input>::separable(profile, count, dt, [=](double t) { return t >= t0 && t < t1 ? 1.0 : 0.0; });
    }
    case DataSpec::Kind::ExpDecay: {
      const double r = s.rate;
      return InputSignal<Input>::separable(profile, count, dt, [=](double t) { return std::exp(-r * t); });
    }
    default: return InputSignal<Input>::separable(profile, count, dt, [](double) { return 1.0; });
  }
}

}  // namespace issl::cli
