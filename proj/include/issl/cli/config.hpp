#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace issl::cli {

/// Bad or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A real-valued key that may also read "auto" (and, for epsilon, "inf").
struct AutoValue {
  enum class Kind { Auto, Inf, Value };
  Kind kind = Kind::Auto;
  double value = 0.0;

  static AutoValue automatic() { return {}; }
  static AutoValue of(double v) { return {Kind::Value, v}; }
  bool is_auto() const { return kind == Kind::Auto; }
  bool is_inf() const { return kind == Kind::Inf; }
  bool operator==(const AutoValue&) const = default;
};

struct RunConfig {
  // [model]
  std::string model = "burgers_h1";
  std::size_t n = 64;
  AutoValue p;                 // auto: the model's shipped exponent
  bool feedback = true;        // false: N-off linear variant

  // [run]
  double dt = 1e-3;
  double t_final = 5.0;
  AutoValue omega;             // auto: a quarter of the decay rate of A
  AutoValue epsilon;           // auto: find_epsilon; inf: no smallness (global models)
  std::uint64_t seed = 1;

  // [picard]
  double tol = 1e-10;
  std::size_t max_iter = 30;
  std::size_t search_ensemble = 20;

  // [certify]
  std::size_t ensemble = 100;
  std::size_t k_samples = 2000;
  AutoValue nu;                // auto: proof formula
  AutoValue c;
  double input_scale = 1.0;
  double state_amplitude = 10.0;
  double input_amplitude = 10.0;
  std::size_t margin_stride = 10;

  // [simulate]
  std::string z0 = "eigenmode:1:1";
  std::string u1 = "zero";
  std::size_t snapshot_every = 1000;

  // [sweep]
  std::string sweep_command = "certify";
  /// "section.key" -> values, in file order.
  std::vector<std::pair<std::string, std::vector<std::string>>> sweep;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// Sets one "section.key" to a textual value, with the same validation as
/// parsing (used by sweep).
void set_config_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value);

}  // namespace issl::cli
