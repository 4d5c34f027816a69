#pragma once

#include <string>
#include <utility>

#include "issl/cli/config.hpp"
#include "issl/core/parallel.hpp"
#include "issl/models/burgers.hpp"
#include "issl/models/schrodinger.hpp"
#include "issl/models/wave.hpp"

namespace issl::cli {

enum ExitCode : int { kOk = 0, kError = 1, kConfigError = 2, kViolated = 3, kDiverged = 4 };

/// Calls f with the configured model, or its linear part when feedback is off.
template <class F>
decltype(auto) visit_model(const RunConfig& c, F&& f) {
  auto go = [&](auto model) -> decltype(auto) {
    if (c.feedback) return f(model);
    return f(Linearized<decltype(model)>(std::move(model)));
  };
  const bool custom_p = c.p.kind == AutoValue::Kind::Value;
  if (c.model == "burgers_h1") return go(custom_p ? BurgersH1(c.n, c.p.value) : BurgersH1(c.n));
  if (c.model == "burgers_l2") return go(custom_p ? BurgersL2(c.n, c.p.value) : BurgersL2(c.n));
  if (c.model == "schrodinger") return go(custom_p ? Schrodinger(c.n, c.p.value) : Schrodinger(c.n));
  if (c.model == "wave") return go(custom_p ? Wave(c.n, c.p.value) : Wave(c.n));
  throw ConfigError("unknown model '" + c.model + "'");
}

/// Each command writes into out_dir (created if missing) and returns an
/// ExitCode. Outputs depend only on the config, so reruns are byte-identical.
int cmd_simulate(const RunConfig& cfg, const std::string& out_dir, Exec exec = {});
int cmd_picard(const RunConfig& cfg, const std::string& out_dir, Exec exec = {});
int cmd_certify(const RunConfig& cfg, const std::string& out_dir, Exec exec = {});
int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, Exec exec = {});

/// Dispatch by name, mapping configuration and precondition errors to exit
/// code 2 with a message on stderr.
int run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir, Exec exec = {});

}  // namespace issl::cli
