#include "issl/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "issl/certify/iss.hpp"
#include "issl/cli/csv.hpp"
#include "issl/cli/specs.hpp"
#include "issl/linsys/linsys.hpp"
#include "issl/picard/picard.hpp"

namespace issl::cli {
namespace fs = std::filesystem;

namespace {

// Child streams of the run seed, one per purpose.
enum Stream : std::uint64_t { kZ0 = 1, kU1 = 2, kSearch = 3, kCertify = 4 };

std::string join(const fs::path& dir, const std::string& file) { return (dir / file).string(); }

fs::path prepare_dir(const std::string& out_dir) {
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + out_dir + ": " + ec.message());
  return dir;
}

template <SystemModel M>
double resolve_omega(const M& m, const RunConfig& c) {
  const double w = c.omega.is_auto() ? 0.25 * m.decay_rate() : c.omega.value;
  if (!(w > 0.0 && w < m.decay_rate()))
    throw ConfigError("omega must lie in (0, " + format_double(m.decay_rate()) + ") for " + m.info().name);
  return w;
}

template <class T>
void state_columns(const GridFunction<T>& g, std::vector<std::string>& header, std::vector<std::vector<double>>& cols,
                   const std::string& name) {
  std::vector<double> re(g.size()), im(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if constexpr (is_complex_v<T>) {
      re[i] = g[i].real();
      im[i] = g[i].imag();
    } else {
      re[i] = g[i];
    }
  }
  header.push_back(name);
  cols.push_back(std::move(re));
  if constexpr (is_complex_v<T>) {
    header.push_back(name + "_imag");
    cols.push_back(std::move(im));
  }
}

template <class State>
void write_state(const std::string& path, const State& z) {
  std::vector<std::string> header{"x"};
  std::vector<std::vector<double>> cols;
  std::vector<double> xs;
  if constexpr (requires { z.phi; }) {
    state_columns(z.phi, header, cols, "phi");
    state_columns(z.psi, header, cols, "psi");
    for (std::size_t i = 0; i < z.phi.size(); ++i) xs.push_back(z.phi.x(i));
  } else {
    state_columns(z, header, cols, "value");
    for (std::size_t i = 0; i < z.size(); ++i) xs.push_back(z.x(i));
  }
  CsvWriter w(path, header);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<Cell> row{xs[i]};
    for (const auto& c : cols) row.emplace_back(c[i]);
    w.row(row);
  }
}

template <class State>
void write_trajectory(const std::string& path, const Trajectory<State>& traj) {
  CsvWriter w(path, {"t", "x_norm", "y_norm", "energy", "blowup_flag"});
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const bool blown = traj.blowup_step && j >= *traj.blowup_step;
    w.row({traj.times[j], traj.x_norms[j], traj.y_norms[j], 0.5 * traj.x_norms[j] * traj.x_norms[j], blown ? 1 : 0});
  }
}

template <SystemModel M>
double data_norm(const M& m, const typename M::State& z0, const InputSignal<typename M::Input>& u1, double omega,
                 double t_final, double dt) {
  const auto un = sample_norms(u1, [&](const auto& s) { return m.u_norm(s); });
  return m.x_norm(z0) + weighted_l2_from_norms(un, dt, omega, t_final);
}

class Summary {
 public:
  void add(const std::string& key, Cell value) { rows_.emplace_back(key, std::move(value.text)); }
  void write(const std::string& path) const {
    CsvWriter w(path, {"key", "value"});
    for (const auto& [k, v] : rows_) w.row({k, v});
  }
  void print(std::ostream& os) const {
    for (const auto& [k, v] : rows_) os << k << " = " << v << '\n';
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

}  // namespace

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir, Exec) {
  const auto dir = prepare_dir(out_dir);
  return visit_model(cfg, [&](const auto& m) {
    const Rng base(cfg.seed);
    const auto z0 = make_state(m, parse_spec(cfg.z0), base.split(kZ0));
    const auto u1 = make_input_signal(m, parse_spec(cfg.u1), cfg.t_final, cfg.dt, base.split(kU1));
    const auto traj = simulate_semilinear(m, z0, u1, cfg.t_final, cfg.dt);
    write_trajectory(join(dir, "trajectory.csv"), traj);
    for (std::size_t j = 0; j < traj.size(); ++j)
      if (j % cfg.snapshot_every == 0 || j + 1 == traj.size())
        write_state(join(dir, "state_" + std::to_string(j) + ".csv"), traj.states[j]);
    Summary s;
    s.add("model", m.info().name);
    s.add("steps", traj.size() - 1);
    s.add("final_x_norm", traj.x_norms.back());
    s.add("blowup", traj.blowup_step ? 1 : 0);
    if (traj.blowup_step) s.add("blowup_step", *traj.blowup_step);
    s.write(join(dir, "summary.csv"));
    s.print(std::cout);
    return static_cast<int>(kOk);
  });
}

int cmd_picard(const RunConfig& cfg, const std::string& out_dir, Exec exec) {
  const auto dir = prepare_dir(out_dir);
  return visit_model(cfg, [&](const auto& m) {
    const Rng base(cfg.seed);
    const double omega = resolve_omega(m, cfg);
    auto z0 = make_state(m, parse_spec(cfg.z0), base.split(kZ0));
    auto u1 = make_input_signal(m, parse_spec(cfg.u1), cfg.t_final, cfg.dt, base.split(kU1));
    const double data = data_norm(m, z0, u1, omega, cfg.t_final, cfg.dt);

    Summary s;
    s.add("model", m.info().name);
    s.add("omega", omega);
    double eps = 0.0;
    double factor = 1.0;
    if (cfg.epsilon.is_inf()) throw ConfigError("picard needs a finite epsilon (or auto)");
    if (cfg.epsilon.is_auto()) {
      EpsilonSearch search;
      search.ensemble = cfg.search_ensemble;
      search.max_iter = cfg.max_iter;
      try {
        eps = find_epsilon(m, omega, cfg.t_final, cfg.dt, base.split(kSearch), search, exec);
      } catch (const EpsilonNotFound& e) {
        s.add("status", "epsilon_not_found");
        s.add("smallest_epsilon_tried", e.smallest_tried);
        s.write(join(dir, "summary.csv"));
        s.print(std::cout);
        return static_cast<int>(kDiverged);
      }
      // Data larger than the found radius is shrunk onto its boundary.
      if (data > eps) {
        factor = eps / data;
        z0 *= factor;
        u1 *= factor;
      }
      s.add("epsilon_source", "find_epsilon");
    } else {
      eps = cfg.epsilon.value;
      if (data > eps * (1.0 + 1e-12))
        throw ConfigError("data norm " + format_double(data) + " exceeds epsilon " + format_double(eps));
      s.add("epsilon_source", "config");
    }
    s.add("epsilon", eps);
    s.add("data_norm", data * factor);
    s.add("data_scale_factor", factor);

    PicardConfig pc{omega, eps, cfg.tol, cfg.max_iter, false};
    const auto res = picard_solve(m, z0, u1, pc, cfg.t_final, cfg.dt);
    {
      CsvWriter w(join(dir, "picard.csv"), {"iteration", "increment_weighted_norm", "contraction_ratio", "in_ball"});
      for (std::size_t k = 0; k < res.increments.size(); ++k)
        w.row({k + 1, res.increments[k], res.contraction_ratios[k], res.in_ball[k] ? 1 : 0});
    }
    write_trajectory(join(dir, "trajectory.csv"), res.trajectory);
    s.add("status", to_string(res.status));
    s.add("iterations", res.iterations);
    s.add("final_increment", res.increments.empty() ? 0.0 : res.increments.back());
    s.add("envelope_k", res.envelope_k);
    s.write(join(dir, "summary.csv"));
    s.print(std::cout);
    const bool failed = res.status == PicardStatus::Diverged || res.status == PicardStatus::MaxIter;
    return static_cast<int>(failed ? kDiverged : kOk);
  });
}

int cmd_certify(const RunConfig& cfg, const std::string& out_dir, Exec exec) {
  const auto dir = prepare_dir(out_dir);
  return visit_model(cfg, [&](const auto& m) {
    const Rng base(cfg.seed);
    const double omega = resolve_omega(m, cfg);
    double eps = 0.0;
    if (cfg.epsilon.is_inf()) {
      eps = std::numeric_limits<double>::infinity();
    } else if (cfg.epsilon.is_auto()) {
      EpsilonSearch search;
      search.ensemble = cfg.search_ensemble;
      search.max_iter = cfg.max_iter;
      try {
        eps = find_epsilon(m, omega, cfg.t_final, cfg.dt, base.split(kSearch), search, exec);
      } catch (const EpsilonNotFound& e) {
        std::cerr << e.what() << '\n';
        return static_cast<int>(kDiverged);
      }
    } else {
      eps = cfg.epsilon.value;
    }

    IssOptions o;
    if (cfg.nu.kind == AutoValue::Kind::Value) o.nu_override = cfg.nu.value;
    if (cfg.c.kind == AutoValue::Kind::Value) o.c_override = cfg.c.value;
    o.k_samples = cfg.k_samples;
    o.input_scale = cfg.input_scale;
    o.state_amplitude = cfg.state_amplitude;
    o.input_amplitude = cfg.input_amplitude;
    o.exec = exec;
    const auto cert = certify_iss(m, omega, eps, cfg.ensemble, cfg.t_final, cfg.dt, base.split(kCertify), o);

    std::string seeds;
    for (auto sd : cert.blowup_seeds) seeds += (seeds.empty() ? "" : ";") + std::to_string(sd);
    {
      CsvWriter w(join(dir, "certificate.csv"),
                  {"model", "formula", "nu", "c_proof", "c_empirical", "c0", "mu", "delta", "K", "epsilon", "omega",
                   "ensemble", "worst_margin", "tolerance", "violated", "blowups", "blowup_seeds", "lyapunov_worst",
                   "lyapunov_violations"});
      w.row({m.info().name, cert.formula, cert.nu, cert.c, cert.c_empirical, cert.c0, cert.mu, cert.delta, cert.K,
             cert.epsilon, cert.omega, cert.ensemble_size, cert.worst_margin, cert.tolerance, cert.violated ? 1 : 0,
             cert.blowups, seeds.empty() ? std::string("-") : seeds, cert.lyapunov_worst, cert.lyapunov_violations});
    }
    {
      CsvWriter w(join(dir, "margins.csv"), {"run_id", "t", "lhs", "rhs", "margin"});
      std::size_t steps = 0;
      for (const auto& r : cert.runs) steps = std::max(steps, r.t.size());
      for (std::size_t j = 0; j < steps; ++j) {
        if (j % cfg.margin_stride != 0 && j + 1 != steps) continue;
        for (const auto& r : cert.runs)
          if (j < r.t.size()) w.row({r.member, r.t[j], r.lhs[j], r.rhs[j], r.rhs[j] - r.lhs[j]});
      }
    }
    std::cout << "model = " << m.info().name << "\nformula = " << cert.formula << "\nnu = " << format_double(cert.nu)
              << "\nc_proof = " << format_double(cert.c) << "\nc_empirical = " << format_double(cert.c_empirical)
              << "\nepsilon = " << format_double(cert.epsilon) << "\nworst_margin = " << format_double(cert.worst_margin)
              << "\nviolated = " << (cert.violated ? "true" : "false") << '\n';
    return static_cast<int>(cert.violated ? kViolated : kOk);
  });
}

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, Exec exec) {
  const auto dir = prepare_dir(out_dir);
  std::size_t points = 1;
  for (const auto& [key, values] : cfg.sweep) points *= values.size();

  std::vector<RunConfig> configs(points, cfg);
  std::vector<std::vector<std::string>> chosen(points);
  for (std::size_t i = 0; i < points; ++i) {
    configs[i].sweep.clear();
    std::size_t rest = i;
    // Last key varies fastest.
    std::vector<std::size_t> idx(cfg.sweep.size());
    for (std::size_t k = cfg.sweep.size(); k-- > 0;) {
      idx[k] = rest % cfg.sweep[k].second.size();
      rest /= cfg.sweep[k].second.size();
    }
    for (std::size_t k = 0; k < cfg.sweep.size(); ++k) {
      const auto& [key, values] = cfg.sweep[k];
      const auto dot = key.find('.');
      set_config_value(configs[i], key.substr(0, dot), key.substr(dot + 1), values[idx[k]]);
      chosen[i].push_back(values[idx[k]]);
    }
  }

  auto point_name = [](std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "point_%03zu", i);
    return std::string(buf);
  };
  std::vector<int> codes(points, 0);
  const Exec inner = exec.jobs != 1 && points > 1 ? Exec::serial() : exec;
  parallel_for(points, exec, [&](std::size_t i) {
    const auto sub = dir / point_name(i);
    fs::create_directories(sub);
    std::ofstream(sub / "config.ini", std::ios::binary) << serialize_config(configs[i]);
    codes[i] = run_command(cfg.sweep_command, configs[i], sub.string(), inner);
  });

  std::vector<std::string> header{"point"};
  for (const auto& [key, values] : cfg.sweep) header.push_back(key);
  header.push_back("exit_code");
  CsvWriter w(join(dir, "sweep_summary.csv"), header);
  int worst = 0;
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<Cell> row{point_name(i)};
    for (const auto& v : chosen[i]) row.emplace_back(v);
    row.emplace_back(codes[i]);
    w.row(row);
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int run_command(const std::string& name, const RunConfig& cfg, const std::string& out_dir, Exec exec) {
  try {
    if (name == "simulate") return cmd_simulate(cfg, out_dir, exec);
    if (name == "picard") return cmd_picard(cfg, out_dir, exec);
    if (name == "certify") return cmd_certify(cfg, out_dir, exec);
    if (name == "sweep") return cmd_sweep(cfg, out_dir, exec);
    throw ConfigError("unknown command '" + name + "'");
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid setting: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
}

}  // namespace issl::cli
