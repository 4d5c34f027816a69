#include "issl/cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "issl/cli/csv.hpp"

namespace issl::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite real, got '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  if (v.empty() || v[0] == '-') throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size() || errno == ERANGE)
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

AutoValue parse_auto(const std::string& key, const std::string& v, bool allow_inf) {
  if (v == "auto") return AutoValue::automatic();
  if (allow_inf && v == "inf") return {AutoValue::Kind::Inf, 0.0};
  return AutoValue::of(parse_real(key, v));
}

std::string show_auto(const AutoValue& a) {
  switch (a.kind) {
    case AutoValue::Kind::Auto: return "auto";
    case AutoValue::Kind::Inf: return "inf";
    case AutoValue::Kind::Value: return format_double(a.value);
  }
  return "auto";
}

struct Field {
  const char* section;
  const char* key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <class T>
Field real_field(const char* sec, const char* key, T RunConfig::*mem, bool positive) {
  return {sec, key,
          [=](RunConfig& c, const std::string& v) {
            const double x = parse_real(key, v);
            if (positive && !(x > 0.0)) throw ConfigError(std::string(key) + ": must be positive");
            c.*mem = x;
          },
          [=](const RunConfig& c) { return format_double(c.*mem); }};
}

Field size_field(const char* sec, const char* key, std::size_t RunConfig::*mem, std::size_t min) {
  return {sec, key,
          [=](RunConfig& c, const std::string& v) {
            const auto x = parse_u64(key, v);
            if (x < min) throw ConfigError(std::string(key) + ": must be >= " + std::to_string(min));
            c.*mem = static_cast<std::size_t>(x);
          },
          [=](const RunConfig& c) { return std::to_string(c.*mem); }};
}

Field string_field(const char* sec, const char* key, std::string RunConfig::*mem) {
  return {sec, key, [=](RunConfig& c, const std::string& v) { c.*mem = v; },
          [=](const RunConfig& c) { return c.*mem; }};
}

Field auto_field(const char* sec, const char* key, AutoValue RunConfig::*mem, bool allow_inf) {
  return {sec, key, [=](RunConfig& c, const std::string& v) { c.*mem = parse_auto(key, v, allow_inf); },
          [=](const RunConfig& c) { return show_auto(c.*mem); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"model", "name",
       [](RunConfig& c, const std::string& v) {
         if (v != "burgers_h1" && v != "burgers_l2" && v != "schrodinger" && v != "wave")
           throw ConfigError("name: unknown model '" + v + "'");
         c.model = v;
       },
       [](const RunConfig& c) { return c.model; }},
      size_field("model", "n", &RunConfig::n, 2),
      auto_field("model", "p", &RunConfig::p, false),
      {"model", "feedback", [](RunConfig& c, const std::string& v) { c.feedback = parse_bool("feedback", v); },
       [](const RunConfig& c) { return std::string(c.feedback ? "true" : "false"); }},
      real_field("run", "dt", &RunConfig::dt, true),
      real_field("run", "t_final", &RunConfig::t_final, true),
      auto_field("run", "omega", &RunConfig::omega, false),
      auto_field("run", "epsilon", &RunConfig::epsilon, true),
      {"run", "seed", [](RunConfig& c, const std::string& v) { c.seed = parse_u64("seed", v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      real_field("picard", "tol", &RunConfig::tol, true),
      size_field("picard", "max_iter", &RunConfig::max_iter, 1),
      size_field("picard", "search_ensemble", &RunConfig::search_ensemble, 1),
      size_field("certify", "ensemble", &RunConfig::ensemble, 1),
      size_field("certify", "k_samples", &RunConfig::k_samples, 1),
      auto_field("certify", "nu", &RunConfig::nu, false),
      auto_field("certify", "c", &RunConfig::c, false),
      real_field("certify", "input_scale", &RunConfig::input_scale, false),
      real_field("certify", "state_amplitude", &RunConfig::state_amplitude, false),
      real_field("certify", "input_amplitude", &RunConfig::input_amplitude, false),
      size_field("certify", "margin_stride", &RunConfig::margin_stride, 1),
      string_field("simulate", "z0", &RunConfig::z0),
      string_field("simulate", "u1", &RunConfig::u1),
      size_field("simulate", "snapshot_every", &RunConfig::snapshot_every, 1),
      {"sweep", "command",
       [](RunConfig& c, const std::string& v) {
         if (v != "simulate" && v != "picard" && v != "certify")
           throw ConfigError("command: sweep runs simulate, picard or certify, not '" + v + "'");
         c.sweep_command = v;
       },
       [](const RunConfig& c) { return c.sweep_command; }},
  };
  return f;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const auto& f : fields())
    if (section == f.section && key == f.key) return &f;
  return nullptr;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

void set_config_value(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value) {
  const Field* f = find_field(section, key);
  if (!f || section == "sweep") throw ConfigError("unknown key [" + section + "] " + key);
  f->set(cfg, value);
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "run" && section != "picard" && section != "certify" &&
          section != "simulate" && section != "sweep")
        throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (section == "sweep" && key != "command") {
        const auto dot = key.find('.');
        if (dot == std::string::npos) throw ConfigError("sweep keys are written section.key");
        const std::string s = key.substr(0, dot), k = key.substr(dot + 1);
        if (!find_field(s, k) || s == "sweep") throw ConfigError("unknown key [" + s + "] " + k);
        auto values = split_list(value);
        if (values.empty() || std::any_of(values.begin(), values.end(), [](const auto& v) { return v.empty(); }))
          throw ConfigError(key + ": empty value list");
        RunConfig probe;
        for (const auto& v : values) set_config_value(probe, s, k, v);
        auto it = std::find_if(cfg.sweep.begin(), cfg.sweep.end(), [&](const auto& e) { return e.first == key; });
        if (it != cfg.sweep.end()) throw ConfigError("duplicate sweep key " + key);
        cfg.sweep.emplace_back(key, std::move(values));
        continue;
      }
      const Field* f = find_field(section, key);
      if (!f) throw ConfigError("unknown key [" + section + "] " + key);
      f->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get(cfg) << '\n';
  }
  for (const auto& [key, values] : cfg.sweep) {
    out << key << " = ";
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? ", " : "") << values[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace issl::cli
