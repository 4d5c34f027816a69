#include "issl/cli/specs.hpp"

#include <cerrno>
#include <cstdlib>
#include <sstream>

#include "issl/cli/csv.hpp"

namespace issl::cli {
namespace {

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) out.push_back(item);
  return out;
}

double real_arg(const std::string& spec, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
    throw ConfigError("bad number '" + v + "' in data spec '" + spec + "'");
  return x;
}

}  // namespace

DataSpec parse_spec(const std::string& text) {
  DataSpec s;
  if (text.rfind("file:", 0) == 0) {
    s.kind = DataSpec::Kind::File;
    s.path = text.substr(5);
    if (s.path.empty()) throw ConfigError("file: spec needs a path");
    return s;
  }
  const auto parts = split_colon(text);
  auto need = [&](std::size_t n) {
    if (parts.size() != n) throw ConfigError("data spec '" + text + "' expects " + std::to_string(n - 1) + " arguments");
  };
  const std::string& head = parts.empty() ? text : parts[0];
  if (head == "zero") {
    need(1);
  } else if (head == "eigenmode") {
    need(3);
    const double k = real_arg(text, parts[1]);
    if (k < 1.0 || k != std::floor(k)) throw ConfigError("eigenmode index must be a positive integer");
    s.kind = DataSpec::Kind::Eigenmode;
    s.k = static_cast<std::size_t>(k);
    s.amp = real_arg(text, parts[2]);
  } else if (head == "random_smooth") {
    need(2);
    s.kind = DataSpec::Kind::RandomSmooth;
    s.amp = real_arg(text, parts[1]);
  } else if (head == "burst") {
    need(4);
    s.kind = DataSpec::Kind::Burst;
    s.t0 = real_arg(text, parts[1]);
    s.t1 = real_arg(text, parts[2]);
    s.amp = real_arg(text, parts[3]);
    if (!(s.t1 > s.t0)) throw ConfigError("burst needs t1 > t0");
  } else if (head == "exp_decay") {
    need(3);
    s.kind = DataSpec::Kind::ExpDecay;
    s.rate = real_arg(text, parts[1]);
    s.amp = real_arg(text, parts[2]);
  } else {
    throw ConfigError("unknown data spec '" + text + "'");
  }
  return s;
}

std::vector<std::vector<double>> read_profile_columns(const std::string& path, std::size_t n) {
  CsvTable t;
  try {
    t = read_csv(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (t.header.size() < 2) throw ConfigError(path + ": expected columns x and value");
  if (t.rows.size() != n)
    throw ConfigError(path + ": has " + std::to_string(t.rows.size()) + " rows, grid has " + std::to_string(n));
  std::vector<std::vector<double>> cols(t.header.size() - 1, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (t.rows[i].size() != t.header.size()) throw ConfigError(path + ": ragged row " + std::to_string(i + 2));
    for (std::size_t c = 1; c < t.header.size(); ++c) cols[c - 1][i] = real_arg(path, t.rows[i][c]);
  }
  return cols;
}

}  // namespace issl::cli
