#include "localgap/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

#include "localgap/capacitance.hpp"
#include "localgap/lattice.hpp"
#include "localgap/mesh.hpp"

namespace localgap::cli {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "problem",     "k0",          "m0",        "k_generic",       "a",
      "f",           "shape",       "axes",      "mesh",            "q",
      "gamma_plus",  "gamma_minus", "rho_plus",  "rho_minus",       "delta0",
      "c",           "delta_tilde_min", "delta_tilde_max", "samples", "oracle.fd_n",
      "oracle.g_max", "oracle.count", "oracle.samples", "oracle.delta", "verify",
      "seed",        "output_dir"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v))
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

// "x y z", "x,y,z" or "(x, y, z)".
std::vector<std::string> split_triple(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::vector<std::string> parts;
  for (std::string p; is >> p;) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError(key, "expected three components, got '" + text + "'");
  return parts;
}

WaveVector parse_vector(const std::string& key, const std::string& text) {
  const auto p = split_triple(key, text);
  return {parse_double(key, p[0]), parse_double(key, p[1]), parse_double(key, p[2])};
}

LatticeShift parse_shift(const std::string& key, const std::string& text) {
  const auto p = split_triple(key, text);
  try {
    return {parse_int(key, p[0]), parse_int(key, p[1]), parse_int(key, p[2])};
  } catch (const DomainError& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

ConfigMap parse_config_text(std::istream& in) {
  ConfigMap out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](char ch) {
          return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_' || ch == '.';
        }))
      throw ConfigError(where, "bad key '" + key + "'");
    if (value.empty()) throw ConfigError(key, "empty value");
    if (!out.emplace(key, value).second) throw ConfigError(key, "duplicate key");
  }
  return out;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  return parse_config_text(in);
}

ScanConfig build_config(const ConfigMap& values) {
  for (const auto& [k, v] : values)
    if (!known_keys().count(k)) throw ConfigError(k, "unknown key");
  auto get = [&](const std::string& k) -> const std::string* {
    const auto it = values.find(k);
    return it == values.end() ? nullptr : &it->second;
  };
  ScanConfig c;
  if (auto v = get("problem")) {
    if (*v == "dirichlet") c.problem = ProblemKind::Dirichlet;
    else if (*v == "transmission") c.problem = ProblemKind::Transmission;
    else throw ConfigError("problem", "expected dirichlet or transmission, got '" + *v + "'");
  }
  if (auto v = get("k0")) c.k0 = parse_vector("k0", *v);
  if (auto v = get("m0")) c.m0 = parse_shift("m0", *v);
  if (auto v = get("k_generic")) c.k_generic = parse_vector("k_generic", *v);
  if (auto v = get("shape")) {
    if (*v == "sphere") c.shape = ShapeKind::Sphere;
    else if (*v == "ellipsoid") c.shape = ShapeKind::Ellipsoid;
    else if (*v == "mesh") c.shape = ShapeKind::Mesh;
    else throw ConfigError("shape", "expected sphere, ellipsoid or mesh, got '" + *v + "'");
  }
  if (auto v = get("axes")) {
    const auto p = split_triple("axes", *v);
    for (int i = 0; i < 3; ++i) c.axes[i] = parse_double("axes", p[static_cast<std::size_t>(i)]);
  }
  if (auto v = get("mesh")) c.mesh = *v;
  if (auto v = get("q")) c.q = parse_double("q", *v);
  if (auto v = get("gamma_plus")) c.materials.gamma_plus = parse_double("gamma_plus", *v);
  if (auto v = get("gamma_minus")) c.materials.gamma_minus = parse_double("gamma_minus", *v);
  if (auto v = get("rho_plus")) c.materials.rho_plus = parse_double("rho_plus", *v);
  if (auto v = get("rho_minus")) c.materials.rho_minus = parse_double("rho_minus", *v);
  if (auto v = get("delta0")) c.delta0 = parse_double("delta0", *v);
  if (auto v = get("c")) c.c = parse_double("c", *v);
  if (auto v = get("delta_tilde_min")) c.delta_tilde_min = parse_double("delta_tilde_min", *v);
  if (auto v = get("delta_tilde_max")) c.delta_tilde_max = parse_double("delta_tilde_max", *v);
  if (auto v = get("samples")) c.samples = static_cast<int>(parse_int("samples", *v));
  if (auto v = get("oracle.fd_n")) c.fd_n = static_cast<int>(parse_int("oracle.fd_n", *v));
  if (auto v = get("oracle.g_max")) c.g_max = static_cast<int>(parse_int("oracle.g_max", *v));
  if (auto v = get("oracle.count")) c.count = static_cast<int>(parse_int("oracle.count", *v));
  if (auto v = get("oracle.samples")) c.oracle_samples = static_cast<int>(parse_int("oracle.samples", *v));
  if (auto v = get("oracle.delta")) c.oracle_delta = parse_double("oracle.delta", *v);
  if (auto v = get("verify")) c.verify = parse_bool("verify", *v);
  if (auto v = get("seed")) {
    const long long s = parse_int("seed", *v);
    if (s < 0) throw ConfigError("seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (auto v = get("output_dir")) c.output_dir = *v;

  // Inclusion size: a, or f for transmission spheres.
  const auto* a_text = get("a");
  const auto* f_text = get("f");
  if (a_text && f_text) throw ConfigError("f", "give either a or f, not both");
  if (a_text) c.a = parse_double("a", *a_text);
  if (f_text) {
    if (c.problem != ProblemKind::Transmission) throw ConfigError("f", "volume fraction applies to transmission only");
    const double f = parse_double("f", *f_text);
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("f", "must lie in (0, 1)");
    c.a = std::cbrt(f * kCellVolume * 3.0 / (4.0 * std::numbers::pi));
  }

  // Cross-field validation.
  if (c.k0.is_zero()) throw ConfigError("k0", "must be nonzero");
  try {
    require_order_two(c.k0, c.m0);
  } catch (const DomainError& e) {
    throw ConfigError("k0", e.what());
  }
  if (c.k_generic.is_zero() || lattice::classify_wavevector(c.k_generic).order != 1)
    throw ConfigError("k_generic", "must be a nonzero non-exceptional wave vector");
  if (!(c.c > 0.0)) throw ConfigError("c", "must be positive");
  if (!(c.delta0 > 0.0)) throw ConfigError("delta0", "must be positive");
  if (c.q && !(*c.q > 0.0)) throw ConfigError("q", "must be positive");
  if (c.shape == ShapeKind::Ellipsoid && !(c.axes[0] > 0 && c.axes[1] > 0 && c.axes[2] > 0))
    throw ConfigError("axes", "ellipsoid semi-axes must be positive");
  if (c.shape == ShapeKind::Mesh && c.mesh.empty()) throw ConfigError("mesh", "shape = mesh needs a mesh path");
  if (c.problem == ProblemKind::Transmission && c.shape != ShapeKind::Sphere)
    throw ConfigError("shape", "the transmission problem supports spheres only");
  if (c.problem == ProblemKind::Dirichlet) {
    try {
      c.dirichlet_params(c.q.value_or(1.0)).validate();
    } catch (const DomainError& e) {
      throw ConfigError("a", e.what());
    }
  } else {
    try {
      c.materials.validate();
    } catch (const DomainError& e) {
      throw ConfigError("materials", e.what());
    }
    if (!(c.a > 0.0 && c.a < std::numbers::pi)) throw ConfigError("a", "must lie in (0, pi)");
  }
  if (c.delta_tilde_min > c.delta_tilde_max) throw ConfigError("delta_tilde_min", "exceeds delta_tilde_max");
  if (std::max(std::abs(c.delta_tilde_min), std::abs(c.delta_tilde_max)) > c.delta0)
    throw ConfigError("delta_tilde_max", "delta range exceeds delta0");
  if (c.samples < 1) throw ConfigError("samples", "must be at least 1");
  if (c.fd_n < 16 || c.fd_n > 49) throw ConfigError("oracle.fd_n", "must lie in [16, 49]");
  if (c.g_max < 2 || std::pow(2 * c.g_max + 1, 3) > 12000) throw ConfigError("oracle.g_max", "must lie in [2, 10]");
  if (c.count < 2) throw ConfigError("oracle.count", "must be at least 2");
  if (c.oracle_samples < 1 || c.oracle_samples % 2 == 0) throw ConfigError("oracle.samples", "must be odd and positive");
  if (!(c.oracle_delta > 0.0)) throw ConfigError("oracle.delta", "must be positive");
  return c;
}

dirichlet::DirichletParams ScanConfig::dirichlet_params(double q_value) const {
  dirichlet::DirichletParams p;
  p.a = a;
  p.q = q_value;
  p.c = 1.0;  // frequencies stay in units of c; `c` scales output only
  p.delta0 = delta0;
  return p;
}

transmission::TransmissionParams ScanConfig::transmission_params() const {
  return transmission::TransmissionParams(materials, a, delta0);
}

oracle::PhysicalParams ScanConfig::physical(double q_value) const {
  if (problem == ProblemKind::Dirichlet) return dirichlet_params(q_value);
  return transmission_params();
}

oracle::OracleResolution ScanConfig::resolution() const {
  oracle::OracleResolution r;
  r.fd_n = fd_n;
  r.pwe_g_max = g_max;
  r.count = count;
  r.eig.seed = seed;
  return r;
}

std::vector<double> ScanConfig::oracle_deltas() const {
  if (oracle_samples == 1) return {0.0};
  return uniform_grid(-oracle_delta, oracle_delta, oracle_samples);
}

double resolve_q(const ScanConfig& cfg) {
  if (cfg.q) return *cfg.q;
  switch (cfg.shape) {
    case ShapeKind::Sphere:
      return 1.0;
    case ShapeKind::Ellipsoid: {
      double ax[3] = {cfg.axes[0], cfg.axes[1], cfg.axes[2]};
      std::sort(ax, ax + 3, std::greater<>());
      return capacitance_ellipsoid(ax[0], ax[1], ax[2]).q;
    }
    case ShapeKind::Mesh:
      try {
        return capacitance_bem(read_off_file(cfg.mesh.string())).q;
      } catch (const ValidationError& e) {
        throw ConfigError("mesh", e.what());
      }
  }
  return 1.0;
}

}  // namespace localgap::cli
