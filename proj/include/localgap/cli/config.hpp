#pragma once

// Scan configuration: `key = value` text files plus command-line overrides.
// The grammar is documented in docs/formats.md.

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include "localgap/dirichlet.hpp"
#include "localgap/gap.hpp"
#include "localgap/oracle/gap_measure.hpp"
#include "localgap/transmission.hpp"
#include "localgap/errors.hpp"

namespace localgap::cli {

/// Invalid configuration; field() names the offending key.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string field, const std::string& what)
      : ValidationError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Ordered raw key/value pairs.
using ConfigMap = std::map<std::string, std::string>;

/// Parses the `key = value` grammar. Duplicate keys and malformed lines are errors.
ConfigMap parse_config_text(std::istream& in);
ConfigMap read_config_file(const std::filesystem::path& path);

enum class ShapeKind { Sphere, Ellipsoid, Mesh };

struct ScanConfig {
  ProblemKind problem = ProblemKind::Dirichlet;
  WaveVector k0{0.0, 0.0, 0.5};
  LatticeShift m0{0, 0, 1};
  /// Non-exceptional point used for the unsplit-shift comparison rows.
  WaveVector k_generic{0.2, 0.1, 0.15};

  // Inclusion.
  double a = 0.1;
  ShapeKind shape = ShapeKind::Sphere;
  double axes[3] = {1.0, 1.0, 1.0};
  std::filesystem::path mesh;
  std::optional<double> q;  ///< explicit shape factor; otherwise computed from the shape

  transmission::MaterialSpec materials;
  double delta0 = 0.1;

  double c = 1.0;  ///< output scale only

  double delta_tilde_min = -0.05;
  double delta_tilde_max = 0.05;
  int samples = 101;

  // Oracle.
  int fd_n = 48;
  int g_max = 3;
  int count = 8;
  int oracle_samples = 5;     ///< δ grid size for measured gaps (odd, symmetric)
  double oracle_delta = 0.02; ///< δ grid half-width
  bool verify = false;
  std::uint64_t seed = 0x5eed;

  std::filesystem::path output_dir = ".";

  /// Physical parameter bundle for the oracle; q must already be resolved.
  oracle::PhysicalParams physical(double q_value) const;
  dirichlet::DirichletParams dirichlet_params(double q_value) const;
  transmission::TransmissionParams transmission_params() const;
  oracle::OracleResolution resolution() const;
  std::vector<double> oracle_deltas() const;
};

/// Builds and validates a configuration. Every failure is a ConfigError
/// naming the key at fault.
ScanConfig build_config(const ConfigMap& values);

/// Shape factor for the configured inclusion (explicit q, sphere, ellipsoid or mesh BEM).
double resolve_q(const ScanConfig& cfg);

}  // namespace localgap::cli
