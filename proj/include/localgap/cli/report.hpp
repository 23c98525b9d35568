#pragma once

// Gap report written by `bandscan gap`. JSON, schema in docs/formats.md.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "localgap/gap.hpp"

namespace localgap::cli {

inline constexpr int kReportSchemaVersion = 1;

struct Interval {
  double lo_over_c = 0.0;
  double hi_over_c = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct DirichletSummary {
  double a = 0.0;
  double q = 1.0;
  double a_tilde = 0.0;
  std::optional<double> nu_minus;  // defined for ν ≤ 1
  std::optional<double> nu_plus;
  friend bool operator==(const DirichletSummary&, const DirichletSummary&) = default;
};

struct TransmissionSummary {
  double a = 0.0;
  double f = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double sigma = 1.0;
  double mu = 0.0;
  double center_over_c = 0.0;  ///< |k̃₀|
  friend bool operator==(const TransmissionSummary&, const TransmissionSummary&) = default;
};

struct GapReport {
  int schema_version = kReportSchemaVersion;
  std::string problem;
  std::array<double, 3> k0{};
  std::array<std::int64_t, 3> m0{};
  double c = 1.0;
  std::string verdict;
  double ratio = 0.0;
  double nu = 0.0;
  std::string status;
  std::optional<DirichletSummary> dirichlet;
  std::optional<TransmissionSummary> transmission;
  std::optional<Interval> predicted;
  std::optional<Interval> measured;
  std::optional<std::string> oracle_resolution;
  /// max edge error of the measured gap over the predicted width
  std::optional<double> relative_discrepancy;
  std::optional<std::string> oracle_error;

  friend bool operator==(const GapReport&, const GapReport&) = default;
};

nlohmann::json to_json(const GapReport& r);
/// Throws ValidationError on missing fields or an unknown schema version.
GapReport report_from_json(const nlohmann::json& j);

std::string dump_report(const GapReport& r);
GapReport parse_report(const std::string& text);

}  // namespace localgap::cli
