#pragma once

// bandscan subcommands. run() is the whole program minus main(), so tests can
// drive it in-process and check exit codes and output.

#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "localgap/cli/config.hpp"
#include "localgap/cli/report.hpp"
#include "localgap/gap.hpp"

namespace localgap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Building blocks, exposed for tests.

struct GapPrediction {
  GapReport report;
  BranchCurve curve;
};

/// Asymptotic report and branch samples; no oracle work.
GapPrediction predict_gap(const ScanConfig& cfg, double q);

/// Runs measure_gap_numeric and fills the measured fields of the report.
void attach_measurement(const ScanConfig& cfg, double q, GapReport& report);

/// Rejects oracle settings that cannot resolve the configured inclusion.
void validate_oracle(const ScanConfig& cfg);

void write_branch_csv(std::ostream& os, const BranchCurve& curve);

struct CompareRow {
  std::string quantity;
  double asymptotic = 0.0;
  double numeric = 0.0;
  double rel_diff = 0.0;
};

/// |numeric − asymptotic| / |asymptotic|, or the absolute difference when the
/// asymptotic value is zero.
double relative_difference(double asymptotic, double numeric);

std::vector<CompareRow> oracle_compare(const ScanConfig& cfg, double q);
void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows);

struct GlobalScanPoint {
  double omega_over_c = 0.0;
  WaveVector k;
  double epsilon = 0.0;
  double residual = 0.0;  ///< |(1 + ε(k))|k| − ω/c| / (ω/c)
  int perturbations = 0;  ///< direction nudges needed to avoid an exceptional point
};

struct GlobalScanResult {
  Eigen::Vector3d direction;
  std::vector<GlobalScanPoint> points;
  double max_residual = 0.0;
  int perturbed = 0;
};

/// Default ray direction, ∝ (1, √2, π).
Eigen::Vector3d generic_direction();

/// For each ω/c on the grid, finds k on the ray with (1 + ε(k))|k| = ω/c.
GlobalScanResult global_scan(const ScanConfig& cfg, double q, double omega_lo, double omega_hi, int samples,
                             const Eigen::Vector3d& direction);

}  // namespace localgap::cli
