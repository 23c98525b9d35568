#include "localgap/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "CLI11.hpp"

#include "localgap/capacitance.hpp"
#include "localgap/dirichlet.hpp"
#include "localgap/errors.hpp"
#include "localgap/lattice.hpp"
#include "localgap/mesh.hpp"
#include "localgap/oracle/fd.hpp"
#include "localgap/oracle/gap_measure.hpp"
#include "localgap/oracle/pwe.hpp"
#include "localgap/parallel.hpp"
#include "localgap/transmission.hpp"

namespace localgap::cli {

namespace {

constexpr int kCsvPrecision = 12;

std::array<double, 3> to_array(const WaveVector& k) { return {k[0], k[1], k[2]}; }

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- gap report

GapPrediction predict_gap(const ScanConfig& cfg, double q) {
  GapPrediction out;
  GapReport& r = out.report;
  r.problem = std::string(to_string(cfg.problem));
  r.k0 = to_array(cfg.k0);
  r.m0 = cfg.m0.components();
  r.c = cfg.c;
  const auto adm = lattice::gap_admissible(cfg.k0, cfg.m0);
  r.verdict = std::string(lattice::to_string(adm.verdict));
  r.ratio = adm.ratio;
  r.nu = adm.nu;

  const bool boundary = adm.verdict == lattice::Verdict::BoundaryExcluded;
  const std::string nu_text = "no gap: nu = " + fmt(adm.nu) + " >= 1";
  const std::string boundary_text = "no gap: |k0|/|m0| inside the excluded band around sqrt(2)/2";

  if (cfg.problem == ProblemKind::Dirichlet) {
    const auto p = cfg.dirichlet_params(q);
    DirichletSummary d;
    d.a = p.a;
    d.q = p.q;
    d.a_tilde = dirichlet::a_tilde(p);
    if (adm.nu <= 1.0) {
      const auto [nm, np] = dirichlet::nu_pm(adm.nu);
      d.nu_minus = nm;
      d.nu_plus = np;
    }
    r.dirichlet = d;
    if (boundary) {
      r.status = boundary_text;
    } else if (adm.verdict == lattice::Verdict::NoGap) {
      r.status = nu_text;
    } else if (auto g = dirichlet::local_gap(cfg.k0, cfg.m0, p)) {
      r.status = "gap";
      r.predicted = Interval{g->lo_over_c, g->hi_over_c};
    } else {
      r.status = "no gap: zero splitting";
    }
    out.curve = dirichlet::dispersion_scan(cfg.k0, cfg.m0, p, cfg.delta_tilde_min, cfg.delta_tilde_max, cfg.samples);
  } else {
    const auto p = cfg.transmission_params();
    const auto mc = p.materials().coefficients();
    TransmissionSummary t;
    t.a = p.a();
    t.f = p.f();
    t.alpha = mc.alpha;
    t.beta = mc.beta;
    t.sigma = mc.sigma;
    t.mu = transmission::splitting_mu(cfg.k0, cfg.m0, p);
    t.center_over_c = transmission::shifted_center(cfg.k0, p);
    r.transmission = t;
    if (boundary) {
      r.status = boundary_text;
    } else {
      const auto g = transmission::local_gap_transmission(cfg.k0, cfg.m0, p);
      switch (g.status) {
        case transmission::GapStatus::Gap:
          r.status = "gap";
          r.predicted = Interval{g.interval->lo_over_c, g.interval->hi_over_c};
          break;
        case transmission::GapStatus::ZeroSplitting:
          r.status = "no gap: zero splitting";
          break;
        case transmission::GapStatus::NoGapNu:
          r.status = nu_text;
          break;
      }
    }
    out.curve = transmission::dispersion_scan_transmission(cfg.k0, cfg.m0, p, cfg.delta_tilde_min,
                                                           cfg.delta_tilde_max, cfg.samples);
  }
  return out;
}

void validate_oracle(const ScanConfig& cfg) {
  if (cfg.problem != ProblemKind::Dirichlet || cfg.a == 0.0) return;
  const oracle::FDGrid grid(cfg.fd_n, cfg.a);
  if (grid.nodes_across() < 4)
    throw ConfigError("oracle.fd_n", "n = " + std::to_string(cfg.fd_n) + " leaves " +
                                         std::to_string(grid.nodes_across()) + " grid nodes across a = " +
                                         fmt(cfg.a) + "; at least 4 are needed");
}

void attach_measurement(const ScanConfig& cfg, double q, GapReport& report) {
  const auto m = oracle::measure_gap_numeric(cfg.k0, cfg.m0, cfg.physical(q), cfg.resolution(), cfg.oracle_deltas());
  std::ostringstream res;
  if (cfg.problem == ProblemKind::Dirichlet)
    res << "fd n=" << cfg.fd_n;
  else
    res << "pwe g_max=" << cfg.g_max;
  res << " count=" << cfg.count << " deltas=" << cfg.oracle_samples << " in [-" << cfg.oracle_delta << ", "
      << cfg.oracle_delta << "]";
  report.oracle_resolution = res.str();
  if (m.gap) {
    report.measured = Interval{m.gap->first / m.c, m.gap->second / m.c};
    if (report.predicted) {
      const auto& p = *report.predicted;
      const double width = p.hi_over_c - p.lo_over_c;
      const double err = std::max(std::abs(report.measured->lo_over_c - p.lo_over_c),
                                  std::abs(report.measured->hi_over_c - p.hi_over_c));
      report.relative_discrepancy = err / width;
    }
  }
}

void write_branch_csv(std::ostream& os, const BranchCurve& curve) {
  os << "delta_tilde,omega_minus_over_c,omega_plus_over_c\n";
  os << std::setprecision(kCsvPrecision);
  for (const auto& s : curve.samples)
    os << s.delta_tilde << ',' << s.omega_minus_over_c << ',' << s.omega_plus_over_c << '\n';
}

// ------------------------------------------------------------ oracle compare

double relative_difference(double asymptotic, double numeric) {
  const double d = std::abs(numeric - asymptotic);
  return asymptotic != 0.0 ? d / std::abs(asymptotic) : d;
}

namespace {

CompareRow row(std::string name, double asymptotic, double numeric) {
  return {std::move(name), asymptotic, numeric, relative_difference(asymptotic, numeric)};
}

const oracle::BandSample& central_sample(const oracle::GapMeasurement& m) {
  return *std::min_element(m.samples.begin(), m.samples.end(),
                           [](const auto& x, const auto& y) { return std::abs(x.delta) < std::abs(y.delta); });
}

void add_gap_rows(std::vector<CompareRow>& rows, const std::optional<Interval>& predicted,
                  const oracle::GapMeasurement& m) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double plo = predicted ? predicted->lo_over_c : nan;
  const double phi = predicted ? predicted->hi_over_c : nan;
  const double mlo = m.gap ? m.gap->first / m.c : nan;
  const double mhi = m.gap ? m.gap->second / m.c : nan;
  rows.push_back(row("gap_lo_over_c", plo, mlo));
  rows.push_back(row("gap_hi_over_c", phi, mhi));
  rows.push_back(row("gap_width_over_c", phi - plo, mhi - mlo));
}

}  // namespace

std::vector<CompareRow> oracle_compare(const ScanConfig& cfg, double q) {
  validate_oracle(cfg);
  std::vector<CompareRow> rows;
  const WaveVector& kg = cfg.k_generic;
  const double kn = kg.norm();
  const auto res = cfg.resolution();
  const auto prediction = predict_gap(cfg, q);
  const auto measured =
      oracle::measure_gap_numeric(cfg.k0, cfg.m0, cfg.physical(q), res, cfg.oracle_deltas());
  const auto& mid = central_sample(measured);
  const double split_num = (mid.upper - mid.lower) / measured.c;
  const double k0n = cfg.k0.norm();

  if (cfg.problem == ProblemKind::Dirichlet) {
    const auto p = cfg.dirichlet_params(q);
    oracle::FdOptions fo;
    fo.eig = res.eig;
    const double free = std::sqrt(oracle::fd_dirichlet_eigenvalues(kg, 0.0, cfg.fd_n, 1, fo).eigenvalues.front());
    rows.push_back(row("zero_inclusion_omega_over_c", kn, free));

    const double shift_asym = dirichlet::epsilon_nonexceptional(kg, p) * kn;
    double shift_fd = 0.0, shift_mono = 0.0;
    if (cfg.a > 0.0) {
      shift_fd = std::sqrt(oracle::fd_dirichlet_eigenvalues(kg, cfg.a, cfg.fd_n, 1, fo).eigenvalues.front()) - kn;
      shift_mono =
          std::sqrt(oracle::fd_monopole_dirichlet_eigenvalues(kg, cfg.a, cfg.fd_n, 1).eigenvalues.front()) - kn;
    }
    rows.push_back(row("shift_over_c", shift_asym, shift_fd));
    rows.push_back(row("shift_over_c_swave", shift_asym, shift_mono));

    // Two candidate prefactors for ε₁ at δ = 0; the numeric splitting picks one.
    const double at = dirichlet::a_tilde(p);
    rows.push_back(row("splitting_eps1_4pi", at / k0n, split_num));
    rows.push_back(row("splitting_eps1_2pi", at / (2.0 * k0n), split_num));
  } else {
    const auto p = cfg.transmission_params();
    const double cp = p.materials().c_plus();
    transmission::MaterialSpec plain = p.materials();
    plain.gamma_minus = plain.gamma_plus;
    plain.rho_minus = plain.rho_plus;
    const transmission::TransmissionParams blank(plain, p.a(), p.delta0());
    const double free =
        std::sqrt(oracle::pwe_transmission_eigenvalues(kg, blank, cfg.g_max, 1).eigenvalues.front()) / cp;
    rows.push_back(row("zero_contrast_omega_over_c", kn, free));

    const double shift_asym = transmission::epsilon_nonexceptional_transmission(kg, p) * kn;
    const double shift_num =
        std::sqrt(oracle::pwe_transmission_eigenvalues(kg, p, cfg.g_max, 1).eigenvalues.front()) / cp - kn;
    rows.push_back(row("shift_over_c", shift_asym, shift_num));

    rows.push_back(row("splitting_over_c", transmission::splitting_mu(cfg.k0, cfg.m0, p) / k0n, split_num));
    rows.push_back(row("center_over_c", transmission::shifted_center(cfg.k0, p),
                       0.5 * (mid.upper + mid.lower) / measured.c));
  }
  add_gap_rows(rows, prediction.report.predicted, measured);
  return rows;
}

void write_compare_csv(std::ostream& os, const std::vector<CompareRow>& rows) {
  os << "quantity,asymptotic,numeric,rel_diff\n" << std::setprecision(kCsvPrecision);
  for (const auto& r : rows) os << r.quantity << ',' << r.asymptotic << ',' << r.numeric << ',' << r.rel_diff << '\n';
}

// --------------------------------------------------------------- global scan

Eigen::Vector3d generic_direction() {
  return Eigen::Vector3d(1.0, std::numbers::sqrt2, std::numbers::pi).normalized();
}

GlobalScanResult global_scan(const ScanConfig& cfg, double q, double omega_lo, double omega_hi, int samples,
                             const Eigen::Vector3d& direction) {
  if (!(omega_lo > 0.0) || !(omega_lo <= omega_hi)) throw DomainError("need 0 < omega_min <= omega_max");
  if (!(direction.norm() > 0.0) || !direction.allFinite()) throw DomainError("ray direction must be nonzero");

  // Model along the ray: (1 + ε)t = ω with ε = C/t² (Dirichlet) or constant (transmission).
  double C = 0.0, e = 0.0;
  std::optional<dirichlet::DirichletParams> dp;
  std::optional<transmission::TransmissionParams> tp;
  if (cfg.problem == ProblemKind::Dirichlet) {
    dp = cfg.dirichlet_params(q);
    C = 0.5 * dirichlet::a_tilde(*dp);
    if (omega_lo < 2.0 * std::sqrt(C))
      throw DomainError("omega_min " + fmt(omega_lo) + " is below 2 sqrt(C) = " + fmt(2.0 * std::sqrt(C)) +
                        ", where the asymptotic dispersion has no solution");
  } else {
    tp = cfg.transmission_params();
    const auto mc = tp->materials().coefficients();
    e = 0.5 * (mc.alpha + mc.beta) * tp->f();
    if (!(1.0 + e > 0.0)) throw DomainError("1 + epsilon must be positive");
  }
  auto F = [&](double t, double omega) { return dp ? t + C / t - omega : (1.0 + e) * t - omega; };
  auto epsilon = [&](const WaveVector& k) {
    return dp ? dirichlet::epsilon_nonexceptional(k, *dp) : transmission::epsilon_nonexceptional_transmission(k, *tp);
  };

  const Eigen::Vector3d base = direction.normalized();
  const Eigen::Vector3d nudge(std::numbers::pi - 3.0, std::numbers::sqrt2 - 1.0, std::numbers::e - 2.0);

  GlobalScanResult out;
  out.direction = base;
  const auto omegas = uniform_grid(omega_lo, omega_hi, samples);
  out.points.resize(omegas.size());
  parallel_for(omegas.size(), [&](std::size_t i) {
    const double w = omegas[i];
    double lo = dp ? (C > 0.0 ? std::sqrt(C) : 0.5 * w) : 0.5 * w / (1.0 + e);
    double hi = dp ? w : 2.0 * w / (1.0 + e);
    double t = 0.0;
    const double flo = F(lo, w), fhi = F(hi, w);
    if (flo == 0.0) {
      t = lo;
    } else if (fhi == 0.0) {
      t = hi;
    } else {
      if (!(flo < 0.0 && fhi > 0.0))
        throw NumericalError("global-scan: root not bracketed at omega/c = " + fmt(w));
      std::uintmax_t iters = 200;
      const auto r = boost::math::tools::toms748_solve([&](double x) { return F(x, w); }, lo, hi, flo, fhi,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
      t = 0.5 * (r.first + r.second);
    }
    constexpr int kMaxNudges = 16;
    for (int attempt = 0; attempt <= kMaxNudges; ++attempt) {
      const Eigen::Vector3d d = (base + 1e-3 * attempt * nudge).normalized();
      const WaveVector k(t * d);
      if (lattice::classify_wavevector(k).order != 1) continue;
      auto& pt = out.points[i];
      pt.omega_over_c = w;
      pt.k = k;
      pt.epsilon = epsilon(k);
      pt.residual = std::abs((1.0 + pt.epsilon) * k.norm() - w) / w;
      pt.perturbations = attempt;
      return;
    }
    throw NumericalError("global-scan: no non-exceptional point found near omega/c = " + fmt(w));
  });
  for (const auto& p : out.points) {
    out.max_residual = std::max(out.max_residual, p.residual);
    if (p.perturbations > 0) ++out.perturbed;
  }
  return out;
}

// -------------------------------------------------------------------- CLI

namespace {

struct ConfigOptions {
  std::string path;
  ConfigMap overrides;
};

void add_config_options(CLI::App* sub, ConfigOptions& o) {
  sub->add_option("--config", o.path, "configuration file (key = value)")->check(CLI::ExistingFile);
  auto scalar = [&](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&o, key](const std::string& v) { o.overrides[key] = v; }, help);
  };
  auto triple = [&](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::vector<std::string>>(
           flag,
           [&o, key](const std::vector<std::string>& v) {
             std::string joined;
             for (const auto& s : v) joined += (joined.empty() ? "" : " ") + s;
             o.overrides[key] = joined;
           },
           help)
        ->expected(3)
        ->allow_extra_args(false);
  };
  scalar("--problem", "problem", "dirichlet or transmission");
  triple("--k0", "k0", "exceptional Bloch vector");
  triple("--m0", "m0", "lattice shift paired with k0");
  triple("--k-generic", "k_generic", "non-exceptional vector for shift rows");
  scalar("--a", "a", "inclusion scale");
  scalar("--f", "f", "sphere volume fraction (transmission)");
  scalar("--q", "q", "shape factor override");
  scalar("--shape", "shape", "sphere, ellipsoid or mesh");
  triple("--axes", "axes", "ellipsoid semi-axes");
  scalar("--mesh", "mesh", "OFF mesh of the unit-scaled inclusion");
  scalar("--gamma-plus", "gamma_plus", "host compressibility");
  scalar("--gamma-minus", "gamma_minus", "inclusion compressibility");
  scalar("--rho-plus", "rho_plus", "host density");
  scalar("--rho-minus", "rho_minus", "inclusion density");
  scalar("--delta0", "delta0", "admissible |delta_tilde| bound");
  scalar("--delta-min", "delta_tilde_min", "scan start");
  scalar("--delta-max", "delta_tilde_max", "scan end");
  scalar("--samples", "samples", "scan sample count");
  scalar("--n", "oracle.fd_n", "FD grid size per axis");
  scalar("--g-max", "oracle.g_max", "PWE cutoff");
  scalar("--count", "oracle.count", "eigenvalues per solve");
  scalar("--oracle-samples", "oracle.samples", "delta samples for measured gaps (odd)");
  scalar("--oracle-delta", "oracle.delta", "delta half-range for measured gaps");
  scalar("--seed", "seed", "eigensolver start-vector seed");
  scalar("--c", "c", "wave speed used to scale reported frequencies");
  scalar("--output-dir,-o", "output_dir", "directory for report files");
  sub->add_flag_function(
      "--verify", [&o](std::int64_t) { o.overrides["verify"] = "true"; }, "also measure the gap numerically");
}

ScanConfig load_config(const ConfigOptions& o) {
  ConfigMap values = o.path.empty() ? ConfigMap{} : read_config_file(o.path);
  for (const auto& [k, v] : o.overrides) values[k] = v;
  return build_config(values);
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(what + ": expected a number, got '" + s + "'");
  }
}

std::string format_shift(const LatticeShift& m) {
  std::ostringstream os;
  os << '(' << m[0] << ',' << m[1] << ',' << m[2] << ')';
  return os.str();
}

int cmd_classify(const std::vector<std::string>& k_text, bool json_out, std::ostream& out) {
  if (k_text.size() != 3) throw ValidationError("k: expected three components");
  const WaveVector k(parse_number(k_text[0], "k"), parse_number(k_text[1], "k"), parse_number(k_text[2], "k"));
  if (k.is_zero()) throw ValidationError("k: the zero vector has no Ewald sphere");
  const auto cls = lattice::classify_wavevector(k);
  nlohmann::json shifts = nlohmann::json::array();
  for (const auto& m : cls.shifts) {
    const auto adm = lattice::gap_admissible(k, m);
    shifts.push_back({{"m", m.components()}, {"nu", adm.nu}, {"verdict", lattice::to_string(adm.verdict)}});
  }
  if (json_out) {
    out << nlohmann::json{{"k", to_array(k)}, {"order", cls.order}, {"shifts", shifts}}.dump(2) << '\n';
    return kExitOk;
  }
  out << "k = " << k << '\n' << "order " << cls.order << (cls.order == 1 ? " (non-exceptional)" : "") << '\n';
  for (std::size_t i = 0; i < cls.shifts.size(); ++i)
    out << "shift " << format_shift(cls.shifts[i]) << "  nu = " << shifts[i]["nu"].get<double>() << "  "
        << shifts[i]["verdict"].get<std::string>() << '\n';
  return kExitOk;
}

void print_interval(std::ostream& out, const std::string& label, const Interval& iv, double c) {
  out << label << " (" << iv.lo_over_c << ", " << iv.hi_over_c << ")";
  if (c != 1.0) out << "  omega: (" << c * iv.lo_over_c << ", " << c * iv.hi_over_c << ")";
  out << '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

int cmd_gap(const ScanConfig& cfg, std::ostream& out, std::ostream& err) {
  const double q = resolve_q(cfg);
  if (cfg.verify) validate_oracle(cfg);
  auto pred = predict_gap(cfg, q);
  GapReport& r = pred.report;
  int code = kExitOk;
  if (cfg.verify) {
    try {
      attach_measurement(cfg, q, r);
    } catch (const TrackingError& e) {
      r.oracle_error = std::string(e.what()) + "\n" + e.diagnostics();
      code = kExitNumerical;
    } catch (const NumericalError& e) {
      r.oracle_error = e.what();
      code = kExitNumerical;
    }
  }
  std::filesystem::create_directories(cfg.output_dir);
  const auto report_path = cfg.output_dir / "report.json";
  const auto csv_path = cfg.output_dir / "branches.csv";
  write_file(report_path, dump_report(r));
  std::ostringstream csv;
  write_branch_csv(csv, pred.curve);
  write_file(csv_path, csv.str());

  out << "problem " << r.problem << "  k0 = " << cfg.k0 << "  m0 = " << format_shift(cfg.m0) << '\n';
  out << "verdict " << r.verdict << "  ratio " << r.ratio << "  nu " << r.nu << '\n';
  if (r.predicted)
    print_interval(out, "gap", *r.predicted, cfg.c);
  else
    out << r.status << '\n';
  if (r.measured) {
    print_interval(out, "measured gap", *r.measured, cfg.c);
    if (r.relative_discrepancy) out << "relative discrepancy " << *r.relative_discrepancy << '\n';
  } else if (cfg.verify && !r.oracle_error) {
    out << "measured: no gap\n";
  }
  if (r.oracle_error) err << "error: oracle failed: " << *r.oracle_error << '\n';
  out << "wrote " << report_path.string() << ", " << csv_path.string() << '\n';
  return code;
}

int cmd_bands(const ScanConfig& cfg, std::ostream& out) {
  write_branch_csv(out, predict_gap(cfg, resolve_q(cfg)).curve);
  return kExitOk;
}

struct FaceOptions {
  std::vector<std::int64_t> m0{0, 0, 1};
  int samples = 101;
  double half_extent = 0.5;
};

int cmd_face_map(const FaceOptions& o, std::ostream& out, std::ostream& err) {
  if (o.m0.size() != 3) throw ValidationError("m0: expected three integers");
  const LatticeShift m0(o.m0[0], o.m0[1], o.m0[2]);
  const auto r = lattice::face_gap_region(m0, o.samples, o.half_extent);
  out << "k1,k2,gap_flag\n" << std::setprecision(kCsvPrecision);
  for (std::size_t i = 0; i < r.samples(); ++i)
    for (std::size_t j = 0; j < r.samples(); ++j)
      out << r.coords[i] << ',' << r.coords[j] << ',' << int(r.flagged(i, j)) << '\n';
  const double face = 4.0 * o.half_extent * o.half_extent;
  err << "flagged area " << r.flagged_area() << " of face area " << face << "; first quadrant "
      << r.flagged_area_first_quadrant() << " (disk |m0|/2: pi/4 = " << std::numbers::pi / 4
      << ", quadrant pi/16 = " << std::numbers::pi / 16 << ")\n";
  return kExitOk;
}

struct ScanOptions {
  double omega_min = 0.4;
  double omega_max = 1.2;
  int points = 100;
  std::vector<double> direction;
};

int cmd_global_scan(const ScanConfig& cfg, const ScanOptions& o, std::ostream& out, std::ostream& err) {
  Eigen::Vector3d dir = generic_direction();
  if (!o.direction.empty()) {
    if (o.direction.size() != 3) throw ValidationError("direction: expected three components");
    dir = Eigen::Vector3d(o.direction[0], o.direction[1], o.direction[2]);
  }
  const auto r = global_scan(cfg, resolve_q(cfg), o.omega_min, o.omega_max, o.points, dir);
  out << "omega_over_c,k1,k2,k3,epsilon,residual\n" << std::setprecision(kCsvPrecision);
  for (const auto& p : r.points)
    out << p.omega_over_c << ',' << p.k[0] << ',' << p.k[1] << ',' << p.k[2] << ',' << p.epsilon << ','
        << p.residual << '\n';
  err << "covered " << r.points.size() << "/" << o.points << " frequencies, max residual " << r.max_residual
      << ", perturbed " << r.perturbed << '\n';
  if (!(r.max_residual < 1e-10)) {
    err << "error: residual above 1e-10\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_oracle_compare(const ScanConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rows = oracle_compare(cfg, resolve_q(cfg));
  write_compare_csv(out, rows);
  if (cfg.problem == ProblemKind::Dirichlet) {
    double r4 = 0, r2 = 0;
    for (const auto& r : rows) {
      if (r.quantity == "splitting_eps1_4pi") r4 = r.rel_diff;
      if (r.quantity == "splitting_eps1_2pi") r2 = r.rel_diff;
    }
    err << "eps1 prefactor: 4pi rel_diff " << r4 << ", 2pi rel_diff " << r2 << " -> "
        << (r4 < r2 ? "4pi" : "2pi") << '\n';
  }
  return kExitOk;
}

struct CapOptions {
  std::string shape = "sphere";
  std::vector<double> axes;
  std::string mesh;
  int bem = 0;
  bool richardson = false;
  bool json = false;
};

int cmd_capacitance(const CapOptions& o, std::ostream& out) {
  BemOptions bo;
  bo.richardson = o.richardson;
  CapacitanceResult r;
  if (o.shape == "sphere") {
    r = o.bem > 0 ? capacitance_bem(make_octasphere(o.bem), bo) : capacitance_sphere();
  } else if (o.shape == "ellipsoid") {
    if (o.axes.size() != 3) throw ValidationError("axes: ellipsoid needs three semi-axes");
    double ax[3] = {o.axes[0], o.axes[1], o.axes[2]};
    std::sort(ax, ax + 3, std::greater<>());
    r = o.bem > 0 ? capacitance_bem(make_ellipsoid_mesh(ax[0], ax[1], ax[2], o.bem), bo)
                  : capacitance_ellipsoid(ax[0], ax[1], ax[2]);
  } else if (o.shape == "mesh") {
    if (o.mesh.empty()) throw ValidationError("mesh: path required for shape mesh");
    r = capacitance_bem(read_off_file(o.mesh), bo);
  } else {
    throw ValidationError("shape: expected sphere, ellipsoid or mesh, got '" + o.shape + "'");
  }
  out << std::setprecision(kCsvPrecision);
  if (o.json) {
    nlohmann::json j{{"q", r.q}, {"method", to_string(r.method)}};
    j["mesh_size"] = r.mesh_size ? nlohmann::json(*r.mesh_size) : nlohmann::json(nullptr);
    j["estimated_error"] = r.estimated_error ? nlohmann::json(*r.estimated_error) : nlohmann::json(nullptr);
    j["extrapolated_q"] = r.extrapolated_q ? nlohmann::json(*r.extrapolated_q) : nlohmann::json(nullptr);
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "q = " << r.q << "  method " << to_string(r.method);
  if (r.mesh_size) out << "  triangles " << *r.mesh_size;
  out << '\n';
  if (r.extrapolated_q) out << "extrapolated q = " << *r.extrapolated_q << "  estimated error " << *r.estimated_error << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Local band-gap analysis for lattices of small inclusions", "bandscan"};
  app.set_version_flag("--version", "bandscan 1.0.0");
  app.require_subcommand(1);

  auto* classify = app.add_subcommand("classify", "exceptional order and gap verdict of a Bloch vector");
  std::vector<std::string> k_text;
  bool classify_json = false;
  classify->add_option("k", k_text, "k1 k2 k3")->expected(3)->required();
  classify->add_flag("--json", classify_json, "machine-readable output");

  ConfigOptions gap_cfg, bands_cfg, scan_cfg, cmp_cfg;
  auto* gap = app.add_subcommand("gap", "predicted (and optionally measured) local gap; writes report.json and branches.csv");
  add_config_options(gap, gap_cfg);
  auto* bands = app.add_subcommand("bands", "branch samples along the ray as CSV on stdout");
  add_config_options(bands, bands_cfg);

  FaceOptions face;
  auto* face_map = app.add_subcommand("face-map", "gap region on the Brillouin-zone face as a CSV raster");
  face_map->add_option("--m0", face.m0, "face normal")->expected(3);
  face_map->add_option("--samples", face.samples, "raster points per axis")->check(CLI::Range(2, 4001));
  face_map->add_option("--half-extent", face.half_extent, "raster half-width");

  ScanOptions scan;
  auto* global = app.add_subcommand("global-scan", "shows every frequency in a range is attained by a Bloch wave");
  add_config_options(global, scan_cfg);
  global->add_option("--omega-min", scan.omega_min, "lowest omega/c");
  global->add_option("--omega-max", scan.omega_max, "highest omega/c");
  global->add_option("--points", scan.points, "omega samples")->check(CLI::PositiveNumber);
  global->add_option("--direction", scan.direction, "ray direction")->expected(3);

  auto* compare = app.add_subcommand("oracle-compare", "asymptotic vs numerical table as CSV");
  add_config_options(compare, cmp_cfg);

  CapOptions cap;
  auto* capacitance = app.add_subcommand("capacitance", "shape factor q of the unit-scaled inclusion");
  capacitance->add_option("--shape", cap.shape, "sphere, ellipsoid or mesh");
  capacitance->add_option("--axes", cap.axes, "ellipsoid semi-axes")->expected(3);
  capacitance->add_option("--mesh", cap.mesh, "OFF mesh file");
  capacitance->add_option("--bem", cap.bem, "use BEM on a generated mesh with this refinement")->check(CLI::NonNegativeNumber);
  capacitance->add_flag("--richardson", cap.richardson, "refine once and extrapolate");
  capacitance->add_flag("--json", cap.json, "machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (classify->parsed()) return cmd_classify(k_text, classify_json, out);
    if (gap->parsed()) return cmd_gap(load_config(gap_cfg), out, err);
    if (bands->parsed()) return cmd_bands(load_config(bands_cfg), out);
    if (face_map->parsed()) return cmd_face_map(face, out, err);
    if (global->parsed()) return cmd_global_scan(load_config(scan_cfg), scan, out, err);
    if (compare->parsed()) return cmd_oracle_compare(load_config(cmp_cfg), out, err);
    if (capacitance->parsed()) return cmd_capacitance(cap, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const TrackingError& e) {
    err << "error: " << e.what() << '\n' << e.diagnostics() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace localgap::cli
