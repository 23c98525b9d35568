#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "localgap/cli/commands.hpp"
#include "localgap/cli/config.hpp"
#include "localgap/cli/report.hpp"
#include "localgap/errors.hpp"
#include "localgap/lattice.hpp"
#include "localgap/transmission.hpp"

using namespace localgap;
using namespace localgap::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run bandscan(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("bandscan_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

ConfigMap parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config_text(in);
}

std::string config_error_field(const ConfigMap& m) {
  try {
    build_config(m);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const std::vector<std::string> kWeakTransmission = {"--problem", "transmission", "--f", "0.01", "--gamma-minus",
                                                    "1.2", "--rho-minus", "0.8333333333333334"};

}  // namespace

TEST_CASE("config grammar") {
  const auto m = parse(
      "# comment\n"
      "problem = transmission   # trailing\n"
      "\n"
      "  k0=(0, 0, 0.5)\n"
      "m0 = 0,0,1\n");
  CHECK(m.size() == 3);
  CHECK(m.at("problem") == "transmission");
  CHECK(m.at("k0") == "(0, 0, 0.5)");
  const auto c = build_config(m);
  CHECK(c.problem == ProblemKind::Transmission);
  CHECK(c.k0 == WaveVector(0, 0, 0.5));

  CHECK_THROWS_AS(parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse("just words\n"), ConfigError);
  CHECK_THROWS_AS(parse("a =\n"), ConfigError);
  CHECK_THROWS_AS(parse("Bad-Key = 1\n"), ConfigError);
  try {
    parse("a = 1\na = 2\n");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "a");
  }
}

TEST_CASE("config validation names the field") {
  CHECK(config_error_field({{"colour", "red"}}) == "colour");
  CHECK(config_error_field({{"a", "x"}}) == "a");
  CHECK(config_error_field({{"a", "2"}}) == "a");
  CHECK(config_error_field({{"k0", "0.3 0.1 0.2"}}) == "k0");
  CHECK(config_error_field({{"k0", "0 0"}}) == "k0");
  CHECK(config_error_field({{"m0", "0 0 0"}}) == "m0");
  CHECK(config_error_field({{"problem", "neumann"}}) == "problem");
  CHECK(config_error_field({{"samples", "0"}}) == "samples");
  CHECK(config_error_field({{"oracle.fd_n", "64"}}) == "oracle.fd_n");
  CHECK(config_error_field({{"oracle.samples", "4"}}) == "oracle.samples");
  CHECK(config_error_field({{"delta_tilde_max", "0.5"}}) == "delta_tilde_max");
  CHECK(config_error_field({{"verify", "maybe"}}) == "verify");
  CHECK(config_error_field({{"f", "0.01"}}) == "f");
  CHECK(config_error_field({{"problem", "transmission"}, {"a", "0.5"}, {"f", "0.01"}}) == "f");
  CHECK(config_error_field({{"problem", "transmission"}, {"rho_minus", "-1"}}) == "materials");
  CHECK(config_error_field({{"shape", "mesh"}}) == "mesh");
  CHECK(config_error_field({}) == "");
}

TEST_CASE("volume fraction sets the radius") {
  const auto c = build_config({{"problem", "transmission"}, {"f", "0.01"}});
  CHECK(transmission::volume_fraction(c.a) == doctest::Approx(0.01).epsilon(1e-13));
  CHECK(c.transmission_params().f() == doctest::Approx(0.01).epsilon(1e-13));
}

TEST_CASE("flags override the file") {
  const auto dir = scratch("override");
  std::ofstream(dir / "c.cfg") << "a = 0.2\noutput_dir = " << (dir / "from_file").string() << "\n";
  const auto r = bandscan({"gap", "--config", (dir / "c.cfg").string(), "--a", "0.1", "-o", (dir / "flag").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(dir / "flag" / "report.json"));
  CHECK_FALSE(fs::exists(dir / "from_file"));
  const auto rep = parse_report(slurp(dir / "flag" / "report.json"));
  CHECK(rep.dirichlet->a == 0.1);
}

TEST_CASE("shape factor resolution") {
  CHECK(resolve_q(build_config({})) == 1.0);
  CHECK(resolve_q(build_config({{"q", "1.7"}})) == 1.7);
  const double q = resolve_q(build_config({{"shape", "ellipsoid"}, {"axes", "1 1 2"}}));
  CHECK(q == doctest::Approx(resolve_q(build_config({{"shape", "ellipsoid"}, {"axes", "2 1 1"}}))));
  CHECK(q > 1.0);
}

TEST_CASE("report round trip") {
  auto pred = predict_gap(build_config({}), 1.0);
  auto& r = pred.report;
  CHECK(r.schema_version == kReportSchemaVersion);
  CHECK(r.status == "gap");
  REQUIRE(r.predicted);
  CHECK(r.predicted->lo_over_c == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.predicted->hi_over_c == doctest::Approx(0.510132).epsilon(1e-6));
  CHECK(parse_report(dump_report(r)) == r);

  // Awkward doubles and every optional filled.
  r.measured = Interval{0.1 + 0.2, 1.0 / 3.0};
  r.relative_discrepancy = std::nextafter(1.0, 2.0);
  r.oracle_resolution = "fd n=48";
  r.oracle_error = "line one\nline \"two\"";
  r.c = 2.9979e8;
  CHECK(parse_report(dump_report(r)) == r);

  auto t = predict_gap(build_config({{"problem", "transmission"}, {"f", "0.01"}}), 1.0).report;
  CHECK(t.transmission);
  CHECK_FALSE(t.dirichlet);
  CHECK(parse_report(dump_report(t)) == t);

  auto j = to_json(r);
  j["schema_version"] = 99;
  CHECK_THROWS_AS(report_from_json(j), ValidationError);
  j = to_json(r);
  j.erase("status");
  CHECK_THROWS_AS(report_from_json(j), ValidationError);
  CHECK_THROWS_AS(parse_report("{not json"), ValidationError);
}

TEST_CASE("classify") {
  auto r = bandscan({"classify", "0", "0", "0.5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("order 2") != std::string::npos);
  CHECK(r.out.find("shift (0,0,1)") != std::string::npos);
  CHECK(r.out.find("nu = 0 ") != std::string::npos);
  CHECK(r.out.find("GapPredicted") != std::string::npos);

  r = bandscan({"classify", "0.3", "0.1", "0.2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("order 1") != std::string::npos);

  r = bandscan({"classify", "-0.3", "0.1", "0.2", "--json"});
  CHECK(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["order"] == 1);
  CHECK(j["k"][0] == -0.3);

  CHECK(bandscan({"classify", "0", "0", "0"}).code == kExitUsage);
  CHECK(bandscan({"classify", "0", "0"}).code == kExitUsage);
  CHECK(bandscan({"classify", "0", "zero", "1"}).code == kExitUsage);
}

TEST_CASE("gap writes report and branches") {
  const auto dir = scratch("gap");
  const auto r = bandscan({"gap", "--a", "0.1", "-o", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("gap (0.5, 0.510132)") != std::string::npos);
  const auto csv = lines(slurp(dir / "branches.csv"));
  REQUIRE(csv.size() == 102);
  CHECK(csv[0] == "delta_tilde,omega_minus_over_c,omega_plus_over_c");
  CHECK(csv[1].rfind("-0.05,", 0) == 0);
  CHECK(csv[101].rfind("0.05,", 0) == 0);
  const auto rep = parse_report(slurp(dir / "report.json"));
  CHECK(rep.status == "gap");
  CHECK(rep.verdict == "GapPredicted");
  CHECK(rep.predicted->hi_over_c == doctest::Approx(0.5101321183642338).epsilon(1e-14));

  // Same config twice: identical bytes.
  const auto again = scratch("gap_again");
  REQUIRE(bandscan({"gap", "--a", "0.1", "-o", again.string()}).code == kExitOk);
  CHECK(slurp(dir / "branches.csv") == slurp(again / "branches.csv"));
  CHECK(slurp(dir / "report.json") == slurp(again / "report.json"));
}

TEST_CASE("gap with c scales output only") {
  const auto dir = scratch("gap_c");
  const auto r = bandscan({"gap", "--c", "2", "-o", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("omega: (1, 1.02026)") != std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["predicted"]["hi"].get<double>() == doctest::Approx(2 * j["predicted"]["hi_over_c"].get<double>()));
  CHECK(lines(slurp(dir / "branches.csv"))[1].rfind("-0.05,0.4548", 0) == 0);
}

TEST_CASE("gap status texts") {
  auto dir = scratch("zero_contrast");
  auto r = bandscan({"gap", "--problem", "transmission", "--f", "0.01", "-o", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("no gap: zero splitting") != std::string::npos);
  CHECK(parse_report(slurp(dir / "report.json")).status == "no gap: zero splitting");

  dir = scratch("nu_above_one");
  std::vector<std::string> args = kWeakTransmission;
  args.insert(args.begin(), "gap");
  args.insert(args.end(), {"--k0", "0.5", "0.6", "0.3", "--m0", "1", "0", "0", "-o", dir.string()});
  r = bandscan(args);
  REQUIRE(r.code == kExitOk);
  const auto rep = parse_report(slurp(dir / "report.json"));
  CHECK(rep.status == "no gap: nu = 1.8 >= 1");
  CHECK(rep.verdict == "NoGap");
  CHECK_FALSE(rep.predicted);

  dir = scratch("dirichlet_zero");
  r = bandscan({"gap", "--a", "0", "-o", dir.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(parse_report(slurp(dir / "report.json")).status == "no gap: zero splitting");
}

TEST_CASE("gap validation and oracle failure exit codes") {
  const auto dir = scratch("gap_errors");
  auto r = bandscan({"gap", "--a", "0.2", "--verify", "-o", dir.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("oracle.fd_n") != std::string::npos);
  CHECK(bandscan({"gap", "--k0", "0.3", "0.1", "0.2", "-o", dir.string()}).code == kExitUsage);
  CHECK(bandscan({"gap", "--config", (dir / "missing.cfg").string()}).code == kExitUsage);

  // Two eigenvalues cannot bracket the tracked pair: partial report, exit 3.
  const auto part = dir / "partial";
  r = bandscan({"gap", "--a", "0.8", "--n", "16", "--count", "2", "--verify", "-o", part.string()});
  CHECK(r.code == kExitNumerical);
  const auto rep = parse_report(slurp(part / "report.json"));
  CHECK(rep.oracle_error);
  CHECK(rep.predicted);
  CHECK_FALSE(rep.measured);
  CHECK(fs::exists(part / "branches.csv"));
}

TEST_CASE("gap verify on weak-contrast transmission") {
  const auto dir = scratch("gap_verify");
  std::vector<std::string> args = kWeakTransmission;
  args.insert(args.begin(), "gap");
  args.insert(args.end(), {"--verify", "-o", dir.string()});
  const auto r = bandscan(args);
  REQUIRE(r.code == kExitOk);
  const auto rep = parse_report(slurp(dir / "report.json"));
  REQUIRE(rep.measured);
  REQUIRE(rep.relative_discrepancy);
  CHECK(*rep.relative_discrepancy < 0.25);
  CHECK(rep.oracle_resolution->find("pwe g_max=3") == 0);
}

TEST_CASE("bands prints the branch csv") {
  const auto r = bandscan({"bands", "--samples", "3"});
  REQUIRE(r.code == kExitOk);
  const auto csv = lines(r.out);
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] == "delta_tilde,omega_minus_over_c,omega_plus_over_c");
  CHECK(csv[2] == "0,0.5,0.510132118364");
}

TEST_CASE("face-map") {
  const auto r = bandscan({"face-map", "--m0", "0", "0", "1", "--samples", "101"});
  REQUIRE(r.code == kExitOk);
  const auto csv = lines(r.out);
  REQUIRE(csv.size() == 101 * 101 + 1);
  CHECK(csv[0] == "k1,k2,gap_flag");
  CHECK(std::find(csv.begin(), csv.end(), "0,0,1") != csv.end());
  CHECK(std::find(csv.begin(), csv.end(), "0.5,0.5,0") != csv.end());

  double area = 0.0;
  for (std::size_t i = 1; i < csv.size(); ++i)
    if (csv[i].back() == '1') area += 0.01 * 0.01;
  CHECK(std::abs(area - std::numbers::pi / 4) < 0.03 * std::numbers::pi / 4);
  CHECK(r.err.find("flagged area") != std::string::npos);

  CHECK(bandscan({"face-map", "--m0", "0", "0", "0"}).code == kExitUsage);
  CHECK(bandscan({"face-map", "--samples", "1"}).code == kExitUsage);
}

TEST_CASE("global scan") {
  const auto cfg = build_config({{"a", "0.1"}});
  const auto res = global_scan(cfg, 1.0, 0.4, 1.2, 100, generic_direction());
  REQUIRE(res.points.size() == 100);
  CHECK(res.max_residual < 1e-10);
  for (const auto& p : res.points) {
    CHECK(lattice::classify_wavevector(p.k).order == 1);
    CHECK(p.epsilon > 0.0);
  }
  CHECK(res.points.front().omega_over_c == 0.4);
  CHECK(res.points.back().omega_over_c == 1.2);

  // a = 0: the cone itself.
  const auto cone = global_scan(build_config({{"a", "0"}}), 1.0, 0.4, 1.2, 7, generic_direction());
  for (const auto& p : cone.points) CHECK(p.k.norm() == doctest::Approx(p.omega_over_c).epsilon(1e-14));

  // ω chosen so the root on the z axis is k = (0, 0, 1/2), an exceptional point.
  const double C = std::numbers::pi * 0.1 / kCellVolume * 2.0;
  const double w = 0.5 + C / 0.5;
  const auto hit = global_scan(cfg, 1.0, w, w, 1, Eigen::Vector3d::UnitZ());
  CHECK(hit.perturbed == 1);
  CHECK(hit.points[0].residual < 1e-10);
  CHECK(lattice::classify_wavevector(hit.points[0].k).order == 1);

  auto r = bandscan({"global-scan", "--a", "0.1", "--points", "100"});
  REQUIRE(r.code == kExitOk);
  CHECK(lines(r.out).size() == 101);
  CHECK(lines(r.out)[0] == "omega_over_c,k1,k2,k3,epsilon,residual");
  CHECK(r.err.find("covered 100/100") != std::string::npos);

  CHECK(bandscan({"global-scan", "--omega-min", "0.05"}).code == kExitUsage);
  CHECK(bandscan({"global-scan", "--omega-min", "1", "--omega-max", "0.5"}).code == kExitUsage);
  CHECK(bandscan({"global-scan", "--direction", "0", "0", "0"}).code == kExitUsage);
}

TEST_CASE("oracle-compare transmission") {
  std::vector<std::string> args = kWeakTransmission;
  args.insert(args.begin(), "oracle-compare");
  const auto r = bandscan(args);
  REQUIRE(r.code == kExitOk);
  const auto csv = lines(r.out);
  CHECK(csv[0] == "quantity,asymptotic,numeric,rel_diff");
  std::map<std::string, double> rel;
  for (std::size_t i = 1; i < csv.size(); ++i) {
    const auto comma = csv[i].find(',');
    rel[csv[i].substr(0, comma)] = std::stod(csv[i].substr(csv[i].rfind(',') + 1));
  }
  CHECK(rel.at("zero_contrast_omega_over_c") <= 1e-3);
  CHECK(rel.at("splitting_over_c") <= 0.25);
  CHECK(rel.at("center_over_c") <= 1e-3);
  CHECK(rel.count("gap_width_over_c") == 1);
}

TEST_CASE("oracle-compare dirichlet at a = 0.3") {
  const auto rows = oracle_compare(build_config({{"a", "0.3"}}), 1.0);
  std::map<std::string, CompareRow> by;
  for (const auto& r : rows) by[r.quantity] = r;
  CHECK(by.at("zero_inclusion_omega_over_c").rel_diff <= 1e-3);
  CHECK(by.at("shift_over_c").rel_diff <= 0.25);
  CHECK(by.at("shift_over_c").numeric == doctest::Approx(0.027740786033).epsilon(1e-8));
  CHECK(by.at("splitting_eps1_4pi").rel_diff <= 0.25);
  CHECK(by.at("splitting_eps1_2pi").rel_diff > 0.5);
  CHECK(by.at("gap_lo_over_c").rel_diff <= 0.01);
  CHECK(by.at("gap_hi_over_c").rel_diff <= 0.01);
}

TEST_CASE("capacitance") {
  auto r = bandscan({"capacitance"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("q = 1 ", 0) == 0);
  r = bandscan({"capacitance", "--shape", "ellipsoid", "--axes", "1", "2", "1", "--json"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["method"] == "Analytic");
  CHECK(j["q"].get<double>() > 1.0);
  r = bandscan({"capacitance", "--bem", "8", "--json"});
  REQUIRE(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out)["q"].get<double>() == doctest::Approx(1.0).epsilon(0.05));
  CHECK(bandscan({"capacitance", "--shape", "cube"}).code == kExitUsage);
  CHECK(bandscan({"capacitance", "--shape", "mesh", "--mesh", "/nonexistent.off"}).code == kExitUsage);
}

TEST_CASE("exit code contract") {
  CHECK(bandscan({}).code == kExitUsage);
  CHECK(bandscan({"frobnicate"}).code == kExitUsage);
  CHECK(bandscan({"--help"}).code == kExitOk);
  CHECK(bandscan({"--version"}).code == kExitOk);
  CHECK(bandscan({"gap", "--samples", "many"}).code == kExitUsage);
}
