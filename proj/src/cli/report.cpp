#include "localgap/cli/report.hpp"

#include "localgap/errors.hpp"

namespace localgap::cli {

using nlohmann::json;

namespace {

json interval_json(const std::optional<Interval>& v, double c) {
  if (!v) return nullptr;
  return {{"lo_over_c", v->lo_over_c}, {"hi_over_c", v->hi_over_c},
          {"lo", c * v->lo_over_c},     {"hi", c * v->hi_over_c}};
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> read_opt(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("report: missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<T>();
}

std::optional<Interval> read_interval(const json& j, const char* key) {
  const auto v = read_opt<json>(j, key);
  if (!v) return std::nullopt;
  return Interval{v->at("lo_over_c").get<double>(), v->at("hi_over_c").get<double>()};
}

}  // namespace

json to_json(const GapReport& r) {
  json j;
  j["schema_version"] = r.schema_version;
  j["problem"] = r.problem;
  j["k0"] = r.k0;
  j["m0"] = r.m0;
  j["c"] = r.c;
  j["admissibility"] = {{"verdict", r.verdict}, {"ratio", r.ratio}, {"nu", r.nu}};
  j["status"] = r.status;
  if (r.dirichlet) {
    const auto& d = *r.dirichlet;
    j["dirichlet"] = {{"a", d.a}, {"q", d.q}, {"a_tilde", d.a_tilde},
                      {"nu_minus", opt(d.nu_minus)}, {"nu_plus", opt(d.nu_plus)}};
  } else {
    j["dirichlet"] = nullptr;
  }
  if (r.transmission) {
    const auto& t = *r.transmission;
    j["transmission"] = {{"a", t.a},         {"f", t.f},   {"alpha", t.alpha},
                         {"beta", t.beta},   {"sigma", t.sigma}, {"mu", t.mu},
                         {"center_over_c", t.center_over_c}};
  } else {
    j["transmission"] = nullptr;
  }
  j["predicted"] = interval_json(r.predicted, r.c);
  j["measured"] = interval_json(r.measured, r.c);
  j["oracle_resolution"] = opt(r.oracle_resolution);
  j["relative_discrepancy"] = opt(r.relative_discrepancy);
  j["oracle_error"] = opt(r.oracle_error);
  return j;
}

GapReport report_from_json(const json& j) {
  try {
    GapReport r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kReportSchemaVersion)
      throw ValidationError("report: unsupported schema_version " + std::to_string(r.schema_version));
    r.problem = j.at("problem").get<std::string>();
    r.k0 = j.at("k0").get<std::array<double, 3>>();
    r.m0 = j.at("m0").get<std::array<std::int64_t, 3>>();
    r.c = j.at("c").get<double>();
    const auto& adm = j.at("admissibility");
    r.verdict = adm.at("verdict").get<std::string>();
    r.ratio = adm.at("ratio").get<double>();
    r.nu = adm.at("nu").get<double>();
    r.status = j.at("status").get<std::string>();
    if (auto d = read_opt<json>(j, "dirichlet")) {
      DirichletSummary s;
      s.a = d->at("a").get<double>();
      s.q = d->at("q").get<double>();
      s.a_tilde = d->at("a_tilde").get<double>();
      s.nu_minus = read_opt<double>(*d, "nu_minus");
      s.nu_plus = read_opt<double>(*d, "nu_plus");
      r.dirichlet = s;
    }
    if (auto t = read_opt<json>(j, "transmission")) {
      TransmissionSummary s;
      s.a = t->at("a").get<double>();
      s.f = t->at("f").get<double>();
      s.alpha = t->at("alpha").get<double>();
      s.beta = t->at("beta").get<double>();
      s.sigma = t->at("sigma").get<double>();
      s.mu = t->at("mu").get<double>();
      s.center_over_c = t->at("center_over_c").get<double>();
      r.transmission = s;
    }
    r.predicted = read_interval(j, "predicted");
    r.measured = read_interval(j, "measured");
    r.oracle_resolution = read_opt<std::string>(j, "oracle_resolution");
    r.relative_discrepancy = read_opt<double>(j, "relative_discrepancy");
    r.oracle_error = read_opt<std::string>(j, "oracle_error");
    return r;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
}

std::string dump_report(const GapReport& r) { return to_json(r).dump(2) + "\n"; }

GapReport parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("report: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace localgap::cli
