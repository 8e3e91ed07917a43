#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "finsler/verify.hpp"

namespace finsler {

namespace {

using nlohmann::json;

json verdict_json(const Verdict& v) {
  return {{"kind", v.kind}, {"metric", v.metric}, {"x", v.x},       {"decision", v.decision},
          {"threshold", v.threshold}, {"measure", v.measure}, {"fitted", v.fitted}, {"xi", v.xi}};
}

json tolerances_json(const Tolerances& t) {
  return {{"structure", t.structure},   {"dtau", t.dtau},   {"identity", t.identity},
          {"quadrature", t.quadrature}, {"classifier", t.classifier}, {"flag", t.flag},
          {"trace", t.trace},           {"oracle", t.oracle}};
}

std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_vec(const Vec& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + csv_real(v[i]);
  return s;
}

}  // namespace

std::string SuiteReport::to_json(bool with_metadata) const {
  const Conventions& c = calibration.conventions;
  json doc;
  doc["engine_version"] = engine;
  doc["conventions"] = {{"s", c.frame_sign},
                        {"landsberg_sign", c.landsberg_sign},
                        {"kappa", c.kappa},
                        {"curvature_sign", c.curvature_sign},
                        {"calibrated", c.calibrated}};
  doc["calibration"] = {{"unique", calibration.unique},
                        {"ok", calibration.ok},
                        {"message", calibration.message},
                        {"basic_equ4_residuals", calibration.basic_equ4_residuals},
                        {"kappa_residual", calibration.kappa_residual},
                        {"curvature_residual_chern", calibration.curvature_residual_chern},
                        {"curvature_residual_berwald", calibration.curvature_residual_berwald},
                        {"jacobi1_residual", calibration.jacobi1_residual},
                        {"jacobi1_flipped_residual", calibration.jacobi1_flipped_residual}};
  doc["seed"] = seed;
  doc["tolerances"] = tolerances_json(tol);
  doc["passed"] = passed;
  doc["errors"] = errors;

  json ids = json::array();
  for (const auto& s : per_identity) {
    ids.push_back({{"id", s.id},
                   {"metric", s.metric},
                   {"max_residual", s.max_residual},
                   {"tol", s.tol},
                   {"passed", s.passed},
                   {"samples", s.samples},
                   {"failures", s.failures}});
  }
  doc["per_identity"] = ids;

  json scen = json::array(), verdicts = json::array();
  for (const auto& r : scenarios) {
    json checks = json::array();
    for (const auto& ch : r.checks) {
      checks.push_back({{"name", ch.name}, {"value", ch.value}, {"tol", ch.tol}, {"passed", ch.passed}});
    }
    scen.push_back({{"id", r.id},
                    {"metric", r.metric},
                    {"applicable", r.applicable},
                    {"note", r.note},
                    {"passed", r.passed()},
                    {"checks", checks}});
    for (const auto& v : r.verdicts) {
      json j = verdict_json(v);
      j["scenario"] = r.id;
      verdicts.push_back(j);
    }
  }
  doc["scenarios"] = scen;
  doc["verdicts"] = verdicts;
  if (with_metadata) doc["metadata"] = {{"timestamp", timestamp}};
  return doc.dump(2) + "\n";
}

std::string SuiteReport::to_csv() const {
  std::ostringstream os;
  os << "identity,metric,sample,x,y,residual,scale,tol,passed\n";
  for (const auto& r : rows) {
    os << r.id << ',' << r.metric << ',' << r.sample << ',' << csv_vec(r.x) << ',' << csv_vec(r.y) << ','
       << csv_real(r.residual) << ',' << csv_real(r.scale) << ',' << csv_real(r.tol) << ','
       << (r.passed ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string SuiteReport::failure_table() const {
  std::ostringstream os;
  os << std::setprecision(3);
  if (!calibration.ok) os << "calibration  " << calibration.message << '\n';
  for (const auto& s : per_identity) {
    if (s.passed) continue;
    os << std::left << std::setw(26) << s.id << std::setw(20) << s.metric << "max_residual=" << s.max_residual
       << " tol=" << s.tol << " failures=" << s.failures << '/' << s.samples << '\n';
  }
  for (const auto& r : scenarios) {
    for (const auto& c : r.checks) {
      if (c.passed) continue;
      os << std::left << std::setw(26) << (r.id + ":" + c.name) << std::setw(20) << r.metric
         << "value=" << c.value << " tol=" << c.tol << '\n';
    }
  }
  for (const auto& e : errors) os << "error  " << e << '\n';
  return os.str();
}

}  // namespace finsler
