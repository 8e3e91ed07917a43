// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
// Usage: acceptance <path-to-finsler-cli>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "finsler/verify.hpp"

using namespace finsler;

namespace {

struct Line {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& why) {
    if (!cond) {
      ok = false;
      detail << " [" << why << "]";
    }
  }
};

int failures = 0;

void emit(int id, const std::string& title, Line& line) {
  std::cout << (line.ok ? "PASS" : "FAIL") << "  " << id << "  " << title << line.detail.str() << "\n";
  failures += !line.ok;
}

const IdentitySummary* find(const SuiteReport& rep, const std::string& id, const std::string& metric) {
  for (const auto& s : rep.per_identity) {
    if (s.id == id && s.metric == metric) return &s;
  }
  return nullptr;
}

// The summary must exist, pass, and have a tolerance no looser than `limit`.
void need(Line& line, const SuiteReport& rep, const std::string& id, const std::string& metric, double limit) {
  const IdentitySummary* s = find(rep, id, metric);
  if (!s) {
    line.require(false, id + "@" + metric + " missing");
    return;
  }
  std::ostringstream why;
  why << id << "@" << metric << " max " << s->max_residual << " tol " << s->tol;
  line.require(s->passed && s->failures == 0 && s->tol <= limit * (1 + 1e-12), why.str());
}

const ScenarioReport* scenario(const SuiteReport& rep, const std::string& id, const std::string& metric) {
  for (const auto& s : rep.scenarios) {
    if (s.id == id && s.metric == metric) return &s;
  }
  return nullptr;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd) { return std::system((cmd + " 2>/dev/null").c_str()); }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <finsler-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];

  const std::vector<MetricSpec> zoo = builtin::zoo();
  std::vector<std::string> names;
  for (const auto& m : zoo) names.push_back(m.name);
  const std::vector<std::string> funks{"funk2", "funk3"};
  const std::vector<std::string> riemannian_free{"euclidean", "sphere", "quartic-minkowski", "randers-berwald"};

  SuiteConfig cfg;
  cfg.metrics = zoo;
  cfg.samples = 200;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport rep = run_suite(cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& e : rep.errors) std::cerr << "suite error: " << e << "\n";

  {
    Line l;
    for (const auto& m : names) {
      for (const char* id : {"homogeneity_F", "g_yy", "A_y", "B_y", "E_y", "L_y", "homogeneity_S"}) {
        need(l, rep, id, m, 1e-8);
        if (const auto* s = find(rep, id, m)) l.require(s->samples >= 200, std::string(id) + "@" + m + " samples");
      }
    }
    l.require(rep.errors.empty(), "suite errors");
    l.require(seconds <= 60.0, "runtime " + std::to_string(seconds) + " s");
    l.detail << " (" << static_cast<int>(seconds) << " s for the whole suite)";
    emit(1, "homogeneity and structure suite", l);
  }
  {
    Line l;
    need(l, rep, "riemannian_AEJL_zero", "sphere", 1e-9);
    need(l, rep, "riemannian_S_zero", "sphere", 1e-8);
    need(l, rep, "flag_vs_sectional", "sphere", 1e-8);
    need(l, rep, "riemannian_sigma_bar_zero", "sphere", 1e-6);
    emit(2, "Riemannian reduction on the sphere chart", l);
  }
  {
    Line l;
    for (const char* m : {"randers-generic", "funk2", "funk3"}) need(l, rep, "hessian_S", m, 1e-7);
    emit(3, "E equals half the y-Hessian of S", l);
  }
  {
    Line l;
    for (const auto& m : names) need(l, rep, "dtau_vertical", m, 1e-9);
    emit(4, "vertical part of d tau", l);
  }
  {
    Line l;
    need(l, rep, "basic_equ4", "randers-generic", 1e-7);
    l.require(rep.calibration.ok && rep.calibration.unique, "calibration " + rep.calibration.message);
    emit(5, "first frame identity and unique sign calibration", l);
  }
  {
    Line l;
    for (const auto& m : funks) {
      need(l, rep, "funk_S_over_F", m, 1e-4);
      need(l, rep, "funk_K", m, 1e-6);
      need(l, rep, "funk_e", m, 1e-4);
    }
    // e constant over directions: spread, not just closeness to the constant
    for (int n : {2, 3}) {
      const auto spec = builtin::funk(n);
      for (const auto& p : sample_points(spec, 3, 77)) {
        const Verdict v = classify_e_isotropy(spec, default_volume(spec), p.x, n == 2 ? 16 : 32);
        l.require(v.decision && v.measure <= 1e-5, spec.name + " e spread " + std::to_string(v.measure));
        l.require(std::abs(v.fitted.at("c") - (n - 1) * (n + 1) / 2.0) <= 1e-4, spec.name + " e constant");
      }
    }
    emit(6, "Funk constants", l);
  }
  {
    Line l;
    for (const auto& m : names) {
      const ScenarioReport* s = scenario(rep, "theorem1", m);
      l.require(s && s->passed(), "theorem1@" + m);
      if (!s) continue;
      if (m == "randers-generic" || m.rfind("funk", 0) == 0) {
        const bool expected = m != "randers-generic";
        int seen = 0;
        for (const auto& v : s->verdicts) {
          if (v.kind == "e_isotropic" || v.kind == "S_isotropic") {
            ++seen;
            l.require(v.decision == expected, m + " " + v.kind + " verdict");
          }
        }
        l.require(seen > 0, m + " has no verdicts");
      }
    }
    emit(7, "e-isotropy and S-isotropy verdicts agree on the zoo", l);
  }
  {
    Line l;
    for (const auto& m : funks) need(l, rep, "trace_equation", m, 1e-5);
    emit(8, "Berwald hh-curvature trace vanishes on Funk", l);
  }
  {
    Line l;
    for (const auto& m : funks) need(l, rep, "jacobi2", m, 1e-5);
    emit(9, "second frame identity on Funk", l);
  }
  {
    Line l;
    for (const auto& m : riemannian_free) {
      const ScenarioReport* s = scenario(rep, "theorem2_cor12", m);
      l.require(s && s->applicable && s->passed(), "theorem2_cor12@" + m);
      if (!s) continue;
      std::set<std::string> passed;
      for (const auto& c : s->checks) {
        if (c.passed) passed.insert(c.name);
        if (c.name == "cor1:S_zero") l.require(c.tol <= 1e-8, m + " S_zero tolerance");
        if (c.name == "cor1:gauge_xi_equals_df") l.require(c.tol <= 1e-5, m + " gauge tolerance");
      }
      for (const char* c : {"cor1:S_zero", "cor1:gauge_xi_equals_df", "cor2:equivalence", "cor2:e_constant",
                            "cor2:trR_zero"}) {
        l.require(passed.count(c) == 1, m + " " + c);
      }
    }
    emit(10, "constant-S scenarios on Riemannian, Minkowski and Berwald metrics", l);
  }
  {
    Line l;
    for (const auto& m : names) {
      for (const char* id : {"oracle_F2", "oracle_G", "oracle_S"}) need(l, rep, id, m, 1e-5);
    }
    for (const auto& m : funks) need(l, rep, "oracle_funk_S", m, 1e-4);
    emit(11, "jets agree with the finite-difference oracle", l);
  }
  {
    Line l;
    const std::string base = cli + " verify --samples 20 --identity-samples 3 --classify-points 1 --oracle-samples 1";
    const std::string dir = "acceptance_runs";
    std::filesystem::create_directories(dir);
    int rc = 0;
    rc |= run(base + " --no-metadata --out " + dir + "/a.json");
    rc |= run(base + " --no-metadata --out " + dir + "/b.json");
    rc |= run(base + " --out " + dir + "/c.json");
    rc |= run(base + " --out " + dir + "/d.json");
    l.require(rc == 0, "verify exited non-zero");
    const std::string a = slurp(dir + "/a.json"), b = slurp(dir + "/b.json");
    l.require(!a.empty() && a == b, "--no-metadata reports differ");
    try {
      auto c = nlohmann::json::parse(slurp(dir + "/c.json"));
      auto d = nlohmann::json::parse(slurp(dir + "/d.json"));
      c.erase("metadata");
      d.erase("metadata");
      l.require(c.dump() == d.dump(), "reports differ outside the timestamp");
      l.require(c.dump() == nlohmann::json::parse(a).dump(), "metadata is not the only difference");
    } catch (const std::exception& e) {
      l.require(false, e.what());
    }
    emit(12, "verify is deterministic for a fixed seed", l);
  }

  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << "\n";
  return failures == 0 ? 0 : 1;
}
