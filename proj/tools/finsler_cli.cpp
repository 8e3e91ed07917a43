// finsler: command-line front end for the curvature engine and the
// identity suite. All computations are chart-local.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "finsler/config.hpp"
#include "finsler/curvature.hpp"
#include "finsler/geometry.hpp"
#include "finsler/spray.hpp"
#include "finsler/verify.hpp"

using namespace finsler;
using nlohmann::json;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> quantity_tags = {"F", "g", "A", "I", "tau", "G", "N", "Gamma", "B", "E",
                                                 "e", "S", "L", "J", "R", "K", "Ricci", "Sigma_bar",
                                                 "trR", "trR_berwald"};

struct Common {
  std::string metric;
  std::string expr;
  int dim = 2;
  std::string volume;
  int quad = 0;
  int order = 6;
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 42;
};

struct Loaded {
  MetricSpec spec;
  VolumeDensity vol;
  bool explicit_volume = false;
};

Loaded load(const Common& c) {
  if (c.metric.empty() == c.expr.empty()) throw UsageError("give exactly one of --metric or --expr");
  Loaded l;
  std::optional<VolumeDensity> vol;
  if (!c.expr.empty()) {
    try {
      l.spec = metric_from_expression(c.expr, c.dim);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (std::ifstream(c.metric).good()) {
    MetricConfig cfg = load_metric_config(c.metric);
    l.spec = cfg.spec;
    vol = cfg.volume;
  } else {
    std::string name = c.metric;
    if (name.rfind("builtin:", 0) == 0) name = name.substr(8);
    try {
      l.spec = builtin::by_name(name);
    } catch (const std::invalid_argument&) {
      std::string all;
      for (const auto& n : builtin::names()) all += " " + n;
      throw ConfigError("'" + c.metric + "' is neither a readable file nor a builtin metric (builtins:" + all + ")");
    }
  }
  if (!c.volume.empty()) {
    try {
      vol = VolumeDensity::parse(c.volume, l.spec.dimension);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  l.explicit_volume = vol.has_value();
  l.vol = vol ? *vol : default_volume(l.spec);
  if (c.quad > 0) l.vol.quadrature_points = c.quad;
  return l;
}

Vec parse_point(const std::string& text, int n, const char* what) {
  Vec v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": cannot read '" + item + "' as a number");
    }
  }
  if (static_cast<int>(v.size()) != n) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(n) + " comma-separated numbers");
  }
  return v;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write '" + c.out + "'");
  f << text;
}

Conventions frozen_conventions() {
  const CalibrationReport cal = calibrate_conventions();
  if (!cal.ok) std::cerr << "warning: sign calibration: " << cal.message << "; using defaults\n";
  return cal.ok ? cal.conventions : Conventions{};
}

json conventions_json(const Conventions& c) {
  return {{"s", c.frame_sign}, {"landsberg_sign", c.landsberg_sign}, {"kappa", c.kappa},
          {"curvature_sign", c.curvature_sign}};
}

json tensor(const std::vector<double>& flat, std::vector<int> shape) {
  return {{"shape", shape}, {"values", flat}};
}

// ---------------------------------------------------------------------------

json eval_quantity(const std::string& tag, LocalGeometry& geo, const Conventions& conv) {
  const int n = geo.dim();
  Vec v;
  if (tag == "F") return geo.F().value();
  if (tag == "tau") return geo.tau().value();
  if (tag == "S") return geo.S_big().value();
  if (tag == "e") return geo.e_scalar().value();
  if (tag == "Ricci") return geo.ricci().value();
  if (tag == "K") return scalar_jet(geo, ScalarTag::K).value();
  if (tag == "g" || tag == "N" || tag == "E" || tag == "R") {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        v.push_back(tag == "g" ? geo.g(i, j).value()
                    : tag == "N" ? geo.N(i, j).value()
                    : tag == "E" ? geo.E(i, j).value()
                                 : geo.R(i, j).value());
      }
    }
    return tensor(v, {n, n});
  }
  if (tag == "G" || tag == "J" || tag == "I") {
    for (int i = 0; i < n; ++i) {
      if (tag == "G") v.push_back(geo.G(i).value());
      if (tag == "J") v.push_back(geo.J(i).value());
      if (tag == "I") {
        double s = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) s += geo.g_inv(a, b).value() * geo.cartan(a, b, i);
        }
        v.push_back(s);
      }
    }
    return tensor(v, {n});
  }
  if (tag == "A" || tag == "Gamma" || tag == "L") {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          v.push_back(tag == "A"       ? geo.F().value() * geo.cartan(i, j, k)
                      : tag == "Gamma" ? geo.chern(i, j, k).value()
                                       : geo.L(i, j, k).value());
        }
      }
    }
    return tensor(v, {n, n, n});
  }
  if (tag == "B") {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) v.push_back(geo.berwald_curvature(i, j, k, l).value());
        }
      }
    }
    return tensor(v, {n, n, n, n});
  }
  const HHCurvature hh = hh_from(geo, conv);
  if (tag == "Sigma_bar") return tensor(hh.sigma_bar, {n, n});
  if (tag == "trR") return tensor(hh.trR, {n, n});
  return tensor(hh.trR_berwald, {n, n});
}

int cmd_eval(const Common& c, const std::string& xs, const std::string& ys, const std::string& qs) {
  std::vector<std::string> tags;
  if (qs == "all") {
    tags = quantity_tags;
  } else {
    std::stringstream ss(qs);
    std::string t;
    while (std::getline(ss, t, ',')) {
      if (std::find(quantity_tags.begin(), quantity_tags.end(), t) == quantity_tags.end()) {
        std::string valid;
        for (const auto& q : quantity_tags) valid += " " + q;
        throw UsageError("unknown quantity '" + t + "'; valid tags:" + valid + " (or all)");
      }
      tags.push_back(t);
    }
  }
  const Loaded l = load(c);
  const Vec x = parse_point(xs, l.spec.dimension, "--x");
  const Vec y = parse_point(ys, l.spec.dimension, "--y");
  if (!l.spec.contains(x)) throw DomainError("x lies outside the metric's domain");
  const Conventions conv = frozen_conventions();
  LocalGeometry geo(l.spec, x, y, l.vol, c.order);
  json q;
  for (const auto& t : tags) q[t] = eval_quantity(t, geo, conv);
  if (c.format == "csv") {
    std::ostringstream os;
    os << std::setprecision(17) << "quantity,index,value\n";
    for (const auto& t : tags) {
      if (q[t].is_number()) {
        os << t << ",," << q[t].get<double>() << '\n';
      } else {
        const auto vals = q[t]["values"].get<std::vector<double>>();
        for (std::size_t i = 0; i < vals.size(); ++i) os << t << ',' << i << ',' << vals[i] << '\n';
      }
    }
    emit(c, os.str());
  } else {
    json doc = {{"metric", l.spec.name}, {"volume", l.vol.describe()}, {"x", x}, {"y", y},
                {"order", c.order},      {"conventions", conventions_json(conv)}, {"quantities", q}};
    emit(c, doc.dump(2) + "\n");
  }
  return exit_pass;
}

// ---------------------------------------------------------------------------

int cmd_verify(const Common& c, SuiteConfig cfg, const std::string& metrics, bool metadata,
               std::optional<double> tol) {
  if (tol) cfg.tol = Tolerances::uniform(*tol);
  if (!c.metric.empty() || !c.expr.empty()) {
    // a single user metric replaces the list
    const Loaded l = load(c);
    cfg.metrics = {l.spec};
    if (l.explicit_volume) cfg.volume = l.vol;
  } else if (!c.volume.empty()) {
    throw UsageError("--volume needs --metric or --expr; the zoo uses per-metric defaults");
  } else if (metrics == "builtin-zoo") {
    cfg.metrics = builtin::zoo();
  } else if (metrics != "none" && !metrics.empty()) {
    std::stringstream ss(metrics);
    std::string name;
    while (std::getline(ss, name, ',')) {
      try {
        cfg.metrics.push_back(builtin::by_name(name));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  cfg.quadrature_points = c.quad;
  cfg.seed = c.seed;
  cfg.order = c.order;
  if (cfg.suite == "full") {
    cfg.identity_samples = std::max(cfg.identity_samples, 40);
    cfg.classify_points = std::max(cfg.classify_points, 5);
    cfg.oracle_samples = std::max(cfg.oracle_samples, 6);
  } else if (cfg.suite != "core") {
    throw UsageError("--suite must be core or full");
  }

  const SuiteReport rep = run_suite(cfg);
  emit(c, c.format == "csv" ? rep.to_csv() : rep.to_json(metadata));
  if (!rep.passed) {
    std::cerr << "identity failures:\n" << rep.failure_table();
    return exit_fail;
  }
  return exit_pass;
}

// ---------------------------------------------------------------------------

json classify_at(const Loaded& l, const Vec& x, const ClassifyOptions& opt) {
  const Verdict e = classify_e_isotropy(l.spec, l.vol, x, opt.num_dirs, opt.threshold);
  const SClassification s = classify_S(l.spec, l.vol, x, opt);
  const char* level = s.isotropic.decision ? "isotropic"
                      : s.almost.decision  ? "almost_isotropic"
                      : s.weakly.decision  ? "weakly_isotropic"
                                           : "not_weakly_isotropic";
  auto vj = [](const Verdict& v) {
    return json{{"kind", v.kind}, {"decision", v.decision}, {"threshold", v.threshold},
                {"measure", v.measure}, {"fitted", v.fitted}, {"xi", v.xi}};
  };
  return {{"x", x},
          {"e_isotropic", e.decision},
          {"c_from_e", e.fitted.at("c")},
          {"S", level},
          {"c", s.c},
          {"xi", s.xi},
          {"verdicts", {vj(e), vj(s.weakly), vj(s.almost), vj(s.isotropic)}}};
}

int cmd_classify(const Common& c, const std::string& xs, int dirs, double threshold) {
  const Loaded l = load(c);
  const Vec x = parse_point(xs, l.spec.dimension, "--x");
  if (!l.spec.contains(x)) throw DomainError("x lies outside the metric's domain");
  ClassifyOptions opt;
  opt.num_dirs = dirs;
  opt.threshold = threshold;
  opt.conventions = frozen_conventions();
  json doc = classify_at(l, x, opt);
  doc["metric"] = l.spec.name;
  doc["volume"] = l.vol.describe();
  doc["note"] = "single convex chart: closed xi is exact";
  emit(c, doc.dump(2) + "\n");
  return exit_pass;
}

int cmd_geodesic(const Common& c, const std::string& xs, const std::string& ys, int steps, double dt) {
  const Loaded l = load(c);
  const Vec x = parse_point(xs, l.spec.dimension, "--x");
  const Vec y = parse_point(ys, l.spec.dimension, "--y");
  if (!l.spec.contains(x)) throw DomainError("x lies outside the metric's domain");
  const Trajectory t = geodesic_integrate(l.spec, x, y, steps, dt);
  std::ostringstream os;
  t.write_csv(os);
  emit(c, os.str());
  if (t.exited) std::cerr << "note: " << t.message << '\n';
  return exit_pass;
}

int cmd_scan(const Common& c, int grid, int dirs, double threshold) {
  if (grid < 2) throw UsageError("--grid must be at least 2");
  const Loaded l = load(c);
  const int n = l.spec.dimension;
  Vec lo(n), hi(n);
  if (const auto* box = std::get_if<DomainBox>(&l.spec.domain)) {
    lo = box->lo;
    hi = box->hi;
  } else {
    const auto& ball = std::get<DomainBall>(l.spec.domain);
    for (int i = 0; i < n; ++i) {
      lo[i] = ball.center[i] - ball.radius;
      hi[i] = ball.center[i] + ball.radius;
    }
  }
  ClassifyOptions opt;
  opt.num_dirs = dirs;
  opt.threshold = threshold;
  opt.conventions = frozen_conventions();
  std::ostringstream os;
  os << std::setprecision(12);
  for (int i = 0; i < n; ++i) os << 'x' << i + 1 << ',';
  os << "e_spread,e_c,e_isotropic,S_fit_residual,S_c,xi_norm,S_verdict,status\n";
  // grid over the first two coordinates, the rest held at the domain centre;
  // nodes sit in the middle 80% so the x-stencil stays inside
  for (int a = 0; a < grid; ++a) {
    for (int b = 0; b < grid; ++b) {
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = 0.5 * (lo[i] + hi[i]);
      x[0] = lo[0] + (hi[0] - lo[0]) * (0.1 + 0.8 * a / (grid - 1));
      x[1] = lo[1] + (hi[1] - lo[1]) * (0.1 + 0.8 * b / (grid - 1));
      for (double v : x) os << v << ',';
      if (!l.spec.contains(x)) {
        os << ",,,,,,,outside_domain\n";
        continue;
      }
      try {
        const json r = classify_at(l, x, opt);
        const auto& ev = r["verdicts"][0];
        double xi = 0.0;
        for (double v : r["xi"].get<Vec>()) xi += v * v;
        os << ev["measure"].get<double>() << ',' << r["c_from_e"].get<double>() << ','
           << (r["e_isotropic"].get<bool>() ? 1 : 0) << ',' << r["verdicts"][1]["measure"].get<double>() << ','
           << r["c"].get<double>() << ',' << std::sqrt(xi) << ',' << r["S"].get<std::string>() << ",ok\n";
      } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        os << ",,,,,,,error: " << msg << '\n';
      }
    }
  }
  emit(c, os.str());
  return exit_pass;
}

void add_common(CLI::App* sub, Common& c, bool with_format) {
  sub->add_option("--metric", c.metric, "metric JSON file or builtin name (euclidean, sphere, funk2, ...)");
  sub->add_option("--expr", c.expr, "inline F(x, y) over x1..xn, y1..yn");
  sub->add_option("--dim", c.dim, "dimension for --expr")->check(CLI::Range(2, 16));
  sub->add_option("--volume", c.volume, "bh | riemannian | user:EXPR");
  sub->add_option("--quad", c.quad, "angular quadrature points for the BH density")->check(CLI::NonNegativeNumber);
  sub->add_option("--order", c.order, "jet order")->check(CLI::Range(2, 10));
  sub->add_option("--seed", c.seed, "sampling seed");
  sub->add_option("--out", c.out, "output path (default stdout)");
  if (with_format) sub->add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "finsler: curvature of Finsler metrics on a single coordinate chart.\n"
      "All results are chart-local; closed 1-forms are treated as exact."};
  app.require_subcommand(1);
  Common common;

  std::string xs, ys, quantities = "F,S,e,K";
  auto* eval = app.add_subcommand("eval", "curvature quantities at one (x, y)");
  add_common(eval, common, true);
  eval->add_option("--x", xs, "base point, comma separated")->required();
  eval->add_option("--y", ys, "direction, comma separated")->required();
  eval->add_option("--quantities", quantities, "comma-separated tags or 'all'");

  SuiteConfig suite;
  std::string metrics = "builtin-zoo";
  bool no_metadata = false;
  std::optional<double> tol;
  auto* verify = app.add_subcommand("verify", "run the identity suite");
  add_common(verify, common, true);
  verify->add_option("--suite", suite.suite, "core | full");
  verify->add_option("--metrics", metrics, "builtin-zoo | none | comma-separated builtin names");
  verify->add_option("--samples", suite.samples, "structure samples per metric")->check(CLI::NonNegativeNumber);
  verify->add_option("--identity-samples", suite.identity_samples, "frame-identity samples per metric")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--classify-points", suite.classify_points, "x samples for classifiers and scenarios")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--oracle-samples", suite.oracle_samples, "finite-difference spot checks per metric")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--tol", tol, "set every tolerance to T")->check(CLI::PositiveNumber);
  verify->add_flag("--no-metadata", no_metadata, "omit the timestamp block (comparison mode)");

  int dirs = 0;
  double threshold = 1e-5;
  auto* classify = app.add_subcommand("classify", "isotropy verdicts for e and S at x");
  add_common(classify, common, false);
  classify->add_option("--x", xs, "base point")->required();
  classify->add_option("--dirs", dirs, "directions sampled (0: default)");
  classify->add_option("--threshold", threshold, "classifier threshold");

  int steps = 200;
  double dt = 0.01;
  auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic, CSV trajectory");
  add_common(geodesic, common, false);
  geodesic->add_option("--x", xs, "initial point")->required();
  geodesic->add_option("--y", ys, "initial velocity")->required();
  geodesic->add_option("--steps", steps, "RK4 steps")->check(CLI::PositiveNumber);
  geodesic->add_option("--dt", dt, "step size")->check(CLI::PositiveNumber);

  int grid = 5;
  auto* scan = app.add_subcommand("scan", "grid of classifier results, CSV");
  add_common(scan, common, false);
  scan->add_option("--grid", grid, "nodes per axis");
  scan->add_option("--dirs", dirs, "directions sampled (0: default)");
  scan->add_option("--threshold", threshold, "classifier threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_usage;
  }

  try {
    if (*eval) return cmd_eval(common, xs, ys, quantities);
    if (*verify) return cmd_verify(common, suite, metrics, !no_metadata, tol);
    if (*classify) return cmd_classify(common, xs, dirs, threshold);
    if (*geodesic) return cmd_geodesic(common, xs, ys, steps, dt);
    if (*scan) return cmd_scan(common, grid, dirs, threshold);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_fail;
  }
  return exit_usage;
}
