#include <chrono>
#include <cmath>
#include <future>
#include <numeric>

#include "finsler/geometry.hpp"
#include "finsler/spray.hpp"
#include "finsler/verify.hpp"

namespace finsler {

namespace {

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

// Collects rows for one metric.
class Recorder {
 public:
  Recorder(std::string metric, std::vector<IdentityRow>& rows) : metric_(std::move(metric)), rows_(rows) {}

  void add(const std::string& id, int sample, const PointDir& p, double residual, double scale, double tol) {
    IdentityRow r;
    r.id = id;
    r.metric = metric_;
    r.sample = sample;
    r.x = p.x;
    r.y = p.y;
    r.residual = residual;
    r.scale = scale;
    r.tol = tol;
    r.passed = std::isfinite(residual) && residual <= tol * (1.0 + scale);
    rows_.push_back(std::move(r));
  }

 private:
  std::string metric_;
  std::vector<IdentityRow>& rows_;
};

// Sectional curvature from the Levi-Civita connection of g(x), for the
// Riemannian reduction check. Uses only x-jets of the matrix entries.
double classical_sectional(const MetricSpec& spec, const Vec& x, const Vec& y, const Vec& V) {
  const auto& fam = std::get<RiemannianFamily>(spec.family);
  const int n = spec.dimension;
  const auto space = jet_space(n, 2);
  std::vector<Jet> xs;
  for (int i = 0; i < n; ++i) xs.push_back(Jet::variable(space, i, x[i]));
  const std::vector<Jet> none(n, Jet::constant(space, 0.0));
  std::vector<Jet> g;
  for (const auto& e : fam.g) g.push_back(e.eval<Jet>(xs, none, xs[0]));
  JetMatrix gm(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gm(i, j) = g[i * n + j];
  }
  const JetMatrix gi = inverse(gm);
  // Gamma^i_jk as jets of order 1
  std::vector<Jet> Gam(n * n * n, Jet::constant(space, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Jet s = Jet::constant(space, 0.0);
        for (int m = 0; m < n; ++m) {
          s += gi(i, m) * (derivative(g[m * n + j], k) + derivative(g[m * n + k], j) -
                           derivative(g[j * n + k], m));
        }
        Gam[(i * n + j) * n + k] = 0.5 * s;
      }
    }
  }
  auto G = [&](int i, int j, int k) -> const Jet& { return Gam[(i * n + j) * n + k]; };
  // <R(V, y) y, V> with R^i_jkl = d_k G^i_lj - d_l G^i_kj + G^i_km G^m_lj - G^i_lm G^m_kj
  double num = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          double r = G(i, l, j).gradient(k) - G(i, k, j).gradient(l);
          for (int m = 0; m < n; ++m) {
            r += G(i, k, m).value() * G(m, l, j).value() - G(i, l, m).value() * G(m, k, j).value();
          }
          double gv = 0.0;
          for (int a = 0; a < n; ++a) gv += g[a * n + i].value() * V[a];
          num += gv * r * y[j] * V[k] * y[l];
        }
      }
    }
  }
  double yy = 0.0, vv = 0.0, yv = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double gab = g[a * n + b].value();
      yy += gab * y[a] * y[b];
      vv += gab * V[a] * V[b];
      yv += gab * y[a] * V[b];
    }
  }
  return num / (yy * vv - yv * yv);
}

struct MetricResult {
  std::vector<IdentityRow> rows;
  std::vector<ScenarioReport> scenarios;
  std::vector<std::string> errors;
};

void structure_suite(const MetricSpec& spec, const VolumeDensity& vol, const SuiteConfig& cfg,
                     const Conventions& conv, Recorder& rec, MetricResult& out) {
  const int n = spec.dimension;
  const Tolerances& tol = cfg.tol;
  const auto samples = sample_points(spec, cfg.samples, cfg.seed);
  const double lambda = 2.5;

  std::vector<std::pair<Vec, Vec>> pairs;
  for (const auto& p : samples) pairs.emplace_back(p.x, p.y);
  const ConvexityReport conv_rep = check_strong_convexity(spec, pairs);
  for (std::size_t s = 0; s < conv_rep.samples.size(); ++s) {
    const auto& c = conv_rep.samples[s];
    rec.add("convexity", static_cast<int>(s), samples[s], c.flagged ? 1.0 : 0.0, 0.0, 0.0);
    if (c.flagged) out.errors.push_back(spec.name + ": convexity guard at sample " + std::to_string(s) + ": " + c.reason);
  }
  if (!conv_rep.ok()) return;

  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PointDir& p = samples[s];
    const int id = static_cast<int>(s);
    try {
      LocalGeometry geo(spec, p.x, p.y, vol, cfg.order);
      const double F = geo.F().value();

      Vec ly(n);
      for (int i = 0; i < n; ++i) ly[i] = lambda * p.y[i];
      rec.add("homogeneity_F", id, p, std::abs(evaluate_metric(spec, p.x, ly) - lambda * F), lambda * F,
              tol.structure);

      double gyy = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) gyy += geo.g(i, j).value() * p.y[i] * p.y[j];
      }
      rec.add("g_yy", id, p, std::abs(gyy - F * F), F * F, tol.structure);

      // contractions with y that must vanish
      Vec Ay, Ascale, By, Bscale, Ey, Escale, Ly, Lscale;
      for (int i = 0; i < n; ++i) {
        double e = 0.0;
        for (int j = 0; j < n; ++j) {
          e += geo.E(i, j).value() * p.y[j];
          Escale.push_back(geo.E(i, j).value());
          double a = 0.0, l = 0.0;
          for (int k = 0; k < n; ++k) {
            a += F * geo.cartan(i, j, k) * p.y[k];
            l += geo.L(i, j, k).value() * p.y[k];
            Ascale.push_back(F * geo.cartan(i, j, k));
            Lscale.push_back(geo.L(i, j, k).value());
            double b = 0.0;
            for (int m = 0; m < n; ++m) {
              b += geo.berwald_curvature(i, j, k, m).value() * p.y[m];
              Bscale.push_back(geo.berwald_curvature(i, j, k, m).value());
            }
            By.push_back(b);
          }
          Ay.push_back(a);
          Ly.push_back(l);
        }
        Ey.push_back(e);
      }
      rec.add("A_y", id, p, max_abs(Ay), max_abs(Ascale), tol.structure);
      rec.add("B_y", id, p, max_abs(By), max_abs(Bscale), tol.structure);
      rec.add("E_y", id, p, max_abs(Ey), max_abs(Escale), tol.structure);
      rec.add("L_y", id, p, max_abs(Ly), max_abs(Lscale), tol.structure);

      const double S = geo.S_big().value();
      {
        LocalGeometry scaled(spec, p.x, ly, vol, 3);
        scaled.set_log_sigma(embed(geo.log_sigma(), scaled.space()));
        rec.add("homogeneity_S", id, p, std::abs(scaled.S_big().value() - lambda * S), std::abs(lambda * S),
                tol.structure);
      }
      rec.add("S_routes", id, p, std::abs(S - geo.S_big(SRoute::divergence).value()), std::abs(S),
              tol.identity);

      // spray invariants
      Vec Gy, Ny, Gam, kap, dtau, hess, Ry, Rsym;
      double Gscale = 0.0, Nscale = 0.0, hscale = 0.0, Rscale = 0.0, dscale = 0.0;
      for (int i = 0; i < n; ++i) {
        double gy = 0.0, ny = 0.0;
        for (int k = 0; k < n; ++k) {
          gy += p.y[k] * geo.G(i).gradient(geo.yvar(k));
          ny += geo.N(i, k).value() * p.y[k];
          double gk = 0.0;
          for (int j = 0; j < n; ++j) gk += geo.berwald(i, j, k).value() * p.y[j];
          Gam.push_back(gk - geo.N(i, k).value());
          Nscale = std::max(Nscale, std::abs(geo.N(i, k).value()));
        }
        Gscale = std::max(Gscale, std::abs(geo.G(i).value()));
        Gy.push_back(gy - 2.0 * geo.G(i).value());
        Ny.push_back(ny - 2.0 * geo.G(i).value());
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double L = 0.0;
            for (int m = 0; m < n; ++m) L += geo.g_inv(i, m).value() * geo.L(m, j, k).value();
            kap.push_back(geo.berwald(i, j, k).value() - geo.chern(i, j, k).value() - conv.kappa * L);
          }
        }
        // vertical part of d tau
        double gc = 0.0;
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) gc += geo.g_inv(a, b).value() * geo.cartan(a, b, i);
        }
        const double dt = geo.tau().gradient(geo.yvar(i));
        dtau.push_back(dt - gc);
        dscale = std::max(dscale, std::abs(gc));
        for (int k = 0; k < n; ++k) {
          std::vector<int> ex(2 * n, 0);
          ex[n + i] += 1;
          ex[n + k] += 1;
          const double d2 = geo.S_big().partial(ex);
          hess.push_back(geo.E(i, k).value() - 0.5 * d2);
          hscale = std::max(hscale, std::abs(geo.E(i, k).value()));
          Rscale = std::max(Rscale, std::abs(geo.R(i, k).value()));
          double rs = 0.0;
          for (int m = 0; m < n; ++m) {
            rs += geo.g(i, m).value() * geo.R(m, k).value() - geo.g(k, m).value() * geo.R(m, i).value();
          }
          Rsym.push_back(rs);
        }
        double ry = 0.0;
        for (int k = 0; k < n; ++k) ry += geo.R(i, k).value() * p.y[k];
        Ry.push_back(ry);
      }
      rec.add("G_homogeneity", id, p, max_abs(Gy), Gscale, tol.structure);
      rec.add("N_y", id, p, max_abs(Ny), Gscale, tol.structure);
      rec.add("connection_y", id, p, max_abs(Gam), Nscale, tol.structure);
      rec.add("berwald_minus_chern", id, p, max_abs(kap), Nscale, tol.structure);
      rec.add("dtau_vertical", id, p, max_abs(dtau), dscale, tol.dtau);
      rec.add("hessian_S", id, p, max_abs(hess), hscale, tol.identity);
      rec.add("R_y", id, p, max_abs(Ry), Rscale, tol.structure);
      rec.add("R_symmetric", id, p, max_abs(Rsym), Rscale, tol.structure);

      if (spec.is_riemannian()) {
        Vec zeros;
        for (int i = 0; i < n; ++i) {
          zeros.push_back(geo.J(i).value());
          for (int j = 0; j < n; ++j) {
            zeros.push_back(geo.E(i, j).value());
            for (int k = 0; k < n; ++k) {
              zeros.push_back(F * geo.cartan(i, j, k));
              zeros.push_back(geo.L(i, j, k).value());
            }
          }
        }
        rec.add("riemannian_AEJL_zero", id, p, max_abs(zeros), 0.0, tol.dtau);
        rec.add("riemannian_S_zero", id, p, std::abs(S), 0.0, tol.structure);
        if (s < 20) {
          const HHCurvature hh = hh_from(geo, conv);
          rec.add("riemannian_sigma_bar_zero", id, p, max_abs(hh.sigma_bar), 0.0, tol.flag);
          const FlagCurvature fc = flag_from(geo);
          Vec V(n, 0.0);
          V[(s + 1) % n] = 1.0;
          V[s % n] += 0.3;
          rec.add("flag_vs_sectional", id, p,
                  std::abs(fc.flag(V) - classical_sectional(spec, p.x, p.y, V)), 1.0, tol.structure);
        }
      }
    } catch (const std::exception& e) {
      out.errors.push_back(spec.name + ": sample " + std::to_string(s) + ": " + e.what());
      rec.add("sample_error", id, p, INFINITY, 0.0, 0.0);
    }
  }
}

void identity_suite(const MetricSpec& spec, const VolumeDensity& vol, const SuiteConfig& cfg,
                    const Conventions& conv, Recorder& rec, MetricResult& out) {
  const int n = spec.dimension;
  const Tolerances& tol = cfg.tol;
  const auto samples = sample_points(spec, cfg.identity_samples, cfg.seed + 1);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const int id = static_cast<int>(s);
    const PointDir p = normalize(spec, samples[s]);
    try {
      const bool scalar = classify_scalar_flag(spec, p.x, 16, cfg.seed + s, tol.flag).decision;
      LocalGeometry geo(spec, p.x, p.y, vol, cfg.order);
      const Frame frame = adapted_frame(geo);
      const FrameTerms t = frame_terms_from(geo, frame, conv, scalar);
      Vec b4, j1, j2, conn;
      double scale = 0.0, jscale = 0.0;
      for (int a = 0; a < n - 1; ++a) {
        b4.push_back(t.basic_equ4(a));
        j1.push_back(t.jacobi1(a));
        conn.push_back(t.S_comma_bar_n[a] - t.S_comma_bar_n_berwald[a]);
        scale = std::max({scale, std::abs(t.S_comma[a]), std::abs(t.tau_bar[a]), std::abs(t.J[a])});
        jscale = std::max({jscale, std::abs(t.S_bar[a]), std::abs(t.S_comma_bar_n[a]), std::abs(t.J_bar_n[a]),
                           std::abs(t.trR_n[a])});
        if (scalar) j2.push_back(t.jacobi2(a));
      }
      rec.add("frame_gram", id, p, frame.gram_residual(), 1.0, tol.structure);
      rec.add("basic_equ4", id, p, max_abs(b4), scale, tol.identity);
      rec.add("jacobi1", id, p, max_abs(j1), jscale, tol.identity);
      rec.add("S_comma_n_connections", id, p, max_abs(conn), jscale, tol.identity);
      if (scalar) rec.add("jacobi2", id, p, max_abs(j2), jscale, tol.trace);

      if (spec.is_funk()) {
        const double F = geo.F().value();
        rec.add("funk_S_over_F", id, p, std::abs(geo.S_big().value() / F - (n + 1) / 2.0), 0.0, tol.quadrature);
        rec.add("funk_e", id, p, std::abs(geo.e_scalar().value() - (n - 1) * (n + 1) / 2.0), 0.0,
                tol.quadrature);
        const FlagCurvature fc = flag_from(geo);
        std::mt19937_64 rng(cfg.seed + 100 + s);
        std::normal_distribution<double> normal;
        double worst = 0.0;
        for (int f = 0; f < 64; ++f) {
          Vec V(n);
          for (double& c : V) c = normal(rng);
          worst = std::max(worst, std::abs(fc.flag(V) + 0.25));
        }
        rec.add("funk_K", id, p, worst, 0.0, tol.flag);
        const HHCurvature hh = hh_from(geo, conv);
        rec.add("trace_equation", id, p, max_abs(hh.trR_berwald), 0.0, tol.trace);
      }
    } catch (const std::exception& e) {
      out.errors.push_back(spec.name + ": identity sample " + std::to_string(s) + ": " + e.what());
      rec.add("sample_error", id, p, INFINITY, 0.0, 0.0);
    }
  }
}

void oracle_suite(const MetricSpec& spec, const VolumeDensity& vol, const SuiteConfig& cfg, Recorder& rec,
                  MetricResult& out) {
  const int n = spec.dimension;
  const auto samples = sample_points(spec, cfg.oracle_samples, cfg.seed + 2);
  std::mt19937_64 rng(cfg.seed + 3);
  std::uniform_int_distribution<int> var(0, 2 * n - 1), deg(0, 3), comp(0, n - 1);
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const PointDir& p = samples[s];
    const int id = static_cast<int>(s);
    try {
      for (auto [q, name] : {std::pair{OracleQuantity::F2, "oracle_F2"}, std::pair{OracleQuantity::G, "oracle_G"},
                             std::pair{OracleQuantity::S_big, "oracle_S"}}) {
        double worst = 0.0, scale = 0.0;
        // value, a first, a second and a third order partial
        for (int d = 0; d <= 3; ++d) {
          std::vector<int> ex(2 * n, 0);
          for (int k = 0; k < d; ++k) ex[var(rng)] += 1;
          const int c = comp(rng);
          const double a = fd_oracle(spec, vol, q, c, p, ex);
          const double b = jet_partial(spec, vol, q, c, p, ex);
          worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(b)));
          scale = std::max(scale, std::abs(b));
        }
        rec.add(name, id, p, worst, 0.0, cfg.tol.oracle);
      }
      if (spec.is_funk()) {
        // the Funk S constant through the difference path alone
        const PointDir u = normalize(spec, p);
        const double S = fd_oracle(spec, vol, OracleQuantity::S_big, 0, u, std::vector<int>(2 * n, 0));
        rec.add("oracle_funk_S", id, p, std::abs(S - (n + 1) / 2.0), 0.0, cfg.tol.quadrature);
      }
    } catch (const std::exception& e) {
      out.errors.push_back(spec.name + ": oracle sample " + std::to_string(s) + ": " + e.what());
      rec.add("sample_error", id, p, INFINITY, 0.0, 0.0);
    }
  }
}

MetricResult run_metric(const MetricSpec& spec, const SuiteConfig& cfg, const Conventions& conv) {
  MetricResult out;
  Recorder rec(spec.name, out.rows);
  VolumeDensity vol;
  try {
    spec.validate();
    vol = cfg.volume ? *cfg.volume : default_volume(spec, cfg.quadrature_points);
    if (cfg.quadrature_points > 0) vol.quadrature_points = cfg.quadrature_points;
  } catch (const std::exception& e) {
    out.errors.push_back(spec.name + ": " + e.what());
    return out;
  }
  structure_suite(spec, vol, cfg, conv, rec, out);
  identity_suite(spec, vol, cfg, conv, rec, out);
  if (cfg.oracle_samples > 0) oracle_suite(spec, vol, cfg, rec, out);

  ScenarioOptions so;
  so.tol = cfg.tol;
  so.conventions = conv;
  so.classify.conventions = conv;
  so.classify.threshold = cfg.tol.classifier;
  so.seed = cfg.seed;
  std::vector<Vec> xs;
  for (const auto& p : sample_points(spec, cfg.classify_points, cfg.seed + 4)) xs.push_back(p.x);
  if (!xs.empty()) {
    using Check = ScenarioReport (*)(const MetricSpec&, const VolumeDensity&, const std::vector<Vec>&,
                                     const ScenarioOptions&);
    for (Check check : {Check(check_theorem1), Check(check_theorem2_cor12), Check(check_corollary3)}) {
      try {
        out.scenarios.push_back(check(spec, vol, xs, so));
      } catch (const std::exception& e) {
        out.errors.push_back(spec.name + ": scenario: " + e.what());
      }
    }
  }
  return out;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport rep;
  rep.engine = engine_version;
  rep.tol = config.tol;
  rep.seed = config.seed;
  rep.timestamp = utc_now();
  if (config.metrics.empty()) return rep;

  rep.calibration = calibrate_conventions(config.tol.identity);
  if (!rep.calibration.ok) rep.errors.push_back("calibration: " + rep.calibration.message);
  const Conventions conv = rep.calibration.conventions;

  // one task per metric; results are merged in input order
  std::vector<std::future<MetricResult>> tasks;
  for (const auto& spec : config.metrics) {
    tasks.push_back(std::async(std::launch::async, run_metric, std::cref(spec), std::cref(config), conv));
  }
  for (auto& t : tasks) {
    MetricResult r = t.get();
    rep.rows.insert(rep.rows.end(), r.rows.begin(), r.rows.end());
    rep.scenarios.insert(rep.scenarios.end(), r.scenarios.begin(), r.scenarios.end());
    rep.errors.insert(rep.errors.end(), r.errors.begin(), r.errors.end());
  }

  std::map<std::pair<std::string, std::string>, std::size_t> where;
  for (const auto& r : rep.rows) {
    auto key = std::make_pair(r.metric, r.id);
    auto it = where.find(key);
    if (it == where.end()) {
      it = where.emplace(key, rep.per_identity.size()).first;
      IdentitySummary s;
      s.id = r.id;
      s.metric = r.metric;
      s.tol = r.tol;
      rep.per_identity.push_back(s);
    }
    IdentitySummary& s = rep.per_identity[it->second];
    s.max_residual = std::max(s.max_residual, std::isfinite(r.residual) ? r.residual : INFINITY);
    ++s.samples;
    if (!r.passed) {
      ++s.failures;
      s.passed = false;
    }
  }

  rep.passed = rep.calibration.ok && rep.errors.empty();
  for (const auto& s : rep.per_identity) rep.passed = rep.passed && s.passed;
  for (const auto& s : rep.scenarios) rep.passed = rep.passed && s.passed();
  return rep;
}

}  // namespace finsler
