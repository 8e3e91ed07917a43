#include <cmath>

#include "finsler/quadrature.hpp"
#include "finsler/verify.hpp"

namespace finsler {

bool ScenarioReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

void ScenarioReport::add(const std::string& name, double value, double tol, bool pass) {
  checks.push_back({name, value, tol, pass});
}

namespace {

std::string at(int i) { return "@x" + std::to_string(i); }

// max over a few F-unit directions of |u_g u_m 2F E_ij - c/(n-1) delta_gm|
double frame_E_isotropy(const MetricSpec& spec, const VolumeDensity& vol, const Vec& x, double c) {
  const int n = spec.dimension;
  double worst = 0.0;
  for (const Vec& y : spread_directions(n, 3)) {
    const PointDir p = normalize(spec, PointDir{x, y});
    LocalGeometry geo(spec, p.x, p.y, vol, 5);
    const Frame fr = adapted_frame(geo);
    const double F = geo.F().value();
    for (int a = 0; a < n - 1; ++a) {
      for (int b = 0; b < n - 1; ++b) {
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) v += fr.basis[a][i] * fr.basis[b][j] * 2.0 * F * geo.E(i, j).value();
        }
        worst = std::max(worst, std::abs(v - (a == b ? c / (n - 1) : 0.0)));
      }
    }
  }
  return worst;
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

void check_lattice(ScenarioReport& rep, const SClassification& s, int i) {
  const bool ok = (!s.isotropic.decision || s.almost.decision) && (!s.almost.decision || s.weakly.decision);
  rep.add("verdict_lattice" + at(i), ok ? 0.0 : 1.0, 0.0, ok);
}

}  // namespace

ScenarioReport check_theorem1(const MetricSpec& spec, const VolumeDensity& vol,
                              const std::vector<Vec>& xs, const ScenarioOptions& opt) {
  ScenarioReport rep;
  rep.id = "theorem1";
  rep.metric = spec.name;
  const int n = spec.dimension;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vec& x = xs[i];
    const Verdict ve = classify_e_isotropy(spec, vol, x, opt.classify.num_dirs, opt.classify.threshold);
    const SClassification cs = classify_S(spec, vol, x, opt.classify);
    rep.verdicts.insert(rep.verdicts.end(), {ve, cs.weakly, cs.almost, cs.isotropic});
    check_lattice(rep, cs, static_cast<int>(i));
    const bool agree = ve.decision == cs.weakly.decision;
    rep.add("verdict_agreement" + at(static_cast<int>(i)), agree ? 0.0 : 1.0, 0.0, agree);
    if (ve.decision && cs.weakly.decision) {
      const double ce = ve.fitted.at("c");
      rep.add_le("c_agreement" + at(static_cast<int>(i)), std::abs(ce - cs.c) / (1.0 + std::abs(ce)),
                 opt.tol.quadrature);
      rep.add_le("frame_E_isotropy" + at(static_cast<int>(i)), frame_E_isotropy(spec, vol, x, ce),
                 opt.tol.classifier);
      rep.add_le("xi_alpha" + at(static_cast<int>(i)), cs.xi_alpha_check, opt.tol.classifier);
    }
  }
  (void)n;
  return rep;
}

ScenarioReport check_theorem2_cor12(const MetricSpec& spec, const VolumeDensity& vol,
                                    const std::vector<Vec>& xs, const ScenarioOptions& opt) {
  ScenarioReport rep;
  rep.id = "theorem2_cor12";
  rep.metric = spec.name;
  const int n = spec.dimension;
  if (xs.empty()) throw std::invalid_argument("check_theorem2_cor12: no x samples");

  // hypothesis certification
  std::vector<Verdict> ev;
  std::vector<SClassification> sv;
  double c_spread = 0.0, sigma_bar = 0.0, J = 0.0, trR = 0.0, S_max = 0.0, e_iso = 0.0;
  bool all_e_iso = true;
  for (const Vec& x : xs) {
    ev.push_back(classify_e_isotropy(spec, vol, x, opt.classify.num_dirs, opt.classify.threshold));
    sv.push_back(classify_S(spec, vol, x, opt.classify));
    all_e_iso = all_e_iso && ev.back().decision;
    c_spread = std::max(c_spread, std::abs(ev.back().fitted.at("c") - ev.front().fitted.at("c")));
    for (const Vec& y : spread_directions(n, 3)) {
      LocalGeometry geo(spec, x, y, vol, 6);
      const HHCurvature hh = hh_from(geo, opt.conventions);
      sigma_bar = std::max(sigma_bar, max_abs(hh.sigma_bar));
      trR = std::max(trR, max_abs(hh.trR));
      for (int k = 0; k < n; ++k) J = std::max(J, std::abs(geo.J(k).value()));
      S_max = std::max(S_max, std::abs(geo.S_big().value()));
    }
    e_iso = std::max(e_iso, frame_E_isotropy(spec, vol, x, ev.back().fitted.at("c")));
  }
  const double c0 = ev.front().fitted.at("c");
  const bool e_const = all_e_iso && c_spread <= opt.tol.classifier * (1.0 + std::abs(c0));
  const bool sigma_zero = sigma_bar <= opt.tol.trace;
  const bool J_zero = J <= opt.tol.structure;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rep.verdicts.insert(rep.verdicts.end(), {ev[i], sv[i].weakly, sv[i].almost, sv[i].isotropic});
    check_lattice(rep, sv[i], static_cast<int>(i));
  }

  std::vector<std::string> skipped;
  // Theorem 2: constant e and vanishing mean stretch => S almost isotropic with c = e
  if (e_const && sigma_zero) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      rep.add("thm2:almost_isotropic" + at(static_cast<int>(i)), sv[i].dxi, opt.tol.quadrature,
              sv[i].almost.decision);
      rep.add_le("thm2:c_equals_e" + at(static_cast<int>(i)), std::abs(sv[i].c - c0), opt.tol.quadrature);
    }
  } else {
    skipped.push_back("theorem2");
  }

  // Corollary 1: J = 0 and e = 0 => S = 0 up to the volume gauge
  if (J_zero && e_const && std::abs(c0) <= opt.tol.classifier) {
    rep.add_le("cor1:S_zero", S_max, opt.tol.structure);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      rep.add("cor1:xi_closed" + at(static_cast<int>(i)), sv[i].dxi, opt.tol.quadrature,
              sv[i].almost.decision);
    }
    // gauge change sigma -> sigma exp(-x1): xi shifts by dx1, c unchanged
    const VolumeDensity gauged = vol.with_gauge(ExprAst::x(0));
    double xi_err = 0.0, c_err = 0.0, potential_err = 0.0;
    std::vector<Vec> xi_fits;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const SFit base = fit_S(spec, vol, xs[i], opt.classify.num_dirs);
      const SFit shifted = fit_S(spec, gauged, xs[i], opt.classify.num_dirs);
      for (int k = 0; k < n; ++k) {
        xi_err = std::max(xi_err, std::abs(shifted.xi[k] - base.xi[k] - (k == 0 ? 1.0 : 0.0)));
      }
      c_err = std::max(c_err, std::abs(shifted.a - base.a) * (n - 1));
      xi_fits.push_back(shifted.xi);
    }
    // potential of the fitted xi along the segment x0 -> x_i (3-point Gauss rule)
    const auto gl = gauss_legendre(3);
    for (std::size_t i = 1; i < xs.size(); ++i) {
      double pot = 0.0;
      for (int q = 0; q < 3; ++q) {
        const double t = 0.5 * (gl.nodes[q] + 1.0);
        Vec xt(n);
        for (int k = 0; k < n; ++k) xt[k] = xs[0][k] + t * (xs[i][k] - xs[0][k]);
        const SFit f = fit_S(spec, gauged, xt, opt.classify.num_dirs);
        for (int k = 0; k < n; ++k) pot += 0.5 * gl.weights[q] * f.xi[k] * (xs[i][k] - xs[0][k]);
      }
      potential_err = std::max(potential_err, std::abs(pot - (xs[i][0] - xs[0][0])));
    }
    rep.add_le("cor1:gauge_xi_equals_df", xi_err, opt.tol.classifier);
    rep.add_le("cor1:gauge_c_unchanged", c_err, opt.tol.classifier);
    rep.add_le("cor1:gauge_potential", potential_err, opt.tol.classifier);
  } else {
    skipped.push_back("corollary1");
  }

  // Corollary 2: with J = 0, e constant <=> S almost constant <=> (trR = 0 and E isotropic)
  if (J_zero) {
    bool almost_const = true;
    for (const auto& s : sv) {
      almost_const = almost_const && s.almost.decision &&
                     std::abs(s.c - sv.front().c) <= opt.tol.quadrature * (1.0 + std::abs(s.c));
    }
    const bool trace_side = trR <= opt.tol.trace && e_iso <= opt.tol.classifier;
    const bool agree = e_const == almost_const && almost_const == trace_side;
    rep.add("cor2:equivalence", agree ? 0.0 : 1.0, 0.0, agree);
    rep.add("cor2:e_constant", c_spread, opt.tol.classifier, e_const);
    rep.add("cor2:trR_zero", trR, opt.tol.trace, trace_side || !e_const);
  } else {
    skipped.push_back("corollary2");
  }

  rep.applicable = skipped.size() < 3;
  if (!skipped.empty()) {
    rep.note = "hypotheses not certified for:";
    for (const auto& s : skipped) rep.note += " " + s;
    rep.note += " (J=" + std::to_string(J) + ", sigma_bar=" + std::to_string(sigma_bar) +
                ", e spread=" + std::to_string(c_spread) + ")";
  }
  rep.note += rep.note.empty() ? "" : "; ";
  rep.note += "single convex chart: closed xi is exact";
  return rep;
}

ScenarioReport check_corollary3(const MetricSpec& spec, const VolumeDensity& vol,
                                const std::vector<Vec>& xs, const ScenarioOptions& opt) {
  ScenarioReport rep;
  rep.id = "corollary3";
  rep.metric = spec.name;
  const int n = spec.dimension;
  const double h = opt.classify.stencil;

  std::vector<SClassification> sv;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Verdict flag = classify_scalar_flag(spec, xs[i], 64, opt.seed + i, opt.tol.flag);
    rep.verdicts.push_back(flag);
    sv.push_back(classify_S(spec, vol, xs[i], opt.classify));
    if (!flag.decision || !sv.back().weakly.decision) {
      rep.applicable = false;
      rep.note = flag.decision ? "S is not weakly isotropic" : "flag curvature is not scalar";
      return rep;
    }
  }

  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Vec& x = xs[i];
    // dc from a five-point stencil of c = mean e
    Vec dc(n, 0.0);
    for (int k = 0; k < n; ++k) {
      double c[4];
      int q = 0;
      for (double step : {2 * h, h, -h, -2 * h}) {
        Vec xk = x;
        xk[k] += step;
        c[q++] = classify_e_isotropy(spec, vol, xk, opt.classify.num_dirs, opt.classify.threshold)
                     .fitted.at("c");
      }
      dc[k] = (-c[0] + 8 * c[1] - 8 * c[2] + c[3]) / (12 * h);
    }
    const auto dirs = spread_directions(n, n == 2 ? 16 : 32);
    Vec rest;
    for (const Vec& y : dirs) {
      LocalGeometry geo(spec, x, y, vol, 4);
      const double F = geo.F().value();
      const double K = geo.ricci().value() / ((n - 1) * F * F);
      double dcy = 0.0;
      for (int k = 0; k < n; ++k) dcy += dc[k] * y[k];
      rest.push_back(K - 3.0 / (n * n - 1.0) * dcy / F);
    }
    double mean = 0.0;
    for (double r : rest) mean += r;
    mean /= rest.size();
    double resid = 0.0;
    for (double r : rest) resid = std::max(resid, std::abs(r - mean));
    const bool fit_small = resid <= opt.tol.classifier * (1.0 + std::abs(mean));

    Verdict kv;
    kv.kind = "K_weakly_isotropic";
    kv.metric = spec.name;
    kv.x = x;
    kv.decision = fit_small;
    kv.threshold = opt.tol.classifier;
    kv.measure = resid;
    kv.fitted["sigma"] = mean;
    kv.fitted["c"] = sv[i].c;
    for (int k = 0; k < n; ++k) kv.fitted["dc_" + std::to_string(k + 1)] = dc[k];
    rep.verdicts.push_back(kv);
    rep.verdicts.push_back(sv[i].almost);

    const bool agree = fit_small == sv[i].almost.decision;
    rep.add("K_fit_iff_almost" + at(static_cast<int>(i)), agree ? 0.0 : 1.0, 0.0, agree);

    double j2 = 0.0;
    for (const Vec& y : spread_directions(n, 2)) {
      const FrameTerms t = frame_identity_terms(spec, vol, PointDir{x, y}, opt.conventions, true);
      for (int a = 0; a < n - 1; ++a) j2 = std::max(j2, std::abs(t.jacobi2(a)));
    }
    rep.add_le("jacobi2" + at(static_cast<int>(i)), j2, opt.tol.trace);
  }
  return rep;
}

}  // namespace finsler
