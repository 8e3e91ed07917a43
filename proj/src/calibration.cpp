#include <cmath>

#include "finsler/verify.hpp"

namespace finsler {

Tolerances Tolerances::uniform(double t) {
  Tolerances out;
  out.structure = out.dtau = out.identity = out.quadrature = t;
  out.classifier = out.flag = out.trace = out.oracle = t;
  return out;
}

namespace {

std::string combo_key(int s, int l) {
  return std::string("s=") + (s > 0 ? "+1" : "-1") + ",l=" + (l > 0 ? "+1" : "-1");
}

// Best sign c for target ~ c * source and the residual max|target - c source|.
std::pair<int, double> fit_sign(const Vec& target, const Vec& source) {
  double dot = 0.0;
  for (std::size_t a = 0; a < target.size(); ++a) dot += target[a] * source[a];
  const int c = dot >= 0 ? 1 : -1;
  double r = 0.0;
  for (std::size_t a = 0; a < target.size(); ++a) r = std::max(r, std::abs(target[a] - c * source[a]));
  return {c, r};
}

}  // namespace

CalibrationReport calibrate_conventions(double tol) {
  const MetricSpec spec = builtin::randers_generic();
  const VolumeDensity vol = default_volume(spec);
  const std::vector<PointDir> points = {
      {{0.2, -0.3}, {0.6, 0.8}}, {{-0.4, 0.25}, {-0.9, 0.3}}, {{0.1, 0.5}, {0.2, -1.1}}};
  const int n = spec.dimension;

  CalibrationReport rep;
  std::map<std::pair<int, int>, double> residual;
  for (int s : {1, -1}) {
    for (int l : {1, -1}) residual[{s, l}] = 0.0;
  }
  Vec diff_all, L_all, yXy_chern, yXy_berwald, R_all;
  double scale = 0.0;

  for (const auto& p0 : points) {
    const PointDir p = normalize(spec, p0);
    LocalGeometry geo(spec, p.x, p.y, vol, 6);
    const Frame frame = adapted_frame(geo);
    for (int s : {1, -1}) {
      for (int l : {1, -1}) {
        Conventions c;
        c.frame_sign = s;
        c.landsberg_sign = l;
        const FrameTerms t = frame_terms_from(geo, frame, c, false);
        for (int a = 0; a < n - 1; ++a) {
          residual[{s, l}] = std::max(residual[{s, l}], std::abs(t.basic_equ4(a)));
          scale = std::max({scale, std::abs(t.S_comma[a]), std::abs(t.tau_bar[a]), std::abs(t.J[a])});
        }
      }
    }
    // Berwald - Chern coefficients against the raised Landsberg tensor
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          double L = 0.0;
          for (int m = 0; m < n; ++m) L += geo.g_inv(i, m).value() * geo.L(m, j, k).value();
          diff_all.push_back(geo.berwald(i, j, k).value() - geo.chern(i, j, k).value());
          L_all.push_back(L);
        }
      }
    }
    // y^j X^i_jkl y^l against the spray curvature, per connection
    for (Connection c : {Connection::chern, Connection::berwald}) {
      const auto& X = geo.hh_curvature(c);
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          double v = 0.0;
          for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) v += geo.y()[j] * X[geo.idx(i, j, k, l)] * geo.y()[l];
          }
          (c == Connection::chern ? yXy_chern : yXy_berwald).push_back(v);
          if (c == Connection::chern) R_all.push_back(geo.R(i, k).value());
        }
      }
    }
  }

  int passing = 0;
  std::pair<int, int> chosen{-1, -1};
  for (const auto& [key, r] : residual) {
    rep.basic_equ4_residuals[combo_key(key.first, key.second)] = r;
    if (r <= tol * (1.0 + scale)) {
      ++passing;
      chosen = key;
    }
  }
  rep.unique = passing == 1;
  rep.conventions.frame_sign = chosen.first;
  rep.conventions.landsberg_sign = chosen.second;

  const auto [kappa, kres] = fit_sign(diff_all, L_all);
  rep.conventions.kappa = kappa;
  rep.kappa_residual = kres;

  const auto [cs, cres] = fit_sign(R_all, yXy_chern);
  const auto [bs, bres] = fit_sign(R_all, yXy_berwald);
  rep.chern_sign = cs;
  rep.berwald_sign = bs;
  rep.curvature_residual_chern = cres;
  rep.curvature_residual_berwald = bres;
  rep.conventions.curvature_sign = cs;

  // Jacobi I orientation under the chosen conventions
  for (const auto& p0 : points) {
    const PointDir p = normalize(spec, p0);
    LocalGeometry geo(spec, p.x, p.y, vol, 6);
    const FrameTerms t = frame_terms_from(geo, adapted_frame(geo), rep.conventions, false);
    for (int a = 0; a < n - 1; ++a) {
      rep.jacobi1_residual = std::max(rep.jacobi1_residual, std::abs(t.jacobi1(a)));
      rep.jacobi1_flipped_residual = std::max(rep.jacobi1_flipped_residual, std::abs(t.jacobi1_flipped(a)));
    }
  }

  rep.ok = rep.unique && cs == bs && cres <= tol && bres <= tol && kres <= tol;
  rep.conventions.calibrated = rep.ok;
  if (!rep.unique) {
    rep.message = std::to_string(passing) + " sign combinations satisfy S_,a + tau_|a - J_a = 0";
  } else if (cs != bs) {
    rep.message = "Chern and Berwald hh-curvatures reproduce the spray curvature with different signs";
  } else if (!rep.ok) {
    rep.message = "calibration residual above tolerance";
  } else {
    rep.message = "unique consistent sign choice";
  }
  return rep;
}

}  // namespace finsler
