#include "finsler/curvature.hpp"

#include <cmath>

#include "finsler/spray.hpp"

namespace finsler {

double s_curvature(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p, SRoute route) {
  LocalGeometry geo(spec, p.x, p.y, vol, 3);
  return geo.S_big(route).value();
}

ECurvature e_from(LocalGeometry& geo) {
  const int n = geo.dim();
  ECurvature out;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) out.E.push_back(geo.E(j, k).value());
  }
  out.e = geo.e_scalar().value();
  return out;
}

ECurvature e_and_E(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p) {
  LocalGeometry geo(spec, p.x, p.y, vol, 5);
  return e_from(geo);
}

Landsberg landsberg_from(LocalGeometry& geo) {
  const int n = geo.dim();
  Landsberg out;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) out.L.push_back(geo.L(j, k, l).value());
    }
  }
  for (int k = 0; k < n; ++k) out.J.push_back(geo.J(k).value());
  return out;
}

Landsberg landsberg(const MetricSpec& spec, const PointDir& p) {
  LocalGeometry geo(spec, p.x, p.y, VolumeDensity{}, 5);
  return landsberg_from(geo);
}

double FlagCurvature::flag(const Vec& V) const {
  double gvv = 0.0, gyv = 0.0, vrv = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      gvv += g[i * n + j] * V[i] * V[j];
      gyv += g[i * n + j] * y[i] * V[j];
      vrv += V[i] * R_lower[i * n + j] * V[j];
    }
  }
  const double h = gvv - gyv * gyv / (F * F);
  if (!(h > 1e-12 * gvv)) throw std::invalid_argument("flag curvature: V is parallel to y");
  return vrv / (F * F * h);
}

FlagCurvature flag_from(LocalGeometry& geo) {
  const int n = geo.dim();
  FlagCurvature out;
  out.n = n;
  out.F = geo.F().value();
  out.y = geo.y();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.g.push_back(geo.g(i, j).value());
      out.Rspray.push_back(geo.R(i, j).value());
    }
  }
  out.R_lower.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) out.R_lower[i * n + k] += out.g[i * n + j] * out.Rspray[j * n + k];
    }
  }
  out.ricci = geo.ricci().value();
  return out;
}

FlagCurvature riemann_flag(const MetricSpec& spec, const PointDir& p, const std::optional<Vec>& V) {
  LocalGeometry geo(spec, p.x, p.y, VolumeDensity{}, 4);
  FlagCurvature out = flag_from(geo);
  if (V) out.K = out.flag(*V);
  return out;
}

HHCurvature hh_from(LocalGeometry& geo, const Conventions& conv) {
  const int n = geo.dim();
  HHCurvature out;
  out.R_chern = geo.hh_curvature(Connection::chern);
  out.R_berwald = geo.hh_curvature(Connection::berwald);
  for (double& v : out.R_chern) v *= conv.curvature_sign;
  for (double& v : out.R_berwald) v *= conv.curvature_sign;
  out.trR.assign(static_cast<std::size_t>(n) * n, 0.0);
  out.trR_berwald.assign(out.trR.size(), 0.0);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      for (int m = 0; m < n; ++m) {
        out.trR[k * n + l] += out.R_chern[geo.idx(m, m, k, l)];
        out.trR_berwald[k * n + l] += out.R_berwald[geo.idx(m, m, k, l)];
      }
    }
  }
  for (std::size_t a = 0; a < out.trR.size(); ++a) {
    out.sigma_bar.push_back(2.0 * (out.trR_berwald[a] - out.trR[a]));
  }
  return out;
}

HHCurvature chern_berwald_hh(const MetricSpec& spec, const PointDir& p, const Conventions& conv) {
  LocalGeometry geo(spec, p.x, p.y, VolumeDensity{}, 6);
  return hh_from(geo, conv);
}

double FrameTerms::jacobi2(int a) const {
  if (!K_comma) throw std::logic_error("jacobi2: K_{,alpha} not available (flag curvature not scalar)");
  return trR_n[a] + J_bar_n[a] + (n + 1) / 3.0 * (*K_comma)[a];
}

FrameTerms frame_terms_from(LocalGeometry& geo, const Frame& frame, const Conventions& conv,
                            bool scalar_flag) {
  const int n = geo.dim();
  const double F = geo.F().value();
  const double s = conv.frame_sign;
  const double lam = conv.landsberg_sign;
  FrameTerms out;
  out.n = n;

  const Jet S = geo.S_big() / geo.F();
  out.S = S.value();
  std::vector<Jet> dS;  // d(S-big)/dy^k
  for (int k = 0; k < n; ++k) dS.push_back(derivative(geo.S_big(), geo.yvar(k)));
  std::vector<Jet> J;
  for (int k = 0; k < n; ++k) J.push_back(geo.J(k));

  const Vec dS_bar = spray_direction(geo, horizontal_derivative(geo, dS, {Slot::covariant}));
  const Vec dS_bar_b =
      spray_direction(geo, horizontal_derivative(geo, dS, {Slot::covariant}, Connection::berwald));
  const Vec J_bar = spray_direction(geo, horizontal_derivative(geo, J, {Slot::covariant}));
  const HHCurvature hh = hh_from(geo, conv);

  std::optional<Jet> K;
  if (scalar_flag) K = scalar_jet(geo, ScalarTag::K);
  if (scalar_flag) out.K_comma.emplace();

  for (int a = 0; a < n - 1; ++a) {
    const Vec& u = frame.basis[a];
    double s_comma = 0, tau_bar = 0, j = 0, s_bar = 0, scn = 0, scn_b = 0, jn = 0, trn = 0, kc = 0;
    for (int k = 0; k < n; ++k) {
      s_comma += u[k] * S.gradient(geo.yvar(k));
      tau_bar += u[k] * geo.delta_value(geo.tau(), k);
      j += u[k] * J[k].value();
      s_bar += u[k] * geo.delta_value(S, k);
      scn += u[k] * dS_bar[k];
      scn_b += u[k] * dS_bar_b[k];
      jn += u[k] * J_bar[k];
      for (int l = 0; l < n; ++l) trn += u[k] * hh.trR[k * n + l] * geo.y()[l] / F;
      if (K) kc += u[k] * K->gradient(geo.yvar(k));
    }
    out.S_comma.push_back(s * F * s_comma);
    out.tau_bar.push_back(tau_bar);
    out.J.push_back(lam * j);
    out.S_bar.push_back(s_bar);
    out.S_comma_bar_n.push_back(s * scn);
    out.S_comma_bar_n_berwald.push_back(s * scn_b);
    out.J_bar_n.push_back(lam * jn);
    out.trR_n.push_back(trn);
    if (K) out.K_comma->push_back(s * F * kc);
  }
  return out;
}

FrameTerms frame_identity_terms(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p,
                                const Conventions& conv, bool scalar_flag) {
  const PointDir q = normalize(spec, p);
  LocalGeometry geo(spec, q.x, q.y, vol, 6);
  return frame_terms_from(geo, adapted_frame(geo), conv, scalar_flag);
}

CurvatureBundle curvature_bundle(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p,
                                 const Conventions& conv) {
  LocalGeometry geo(spec, p.x, p.y, vol, 6);
  CurvatureBundle b;
  b.n = spec.dimension;
  b.F = geo.F().value();
  b.S_big = geo.S_big(SRoute::distortion).value();
  b.S_big_divergence = geo.S_big(SRoute::divergence).value();
  b.S = b.S_big / b.F;
  b.E = e_from(geo);
  b.L = landsberg_from(geo);
  b.flag = flag_from(geo);
  b.hh = hh_from(geo, conv);
  return b;
}

}  // namespace finsler
