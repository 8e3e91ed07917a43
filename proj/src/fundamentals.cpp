#include "finsler/fundamentals.hpp"

#include <cassert>
#include <cmath>

namespace finsler {

std::string Conventions::describe() const {
  return "frame_sign=" + std::to_string(frame_sign) + " landsberg_sign=" +
         std::to_string(landsberg_sign) + " kappa=" + std::to_string(kappa) +
         " curvature_sign=" + std::to_string(curvature_sign) +
         (calibrated ? " (calibrated)" : " (assumed)");
}

Fundamentals fundamentals_from(LocalGeometry& geo) {
  const int n = geo.dim();
  Fundamentals f;
  f.n = n;
  f.F = geo.F().value();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      f.g.push_back(geo.g(i, j).value());
      f.g_inv.push_back(geo.g_inv(i, j).value());
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        const double c = geo.cartan(i, j, k);
        f.C.push_back(c);
        f.A.push_back(f.F * c);
      }
    }
  }
  f.I.assign(n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) f.I[k] += f.g_inv[geo.idx(i, j)] * f.C[geo.idx(i, j, k)];
    }
  }
  const Jet& t = geo.tau();
  f.tau = t.value();
  for (int i = 0; i < n; ++i) {
    f.dtau_dx.push_back(t.gradient(geo.xvar(i)));
    f.dtau_dy.push_back(t.gradient(geo.yvar(i)));
  }
  f.condition = geo.condition_number();
  return f;
}

Fundamentals fundamentals_at(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p) {
  LocalGeometry geo(spec, p.x, p.y, vol, 3);
  return fundamentals_from(geo);
}

double Frame::gram_residual() const {
  double r = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) r = std::max(r, std::abs(gram[a * n + b] - (a == b ? 1.0 : 0.0)));
  }
  return r;
}

namespace {

double inner(const Vec& g, int n, const Vec& u, const Vec& v) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s += g[i * n + j] * u[i] * v[j];
  }
  return s;
}

Frame build_frame(const Vec& g, double F, const Vec& y) {
  const int n = static_cast<int>(y.size());
  Frame fr;
  fr.n = n;
  for (double v : y) fr.e_n.push_back(v / F);

  // drop the axis most aligned with y
  double best = -1.0;
  for (int a = 0; a < n; ++a) {
    Vec e(n, 0.0);
    e[a] = 1.0;
    const double align = std::abs(inner(g, n, e, fr.e_n)) / std::sqrt(g[a * n + a]);
    if (align > best) {
      best = align;
      fr.dropped_axis = a;
    }
  }
  std::vector<Vec> done = {fr.e_n};
  for (int a = 0; a < n; ++a) {
    if (a == fr.dropped_axis) continue;
    Vec v(n, 0.0);
    v[a] = 1.0;
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& q : done) {
        const double c = inner(g, n, v, q);
        for (int i = 0; i < n; ++i) v[i] -= c * q[i];
      }
    }
    const double norm = std::sqrt(inner(g, n, v, v));
    assert(norm > 0);
    for (double& c : v) c /= norm;
    fr.basis.push_back(v);
    done.push_back(v);
  }
  fr.gram.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) fr.gram[a * n + b] = inner(g, n, fr.u(a), fr.u(b));
  }
  return fr;
}

}  // namespace

Frame adapted_frame(const Fundamentals& f, const PointDir& p) { return build_frame(f.g, f.F, p.y); }

Frame adapted_frame(LocalGeometry& geo) {
  const int n = geo.dim();
  Vec g;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g.push_back(geo.g(i, j).value());
  }
  return build_frame(g, geo.F().value(), geo.y());
}

ScalarTag parse_scalar_tag(const std::string& name) {
  if (name == "tau") return ScalarTag::tau;
  if (name == "S") return ScalarTag::S;
  if (name == "e") return ScalarTag::e;
  if (name == "K") return ScalarTag::K;
  throw std::invalid_argument("unknown scalar '" + name + "' (expected tau, S, e or K)");
}

Jet scalar_jet(LocalGeometry& geo, ScalarTag tag) {
  switch (tag) {
    case ScalarTag::tau: return geo.tau();
    case ScalarTag::S: return geo.S_big() / geo.F();
    case ScalarTag::e: return geo.e_scalar();
    case ScalarTag::K: return geo.ricci() / ((geo.dim() - 1) * geo.F2());
  }
  throw std::logic_error("unreachable");
}

PointDir normalize(const MetricSpec& spec, const PointDir& p) {
  const double F = evaluate_metric(spec, p.x, p.y);
  if (!(F > 0)) throw DomainError("normalize: F(x, y) <= 0");
  PointDir q = p;
  for (double& v : q.y) v /= F;
  return q;
}

double vertical_derivative(LocalGeometry& geo, const Frame& frame, ScalarTag tag, int alpha,
                           const Conventions& conv) {
  const int n = geo.dim();
  if (alpha < 0 || alpha >= n - 1) throw std::invalid_argument("vertical_derivative: bad frame index");
  const Jet phi = scalar_jet(geo, tag);
  double d = 0.0;
  for (int i = 0; i < n; ++i) d += frame.basis[alpha][i] * phi.gradient(geo.yvar(i));
  return conv.frame_sign * geo.F().value() * d;
}

double vertical_derivative(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p,
                           ScalarTag tag, int alpha, const Conventions& conv) {
  const PointDir q = normalize(spec, p);
  const int order = tag == ScalarTag::tau ? 3 : tag == ScalarTag::S ? 4 : 6;
  LocalGeometry geo(spec, q.x, q.y, vol, order);
  return vertical_derivative(geo, adapted_frame(geo), tag, alpha, conv);
}

}  // namespace finsler
