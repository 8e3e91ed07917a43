#include <Eigen/Dense>
#include <cmath>

#include "finsler/quadrature.hpp"
#include "finsler/verify.hpp"

namespace finsler {

VolumeDensity default_volume(const MetricSpec& spec, int quadrature_points) {
  if (spec.is_riemannian()) return VolumeDensity::riemannian();
  return VolumeDensity::busemann_hausdorff(quadrature_points);
}

std::vector<PointDir> sample_points(const MetricSpec& spec, int count, std::uint64_t seed) {
  const int n = spec.dimension;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  std::normal_distribution<double> normal;
  std::vector<PointDir> out;
  while (static_cast<int>(out.size()) < count) {
    PointDir p;
    p.x.resize(n);
    if (const auto* box = std::get_if<DomainBox>(&spec.domain)) {
      for (int i = 0; i < n; ++i) {
        const double mid = 0.5 * (box->lo[i] + box->hi[i]);
        const double half = 0.5 * (box->hi[i] - box->lo[i]);
        p.x[i] = mid + 0.5 * half * unit(rng);
      }
    } else {
      const auto& ball = std::get<DomainBall>(spec.domain);
      double r2;
      do {
        r2 = 0.0;
        for (int i = 0; i < n; ++i) {
          p.x[i] = unit(rng);
          r2 += p.x[i] * p.x[i];
        }
      } while (r2 > 1.0);
      for (int i = 0; i < n; ++i) p.x[i] = ball.center[i] + 0.5 * ball.radius * p.x[i];
    }
    p.y.resize(n);
    double norm = 0.0;
    for (double& v : p.y) {
      v = normal(rng);
      norm += v * v;
    }
    const double s = scale(rng) / std::sqrt(norm);
    for (double& v : p.y) v *= s;
    if (spec.contains(p.x)) out.push_back(std::move(p));
  }
  return out;
}

namespace {

int default_dirs(int n, int requested) {
  if (requested > 0) return requested;
  return n == 2 ? 16 : 32;
}

Jet log_density(const VolumeDensity& vol, const MetricSpec& spec, const Vec& x, int order) {
  return log(density(vol, spec, x, JetSpec{2 * spec.dimension, order}));
}

Vec offset(const Vec& x, int axis, double h) {
  Vec y = x;
  y[axis] += h;
  return y;
}

}  // namespace

Verdict classify_e_isotropy(const MetricSpec& spec, const VolumeDensity& vol, const Vec& x,
                            int num_dirs, double threshold) {
  const int n = spec.dimension;
  num_dirs = default_dirs(n, num_dirs);
  if (num_dirs < 2 * (n - 1) + 2) throw std::invalid_argument("classify_e_isotropy: too few directions");
  double lo = INFINITY, hi = -INFINITY, sum = 0.0;
  for (const Vec& y : spread_directions(n, num_dirs)) {
    LocalGeometry geo(spec, x, y, vol, 5);
    const double e = geo.e_scalar().value();
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    sum += e;
  }
  Verdict v;
  v.kind = "e_isotropic";
  v.metric = spec.name;
  v.x = x;
  v.threshold = threshold;
  v.measure = hi - lo;
  const double mean = sum / num_dirs;
  v.fitted["c"] = mean;
  v.fitted["spread"] = hi - lo;
  v.decision = v.measure <= threshold * (1.0 + std::abs(mean));
  return v;
}

SFit fit_S(const MetricSpec& spec, const VolumeDensity& vol, const Vec& x, int num_dirs) {
  const int n = spec.dimension;
  num_dirs = default_dirs(n, num_dirs);
  const auto dirs = spread_directions(n, num_dirs);
  const Jet ls = log_density(vol, spec, x, 3);
  Eigen::MatrixXd A(num_dirs, n + 1);
  Eigen::VectorXd b(num_dirs);
  for (int d = 0; d < num_dirs; ++d) {
    LocalGeometry geo(spec, x, dirs[d], vol, 3);
    geo.set_log_sigma(ls);
    A(d, 0) = geo.F().value();
    for (int i = 0; i < n; ++i) A(d, 1 + i) = dirs[d][i];
    b(d) = geo.S_big().value();
  }
  const auto qr = A.colPivHouseholderQr();
  if (qr.rank() < n + 1) throw std::runtime_error("fit_S: rank-deficient fit");
  const Eigen::VectorXd w = qr.solve(b);
  SFit fit;
  fit.a = w(0);
  for (int i = 0; i < n; ++i) fit.xi.push_back(w(1 + i));
  fit.residual = (A * w - b).cwiseAbs().maxCoeff();
  fit.scale = b.cwiseAbs().maxCoeff();
  return fit;
}

SClassification classify_S(const MetricSpec& spec, const VolumeDensity& vol, const Vec& x,
                           const ClassifyOptions& opt) {
  const int n = spec.dimension;
  const int dirs = default_dirs(n, opt.num_dirs);
  if (dirs < 2 * (n - 1) + 2) throw std::invalid_argument("classify_S: too few directions");
  const SFit fit = fit_S(spec, vol, x, dirs);

  SClassification out;
  out.c = fit.a * (n - 1);
  out.xi = fit.xi;
  out.fit_residual = fit.residual;
  double xi_norm = 0.0;
  for (double v : fit.xi) xi_norm += v * v;
  xi_norm = std::sqrt(xi_norm);

  auto make = [&](const char* kind) {
    Verdict v;
    v.kind = kind;
    v.metric = spec.name;
    v.x = x;
    v.xi = fit.xi;
    v.fitted["c"] = out.c;
    v.fitted["fit_residual"] = fit.residual;
    v.fitted["xi_norm"] = xi_norm;
    return v;
  };

  out.weakly = make("S_weakly_isotropic");
  out.weakly.threshold = opt.threshold;
  out.weakly.measure = fit.residual;
  out.weakly.decision = fit.residual <= opt.threshold * (1.0 + fit.scale);

  // xi_alpha = -S_{,alpha} on a couple of F-unit directions
  {
    const Jet ls = log_density(vol, spec, x, 4);
    for (const Vec& y : spread_directions(n, 2)) {
      const PointDir p = normalize(spec, PointDir{x, y});
      LocalGeometry geo(spec, p.x, p.y, vol, 4);
      geo.set_log_sigma(ls);
      const Frame frame = adapted_frame(geo);
      for (int a = 0; a < n - 1; ++a) {
        double xa = 0.0;
        for (int i = 0; i < n; ++i) xa += fit.xi[i] * frame.basis[a][i];
        const double sa = vertical_derivative(geo, frame, ScalarTag::S, a, opt.conventions);
        out.xi_alpha_check = std::max(out.xi_alpha_check, std::abs(xa + sa));
      }
    }
  }
  out.weakly.fitted["xi_alpha_check"] = out.xi_alpha_check;

  out.almost = make("S_almost_isotropic");
  out.almost.threshold = opt.dxi_threshold;
  if (out.weakly.decision && opt.almost) {
    const double h = opt.stencil;
    // d_i xi_j from fourth-order central differences
    std::vector<Vec> dxi(n, Vec(n, 0.0));
    bool stencil_ok = true;
    for (int i = 0; i < n && stencil_ok; ++i) {
      std::vector<Vec> xi_at;
      for (double step : {2 * h, h, -h, -2 * h}) {
        const Vec xs = offset(x, i, step);
        if (!spec.contains(xs)) {
          stencil_ok = false;
          break;
        }
        xi_at.push_back(fit_S(spec, vol, xs, dirs).xi);
      }
      if (!stencil_ok) break;
      for (int j = 0; j < n; ++j) {
        dxi[i][j] = (-xi_at[0][j] + 8 * xi_at[1][j] - 8 * xi_at[2][j] + xi_at[3][j]) / (12 * h);
      }
    }
    if (stencil_ok) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) out.dxi = std::max(out.dxi, std::abs(dxi[i][j] - dxi[j][i]));
      }
      out.almost.measure = out.dxi;
      out.almost.decision = out.dxi <= opt.dxi_threshold * (1.0 + xi_norm);
    } else {
      out.almost.measure = INFINITY;
    }
  } else {
    out.almost.measure = INFINITY;
  }
  out.almost.fitted["dxi"] = out.dxi;

  out.isotropic = make("S_isotropic");
  out.isotropic.threshold = opt.threshold;
  out.isotropic.measure = xi_norm;
  out.isotropic.decision = out.almost.decision && xi_norm <= opt.threshold * (1.0 + std::abs(out.c));
  return out;
}

Verdict classify_scalar_flag(const MetricSpec& spec, const Vec& x, int flags, std::uint64_t seed,
                             double threshold) {
  const int n = spec.dimension;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Verdict v;
  v.kind = "scalar_flag";
  v.metric = spec.name;
  v.x = x;
  v.threshold = threshold;
  double worst = 0.0, ksum = 0.0;
  int count = 0;
  for (const Vec& y : spread_directions(n, 4)) {
    LocalGeometry geo(spec, x, y, VolumeDensity{}, 4);
    const FlagCurvature fc = flag_from(geo);
    double lo = INFINITY, hi = -INFINITY;
    for (int f = 0; f < flags; ++f) {
      Vec V(n);
      for (double& c : V) c = normal(rng);
      const double K = fc.flag(V);
      lo = std::min(lo, K);
      hi = std::max(hi, K);
      ksum += K;
      ++count;
    }
    const double mid = 0.5 * (lo + hi);
    worst = std::max(worst, (hi - lo) / (1.0 + std::abs(mid)));
  }
  v.measure = worst;
  v.fitted["K_mean"] = ksum / count;
  v.decision = worst <= threshold;
  return v;
}

}  // namespace finsler
