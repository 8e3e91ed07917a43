#include "finsler/volume.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "finsler/jet_matrix.hpp"
#include "finsler/quadrature.hpp"

namespace finsler {

VolumeDensity VolumeDensity::busemann_hausdorff(int points) {
  VolumeDensity v;
  v.quadrature_points = points;
  return v;
}

VolumeDensity VolumeDensity::riemannian() {
  VolumeDensity v;
  v.kind = VolumeKind::riemannian;
  return v;
}

VolumeDensity VolumeDensity::user(ExprAst sigma) {
  VolumeDensity v;
  v.kind = VolumeKind::user;
  v.sigma = std::move(sigma);
  return v;
}

VolumeDensity VolumeDensity::with_gauge(ExprAst f) const {
  VolumeDensity v = *this;
  v.gauge = std::move(f);
  return v;
}

VolumeDensity VolumeDensity::parse(const std::string& text, int dimension) {
  if (text == "bh" || text == "busemann_hausdorff") return busemann_hausdorff();
  if (text == "riemannian") return riemannian();
  if (text.rfind("user:", 0) == 0) {
    auto sigma = parse_metric(text.substr(5), dimension);
    if (sigma.y_extent() > 0) throw std::invalid_argument("user volume: sigma must depend on x only");
    return user(std::move(sigma));
  }
  throw std::invalid_argument("unknown volume '" + text + "' (expected bh, riemannian or user:EXPR)");
}

std::string VolumeDensity::describe() const {
  std::string s;
  switch (kind) {
    case VolumeKind::busemann_hausdorff: s = "busemann_hausdorff"; break;
    case VolumeKind::riemannian: s = "riemannian"; break;
    case VolumeKind::user: s = "user:" + sigma.to_string(); break;
  }
  if (!gauge.empty()) s += " * exp(-" + gauge.to_string() + ")";
  return s;
}

int VolumeDensity::points_for(int dimension) const {
  if (quadrature_points > 0) return quadrature_points;
  return dimension == 2 ? 2048 : 48;
}

namespace {

std::vector<Jet> seed_x(const std::shared_ptr<const JetSpace>& space, std::span<const double> x) {
  std::vector<Jet> xs;
  for (std::size_t i = 0; i < x.size(); ++i) xs.push_back(Jet::variable(space, static_cast<int>(i), x[i]));
  return xs;
}

// Busemann-Hausdorff sigma over a jet space whose variables are x only.
Jet bh_density(const VolumeDensity& vol, const MetricSpec& spec, std::span<const double> x,
               const std::shared_ptr<const JetSpace>& space) {
  const int n = spec.dimension;
  const auto rule = sphere_rule(n, vol.points_for(n), vol.angular_offset);
  const auto xs = seed_x(space, x);
  Jet acc = Jet::constant(space, 0.0);
  std::vector<Jet> ys(n, acc);
  for (std::size_t d = 0; d < rule.directions.size(); ++d) {
    for (int i = 0; i < n; ++i) ys[i] = Jet::constant(space, rule.directions[d][i]);
    const Jet f = evaluate_metric<Jet>(spec, xs, ys, xs[0]);
    const double r = 1.0 / f.value();
    if (!(f.value() > 0) || !std::isfinite(r)) {
      throw VolumeError("busemann-hausdorff: non-positive or non-finite radius in direction " +
                        std::to_string(d));
    }
    acc += rule.weights[d] * pow(f, -n);
  }
  return unit_ball_volume(n) * n / acc;
}

Jet riemannian_density(const MetricSpec& spec, std::span<const double> x,
                       const std::shared_ptr<const JetSpace>& space) {
  const auto* f = std::get_if<RiemannianFamily>(&spec.family);
  if (!f) throw VolumeError("riemannian volume needs a Riemannian metric");
  const auto& entries = f->g;
  const int n = spec.dimension;
  const auto xs = seed_x(space, x);
  const std::vector<Jet> none;
  JetMatrix g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = entries[i * n + j].eval<Jet>(xs, none, xs[0]);
  }
  const Jet det = determinant(g);
  if (!(det.value() > 0)) throw VolumeError("riemannian volume: det g <= 0");
  return sqrt(det);
}

Jet apply_gauge(const VolumeDensity& vol, Jet sigma, std::span<const double> x,
                const std::shared_ptr<const JetSpace>& space) {
  if (vol.gauge.empty()) return sigma;
  const auto xs = seed_x(space, x);
  const std::vector<Jet> none;
  return sigma * exp(-vol.gauge.eval<Jet>(xs, none, xs[0]));
}

Jet density_x_only(const VolumeDensity& vol, const MetricSpec& spec, std::span<const double> x,
                   int order) {
  const int n = spec.dimension;
  Jet sigma;
  switch (vol.kind) {
    case VolumeKind::busemann_hausdorff: {
      if (n >= 4) throw VolumeError("busemann-hausdorff density supports n = 2, 3 only");
      const auto space = jet_space(n, std::min(order, vol.bh_order_cap));
      sigma = apply_gauge(vol, bh_density(vol, spec, x, space), x, space);
      break;
    }
    case VolumeKind::riemannian: {
      const auto space = jet_space(n, order);
      sigma = apply_gauge(vol, riemannian_density(spec, x, space), x, space);
      break;
    }
    case VolumeKind::user: {
      if (vol.sigma.empty()) throw VolumeError("user volume: missing sigma expression");
      if (vol.sigma.y_extent() > 0 || vol.sigma.x_extent() > n) {
        throw VolumeError("user volume: sigma must be an expression in x1..xn");
      }
      const auto space = jet_space(n, order);
      const auto xs = seed_x(space, x);
      const std::vector<Jet> none;
      sigma = apply_gauge(vol, vol.sigma.eval<Jet>(xs, none, xs[0]), x, space);
      break;
    }
  }
  if (!(sigma.value() > 0) || !std::isfinite(sigma.value())) {
    throw VolumeError("volume density is not positive at x");
  }
  return sigma;
}

}  // namespace

Jet density(const VolumeDensity& vol, const MetricSpec& spec, std::span<const double> x,
            const JetSpec& jet_spec) {
  if (static_cast<int>(x.size()) != spec.dimension) throw std::invalid_argument("density: bad x");
  if (!spec.contains(x)) throw DomainError("density: x outside the metric's domain");
  const auto target = jet_space(jet_spec);
  return embed(density_x_only(vol, spec, x, jet_spec.max_order), target);
}

double density_value(const VolumeDensity& vol, const MetricSpec& spec, std::span<const double> x) {
  if (!spec.contains(x)) throw DomainError("density: x outside the metric's domain");
  VolumeDensity v = vol;
  v.bh_order_cap = 0;
  return density_x_only(v, spec, x, vol.kind == VolumeKind::busemann_hausdorff ? 0 : 1).value();
}

ConvexityReport check_strong_convexity(const MetricSpec& spec,
                                       const std::vector<std::pair<Vec, Vec>>& samples) {
  const int n = spec.dimension;
  ConvexityReport report;
  for (const auto& [x, y] : samples) {
    ConvexitySample s;
    s.x = x;
    s.y = y;
    try {
      if (spec.is_randers()) {
        s.beta_norm = randers_beta_norm(spec, x);
        if (s.beta_norm >= 1.0) s.reason = "||beta||_alpha >= 1";
      }
      const Jet f = eval_F(spec, x, y, JetSpec{2 * n, 2});
      const Jet f2 = f * f;
      s.F = f.value();
      Eigen::MatrixXd g(n, n);
      std::vector<int> m(2 * n, 0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          ++m[n + i];
          ++m[n + j];
          g(i, j) = 0.5 * f2.partial(m);
          --m[n + i];
          --m[n + j];
        }
      }
      s.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues()(0);
      if (!(s.F > 0)) s.reason = "F <= 0";
      else if (!(s.min_eigenvalue > 0)) s.reason = "g not positive definite";
    } catch (const std::exception& e) {
      s.reason = e.what();
    }
    s.flagged = !s.reason.empty();
    report.flagged += s.flagged;
    report.samples.push_back(std::move(s));
  }
  return report;
}

}  // namespace finsler
