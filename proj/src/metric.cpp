#include "finsler/metric.hpp"

#include <cmath>

namespace finsler {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double constant_like(double, double v) { return v; }
inline long double constant_like(long double, double v) { return v; }
inline Jet constant_like(const Jet& like, double v) {
  return Jet::constant(like.space_ptr(), v, like.order());
}

using std::sqrt;

void check_expr(const ExprAst& e, int n, bool allow_y, const char* what) {
  if (e.empty()) throw std::invalid_argument(std::string(what) + ": empty expression");
  if (e.x_extent() > n) throw std::invalid_argument(std::string(what) + ": x index exceeds dimension");
  if (e.y_extent() > (allow_y ? n : 0)) {
    throw std::invalid_argument(std::string(what) + (allow_y ? ": y index exceeds dimension"
                                                              : ": must not depend on y"));
  }
}

template <class T>
T quadratic_form(const std::vector<ExprAst>& m, int n, std::span<const T> x, std::span<const T> y,
                 const T& like) {
  T q = constant_like(like, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      q += m[i * n + j].eval<T>(x, y, like) * y[i] * y[j];
    }
  }
  return q;
}

}  // namespace

void MetricSpec::validate() const {
  const int n = dimension;
  if (n < 2) throw std::invalid_argument("MetricSpec: dimension must be >= 2");
  std::visit(overloaded{
                 [&](const RiemannianFamily& f) {
                   if (static_cast<int>(f.g.size()) != n * n) {
                     throw std::invalid_argument("riemannian: g must have n*n entries");
                   }
                   for (const auto& e : f.g) check_expr(e, n, false, "riemannian g");
                 },
                 [&](const RandersFamily& f) {
                   if (static_cast<int>(f.a.size()) != n * n || static_cast<int>(f.b.size()) != n) {
                     throw std::invalid_argument("randers: need n*n alpha entries and n beta entries");
                   }
                   for (const auto& e : f.a) check_expr(e, n, false, "randers alpha");
                   for (const auto& e : f.b) check_expr(e, n, false, "randers beta");
                 },
                 [&](const MinkowskiFamily& f) {
                   check_expr(f.norm, n, true, "minkowski norm");
                   if (f.norm.x_extent() > 0) {
                     throw std::invalid_argument("minkowski norm: must not depend on x");
                   }
                 },
                 [&](const FunkFamily&) {},
                 [&](const ExpressionFamily& f) { check_expr(f.f, n, true, "expression"); },
             },
             family);
  std::visit(overloaded{
                 [&](const DomainBox& b) {
                   if (static_cast<int>(b.lo.size()) != n || static_cast<int>(b.hi.size()) != n) {
                     throw std::invalid_argument("domain box: wrong dimension");
                   }
                 },
                 [&](const DomainBall& b) {
                   if (static_cast<int>(b.center.size()) != n || !(b.radius > 0)) {
                     throw std::invalid_argument("domain ball: wrong dimension or radius");
                   }
                 },
             },
             domain);
}

std::string MetricSpec::family_name() const {
  return std::visit(overloaded{
                        [](const RiemannianFamily&) { return std::string("riemannian"); },
                        [](const RandersFamily&) { return std::string("randers"); },
                        [](const MinkowskiFamily&) { return std::string("minkowski_norm"); },
                        [](const FunkFamily&) { return std::string("funk"); },
                        [](const ExpressionFamily&) { return std::string("expression"); },
                    },
                    family);
}

bool MetricSpec::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dimension) return false;
  const bool inside = std::visit(overloaded{
                                     [&](const DomainBox& b) {
                                       for (int i = 0; i < dimension; ++i) {
                                         if (!(x[i] > b.lo[i] && x[i] < b.hi[i])) return false;
                                       }
                                       return true;
                                     },
                                     [&](const DomainBall& b) {
                                       double r2 = 0;
                                       for (int i = 0; i < dimension; ++i) {
                                         r2 += (x[i] - b.center[i]) * (x[i] - b.center[i]);
                                       }
                                       return r2 < b.radius * b.radius;
                                     },
                                 },
                                 domain);
  if (!inside) return false;
  if (is_funk()) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    return r2 < 1.0;
  }
  return true;
}

template <class T>
T evaluate_metric(const MetricSpec& spec, std::span<const T> x, std::span<const T> y, const T& like) {
  const int n = spec.dimension;
  return std::visit(
      overloaded{
          [&](const RiemannianFamily& f) -> T { return sqrt(quadratic_form<T>(f.g, n, x, y, like)); },
          [&](const RandersFamily& f) -> T {
            T beta = constant_like(like, 0.0);
            for (int i = 0; i < n; ++i) beta += f.b[i].eval<T>(x, y, like) * y[i];
            return sqrt(quadratic_form<T>(f.a, n, x, y, like)) + beta;
          },
          [&](const MinkowskiFamily& f) -> T { return f.norm.eval<T>(x, y, like); },
          [&](const FunkFamily&) -> T {
            T xx = constant_like(like, 0.0), yy = xx, xy = xx;
            for (int i = 0; i < n; ++i) {
              xx += x[i] * x[i];
              yy += y[i] * y[i];
              xy += x[i] * y[i];
            }
            return (sqrt(yy - (xx * yy - xy * xy)) + xy) / (1.0 - xx);
          },
          [&](const ExpressionFamily& f) -> T { return f.f.eval<T>(x, y, like); },
      },
      spec.family);
}

template double evaluate_metric<double>(const MetricSpec&, std::span<const double>,
                                        std::span<const double>, const double&);
template long double evaluate_metric<long double>(const MetricSpec&, std::span<const long double>,
                                                  std::span<const long double>, const long double&);
template Jet evaluate_metric<Jet>(const MetricSpec&, std::span<const Jet>, std::span<const Jet>,
                                  const Jet&);

double evaluate_metric(const MetricSpec& spec, std::span<const double> x, std::span<const double> y) {
  return evaluate_metric<double>(spec, x, y, 0.0);
}

Jet eval_F(const MetricSpec& spec, std::span<const double> x, std::span<const double> y,
           const JetSpec& jet_spec) {
  const int n = spec.dimension;
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) {
    throw std::invalid_argument("eval_F: point has wrong dimension");
  }
  if (jet_spec.num_vars != 2 * n) throw std::invalid_argument("eval_F: jet spec must have 2n variables");
  double ynorm = 0;
  for (double v : y) ynorm += v * v;
  if (!(ynorm > 0)) throw DomainError("eval_F: y = 0 is not a smooth point of F");
  if (!spec.contains(x)) throw DomainError("eval_F: x outside the metric's domain");

  const auto space = jet_space(jet_spec);
  std::vector<Jet> xs, ys;
  for (int i = 0; i < n; ++i) xs.push_back(Jet::variable(space, i, x[i]));
  for (int i = 0; i < n; ++i) ys.push_back(Jet::variable(space, n + i, y[i]));
  return evaluate_metric<Jet>(spec, xs, ys, xs[0]);
}

std::vector<double> riemannian_matrix(const MetricSpec& spec, std::span<const double> x) {
  const auto* f = std::get_if<RiemannianFamily>(&spec.family);
  if (!f) throw std::invalid_argument("riemannian_matrix: not a Riemannian metric");
  std::vector<double> g;
  const std::vector<double> none;
  for (const auto& e : f->g) g.push_back(e.eval(x, none));
  return g;
}

double randers_beta_norm(const MetricSpec& spec, std::span<const double> x) {
  const auto* f = std::get_if<RandersFamily>(&spec.family);
  if (!f) throw std::invalid_argument("randers_beta_norm: not a Randers metric");
  const int n = spec.dimension;
  const std::vector<double> none;
  // ||b||^2 = a^{ij} b_i b_j, solved through a small Cholesky factorisation
  std::vector<double> a(n * n), b(n);
  for (int i = 0; i < n * n; ++i) a[i] = f->a[i].eval(x, none);
  for (int i = 0; i < n; ++i) b[i] = f->b[i].eval(x, none);
  std::vector<double> l(n * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0)) throw DomainError("randers: alpha is not positive definite");
    l[j * n + j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / l[j * n + j];
    }
  }
  // forward solve L z = b, then ||b||^2 = |z|^2
  double norm2 = 0;
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= l[i * n + k] * z[k];
    z[i] = s / l[i * n + i];
    norm2 += z[i] * z[i];
  }
  return std::sqrt(norm2);
}

// ---------------------------------------------------------------------------

namespace builtin {

namespace {

DomainBox unit_box(int n) { return DomainBox{Vec(n, -1.0), Vec(n, 1.0)}; }

std::vector<ExprAst> identity_matrix(int n) {
  std::vector<ExprAst> m;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m.push_back(ExprAst::constant(i == j ? 1.0 : 0.0));
  }
  return m;
}

}  // namespace

MetricSpec euclidean(int n) {
  return MetricSpec{"euclidean", n, RiemannianFamily{identity_matrix(n)}, unit_box(n)};
}

MetricSpec sphere(int n) {
  std::string r2 = "x1^2";
  for (int i = 2; i <= n; ++i) r2 += " + x" + std::to_string(i) + "^2";
  const ExprAst conformal = parse_metric("4 / (1 + " + r2 + ")^2", n);
  std::vector<ExprAst> g;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g.push_back(i == j ? conformal : ExprAst::constant(0.0));
  }
  return MetricSpec{"sphere", n, RiemannianFamily{g}, unit_box(n)};
}

MetricSpec quartic_minkowski(int n) {
  std::string s = "y1^4";
  for (int i = 2; i <= n; ++i) s += " + y" + std::to_string(i) + "^4";
  return MetricSpec{"quartic-minkowski", n, MinkowskiFamily{parse_metric("(" + s + ")^0.25", n)},
                    unit_box(n)};
}

MetricSpec randers_berwald(Vec beta) {
  const int n = static_cast<int>(beta.size());
  std::vector<ExprAst> b;
  for (double v : beta) b.push_back(ExprAst::constant(v));
  return MetricSpec{"randers-berwald", n, RandersFamily{identity_matrix(n), b}, unit_box(n)};
}

MetricSpec randers_generic(double scale) {
  std::vector<ExprAst> b = {ExprAst::constant(scale) * ExprAst::x(1), ExprAst::constant(0.0)};
  return MetricSpec{"randers-generic", 2, RandersFamily{identity_matrix(2), b}, unit_box(2)};
}

MetricSpec randers_constant_norm(double norm) {
  auto spec = randers_berwald({norm, 0.0});
  spec.name = "randers-norm";
  return spec;
}

MetricSpec funk(int n) {
  return MetricSpec{"funk" + std::to_string(n), n, FunkFamily{}, DomainBall{Vec(n, 0.0), 0.9}};
}

std::vector<std::string> names() {
  return {"euclidean", "euclidean3", "sphere", "quartic-minkowski", "randers-berwald",
          "randers-generic", "funk2", "funk3"};
}

MetricSpec by_name(const std::string& name) {
  if (name == "euclidean" || name == "euclidean2") return euclidean(2);
  if (name == "euclidean3") {
    auto s = euclidean(3);
    s.name = "euclidean3";
    return s;
  }
  if (name == "sphere") return sphere(2);
  if (name == "quartic-minkowski" || name == "quartic") return quartic_minkowski(2);
  if (name == "randers-berwald") return randers_berwald();
  if (name == "randers-generic") return randers_generic();
  if (name == "funk2") return funk(2);
  if (name == "funk3") return funk(3);
  throw std::invalid_argument("unknown builtin metric '" + name + "'");
}

std::vector<MetricSpec> zoo() {
  return {euclidean(2), sphere(2), quartic_minkowski(2), randers_berwald(), randers_generic(),
          funk(2), funk(3)};
}

}  // namespace builtin

}  // namespace finsler
