// Finite-difference reference values in extended precision. Only plain
// evaluations of F are used; nothing here touches the jet arithmetic.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "finsler/geometry.hpp"
#include "finsler/quadrature.hpp"
#include "finsler/verify.hpp"

namespace finsler {

namespace {

using LD = long double;
using LVec = std::vector<LD>;
using Fn = std::function<LD(const LVec&)>;

struct Stencil {
  std::vector<int> offsets;
  std::vector<LD> weights;  // divided by h^m afterwards
};

Stencil central(int m) {
  switch (m) {
    case 0: return {{0}, {1}};
    case 1: return {{-1, 1}, {-0.5L, 0.5L}};
    case 2: return {{-1, 0, 1}, {1, -2, 1}};
    case 3: return {{-2, -1, 1, 2}, {-0.5L, 1, -1, 0.5L}};
    default: throw std::invalid_argument("fd_oracle: derivative order above 3 in one variable");
  }
}

// Tensor-product central difference of the mixed partial, second order in h.
LD difference(const Fn& f, const LVec& p, const std::vector<int>& ex, const LVec& h) {
  std::vector<Stencil> st;
  std::vector<int> vars;
  for (std::size_t v = 0; v < ex.size(); ++v) {
    if (ex[v] > 0) {
      st.push_back(central(ex[v]));
      vars.push_back(static_cast<int>(v));
    }
  }
  if (vars.empty()) return f(p);
  LD total = 0;
  std::vector<std::size_t> pos(vars.size(), 0);
  while (true) {
    LVec q = p;
    LD w = 1;
    for (std::size_t a = 0; a < vars.size(); ++a) {
      q[vars[a]] += st[a].offsets[pos[a]] * h[vars[a]];
      w *= st[a].weights[pos[a]];
    }
    total += w * f(q);
    std::size_t a = 0;
    while (a < vars.size() && ++pos[a] == st[a].offsets.size()) pos[a++] = 0;
    if (a == vars.size()) break;
  }
  for (std::size_t a = 0; a < vars.size(); ++a) total /= std::pow(h[vars[a]], static_cast<LD>(ex[vars[a]]));
  return total;
}

// Richardson extrapolation in h^2 over halved steps.
LD partial(const Fn& f, const LVec& p, const std::vector<int>& ex, const LVec& h0, int levels) {
  if (std::accumulate(ex.begin(), ex.end(), 0) == 0) return f(p);
  std::vector<LD> row;
  LVec h = h0;
  for (int l = 0; l < levels; ++l) {
    row.push_back(difference(f, p, ex, h));
    for (LD& s : h) s /= 2;
  }
  for (int k = 1; k < levels; ++k) {
    const LD factor = std::pow(4.0L, static_cast<LD>(k));
    for (int l = levels - 1; l >= k; --l) row[l] = (factor * row[l] - row[l - 1]) / (factor - 1);
  }
  return row.back();
}

class Oracle {
 public:
  Oracle(const MetricSpec& spec, const VolumeDensity& vol, const OracleOptions& opt)
      : spec_(spec), vol_(vol), opt_(opt), n_(spec.dimension) {}

  LD F(const LVec& p) const {
    std::span<const LD> x(p.data(), n_), y(p.data() + n_, n_);
    return evaluate_metric<LD>(spec_, x, y, LD(0));
  }

  LD F2(const LVec& p) const {
    const LD f = F(p);
    return f * f;
  }

  LVec steps(const LVec& p) const {
    LD ynorm = 0;
    for (int i = 0; i < n_; ++i) ynorm += p[n_ + i] * p[n_ + i];
    ynorm = std::sqrt(ynorm);
    LVec h(2 * n_, opt_.step);
    for (int i = 0; i < n_; ++i) h[n_ + i] = opt_.step * ynorm;
    return h;
  }

  LD d(const Fn& f, const LVec& p, std::vector<int> ex) const {
    return partial(f, p, ex, steps(p), opt_.levels);
  }

  std::vector<int> unit(int a, int b = -1) const {
    std::vector<int> ex(2 * n_, 0);
    ex[a] += 1;
    if (b >= 0) ex[b] += 1;
    return ex;
  }

  LD G(const LVec& p, int i) const {
    const Fn f2 = [this](const LVec& q) { return F2(q); };
    Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic> g(n_, n_);
    Eigen::Matrix<LD, Eigen::Dynamic, 1> rhs(n_);
    for (int a = 0; a < n_; ++a) {
      for (int b = a; b < n_; ++b) g(a, b) = g(b, a) = 0.5L * d(f2, p, unit(n_ + a, n_ + b));
      LD r = -d(f2, p, unit(a));
      for (int k = 0; k < n_; ++k) r += p[n_ + k] * d(f2, p, unit(k, n_ + a));
      rhs(a) = r;
    }
    const Eigen::Matrix<LD, Eigen::Dynamic, 1> sol = g.fullPivLu().solve(rhs);
    return 0.25L * sol(i);
  }

  LD log_sigma(const LVec& p) const {
    LVec x(p.begin(), p.begin() + n_);
    auto it = sigma_cache_.find(x);
    if (it != sigma_cache_.end()) return it->second;
    LD sigma = 0;
    switch (vol_.kind) {
      case VolumeKind::busemann_hausdorff: {
        const auto rule = sphere_rule(n_, vol_.points_for(n_), vol_.angular_offset);
        LD area = 0;
        LVec q = x;
        q.resize(2 * n_);
        for (std::size_t k = 0; k < rule.directions.size(); ++k) {
          for (int i = 0; i < n_; ++i) q[n_ + i] = rule.directions[k][i];
          area += rule.weights[k] * std::pow(F(q), -static_cast<LD>(n_));
        }
        sigma = static_cast<LD>(unit_ball_volume(n_)) * n_ / area;
        break;
      }
      case VolumeKind::riemannian: {
        // F^2 is quadratic in y, so the Hessian at any y is g(x)
        const Fn f2 = [this](const LVec& q) { return F2(q); };
        LVec q = x;
        q.resize(2 * n_, 0);
        q[n_] = 1;
        Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic> g(n_, n_);
        for (int a = 0; a < n_; ++a) {
          for (int b = a; b < n_; ++b) g(a, b) = g(b, a) = 0.5L * d(f2, q, unit(n_ + a, n_ + b));
        }
        sigma = std::sqrt(g.determinant());
        break;
      }
      case VolumeKind::user: {
        const LVec none(n_, 0);
        sigma = vol_.sigma.eval<LD>(x, none, LD(0));
        break;
      }
    }
    LD out = std::log(sigma);
    if (!vol_.gauge.empty()) {
      const LVec none(n_, 0);
      out -= vol_.gauge.eval<LD>(x, none, LD(0));
    }
    sigma_cache_[x] = out;
    return out;
  }

  // S-big = d G^m / d y^m - y^m d_m log sigma
  LD S_big(const LVec& p) const {
    LD s = 0;
    const Fn ls = [this](const LVec& q) { return log_sigma(q); };
    for (int m = 0; m < n_; ++m) {
      const Fn gm = [this, m](const LVec& q) { return G(q, m); };
      s += d(gm, p, unit(n_ + m));
      s -= p[n_ + m] * d(ls, p, unit(m));
    }
    return s;
  }

 private:
  const MetricSpec& spec_;
  const VolumeDensity& vol_;
  OracleOptions opt_;
  int n_;
  mutable std::map<LVec, LD> sigma_cache_;
};

void check_exponents(int n, const std::vector<int>& ex) {
  if (static_cast<int>(ex.size()) != 2 * n) throw std::invalid_argument("fd_oracle: need 2n exponents");
  int total = 0;
  for (int e : ex) {
    if (e < 0) throw std::invalid_argument("fd_oracle: negative exponent");
    total += e;
  }
  if (total > 3) throw std::invalid_argument("fd_oracle: total degree above 3");
}

}  // namespace

double fd_oracle(const MetricSpec& spec, const VolumeDensity& vol, OracleQuantity q, int component,
                 const PointDir& p, const std::vector<int>& exponents, const OracleOptions& opt) {
  const int n = spec.dimension;
  check_exponents(n, exponents);
  if (q == OracleQuantity::G && (component < 0 || component >= n)) {
    throw std::invalid_argument("fd_oracle: G component out of range");
  }
  Oracle o(spec, vol, opt);
  LVec pt(2 * n);
  for (int i = 0; i < n; ++i) {
    pt[i] = p.x[i];
    pt[n + i] = p.y[i];
  }
  Fn f;
  switch (q) {
    case OracleQuantity::F2: f = [&o](const LVec& v) { return o.F2(v); }; break;
    case OracleQuantity::G: f = [&o, component](const LVec& v) { return o.G(v, component); }; break;
    case OracleQuantity::S_big: f = [&o](const LVec& v) { return o.S_big(v); }; break;
  }
  return static_cast<double>(o.d(f, pt, exponents));
}

double jet_partial(const MetricSpec& spec, const VolumeDensity& vol, OracleQuantity q, int component,
                   const PointDir& p, const std::vector<int>& exponents) {
  const int n = spec.dimension;
  check_exponents(n, exponents);
  const int degree = std::accumulate(exponents.begin(), exponents.end(), 0);
  // F^2 is the top jet; G loses two orders and S-big three.
  const int order = degree + (q == OracleQuantity::F2 ? 0 : q == OracleQuantity::G ? 2 : 3);
  VolumeDensity v = vol;
  v.bh_order_cap = std::max(v.bh_order_cap, degree + 1);
  LocalGeometry geo(spec, p.x, p.y, v, std::max(order, 3));
  switch (q) {
    case OracleQuantity::F2: return geo.F2().partial(exponents);
    case OracleQuantity::G: return geo.G(component).partial(exponents);
    case OracleQuantity::S_big: return geo.S_big().partial(exponents);
  }
  return 0.0;
}

}  // namespace finsler
