#include "finsler/spray.hpp"

#include <cmath>
#include <ostream>

namespace finsler {

SprayData spray_from(LocalGeometry& geo) {
  const int n = geo.dim();
  SprayData s;
  s.n = n;
  for (int i = 0; i < n; ++i) s.G.push_back(geo.G(i).value());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s.N.push_back(geo.N(i, j).value());
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        s.berwald.push_back(geo.berwald(i, j, k).value());
        s.chern.push_back(geo.chern(i, j, k).value());
      }
    }
  }
  if (geo.order() >= 5) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int l = 0; l < n; ++l) s.B.push_back(geo.berwald_curvature(i, j, k, l).value());
        }
      }
    }
  }
  return s;
}

SprayData spray_at(const MetricSpec& spec, const PointDir& p, int order) {
  LocalGeometry geo(spec, p.x, p.y, VolumeDensity{}, order);
  return spray_from(geo);
}

Vec horizontal_derivative(LocalGeometry& geo, const std::vector<Jet>& components,
                          const std::vector<Slot>& slots, Connection c) {
  const int n = geo.dim();
  const int rank = static_cast<int>(slots.size());
  std::size_t count = 1;
  for (int r = 0; r < rank; ++r) count *= n;
  if (components.size() != count) {
    throw std::invalid_argument("horizontal_derivative: component count does not match slots");
  }
  Vec value(count);
  for (std::size_t a = 0; a < count; ++a) value[a] = components[a].value();

  std::vector<std::size_t> stride(rank, 1);
  for (int r = rank - 2; r >= 0; --r) stride[r] = stride[r + 1] * n;

  Vec out(count * n);
  for (std::size_t a = 0; a < count; ++a) {
    for (int m = 0; m < n; ++m) {
      double v = geo.delta_value(components[a], m);
      for (int r = 0; r < rank; ++r) {
        const int ir = static_cast<int>(a / stride[r] % n);
        const std::size_t base = a - static_cast<std::size_t>(ir) * stride[r];
        for (int b = 0; b < n; ++b) {
          const double t = value[base + b * stride[r]];
          if (slots[r] == Slot::contravariant) {
            v += geo.coefficients(c, ir, b, m).value() * t;
          } else {
            v -= geo.coefficients(c, b, ir, m).value() * t;
          }
        }
      }
      out[a * n + m] = v;
    }
  }
  return out;
}

Vec horizontal_derivative(const MetricSpec& spec, const PointDir& p, const TensorField& field,
                          const std::vector<Slot>& slots, Connection c, int order) {
  LocalGeometry geo(spec, p.x, p.y, VolumeDensity{}, order);
  return horizontal_derivative(geo, field(geo), slots, c);
}

Vec spray_direction(LocalGeometry& geo, const Vec& derivative) {
  const int n = geo.dim();
  const double F = geo.F().value();
  Vec out(derivative.size() / n, 0.0);
  for (std::size_t a = 0; a < out.size(); ++a) {
    for (int m = 0; m < n; ++m) out[a] += derivative[a * n + m] * geo.y()[m] / F;
  }
  return out;
}

Vec spray_value(const MetricSpec& spec, const Vec& x, const Vec& y) {
  LocalGeometry geo(spec, x, y, VolumeDensity{}, 2);
  Vec G;
  for (int i = 0; i < spec.dimension; ++i) G.push_back(geo.G(i).value());
  return G;
}

double Trajectory::max_F_drift() const {
  double d = 0.0;
  for (double f : F) d = std::max(d, std::abs(f - F.front()));
  return d;
}

void Trajectory::write_csv(std::ostream& out) const {
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x_" << i;
  for (int i = 1; i <= n; ++i) out << ",y_" << i;
  out << ",F\n";
  out.precision(17);
  for (std::size_t s = 0; s < t.size(); ++s) {
    out << t[s];
    for (double v : x[s]) out << ',' << v;
    for (double v : y[s]) out << ',' << v;
    out << ',' << F[s] << '\n';
  }
}

Trajectory geodesic_integrate(const MetricSpec& spec, const Vec& x0, const Vec& y0, int steps,
                              double dt) {
  const int n = spec.dimension;
  Trajectory tr;
  tr.n = n;
  Vec x = x0, y = y0;
  auto record = [&](double t) {
    tr.t.push_back(t);
    tr.x.push_back(x);
    tr.y.push_back(y);
    tr.F.push_back(evaluate_metric(spec, x, y));
  };
  if (!spec.contains(x)) {
    tr.exited = true;
    tr.message = "initial point outside the domain";
    return tr;
  }
  record(0.0);
  // state derivative: (y, -2G)
  auto rhs = [&](const Vec& xs, const Vec& vs, Vec& dx, Vec& dv) {
    if (!spec.contains(xs)) throw DomainError("geodesic left the domain");
    const Vec G = spray_value(spec, xs, vs);
    dx = vs;
    dv.resize(n);
    for (int i = 0; i < n; ++i) dv[i] = -2.0 * G[i];
  };
  Vec k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v, xt(n), vt(n);
  for (int s = 1; s <= steps; ++s) {
    try {
      rhs(x, y, k1x, k1v);
      for (int i = 0; i < n; ++i) {
        xt[i] = x[i] + 0.5 * dt * k1x[i];
        vt[i] = y[i] + 0.5 * dt * k1v[i];
      }
      rhs(xt, vt, k2x, k2v);
      for (int i = 0; i < n; ++i) {
        xt[i] = x[i] + 0.5 * dt * k2x[i];
        vt[i] = y[i] + 0.5 * dt * k2v[i];
      }
      rhs(xt, vt, k3x, k3v);
      for (int i = 0; i < n; ++i) {
        xt[i] = x[i] + dt * k3x[i];
        vt[i] = y[i] + dt * k3v[i];
      }
      rhs(xt, vt, k4x, k4v);
    } catch (const DomainError& e) {
      tr.exited = true;
      tr.message = "stopped at step " + std::to_string(s) + ": " + e.what();
      break;
    }
    for (int i = 0; i < n; ++i) {
      x[i] += dt / 6.0 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
      y[i] += dt / 6.0 * (k1v[i] + 2 * k2v[i] + 2 * k3v[i] + k4v[i]);
    }
    if (!spec.contains(x)) {
      tr.exited = true;
      tr.message = "left the domain after step " + std::to_string(s);
      break;
    }
    record(s * dt);
  }
  return tr;
}

}  // namespace finsler
