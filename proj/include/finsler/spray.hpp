#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "finsler/fundamentals.hpp"
#include "finsler/geometry.hpp"

namespace finsler {

/// Spray, nonlinear connection and connection coefficients at one (x, y).
/// Flattening: N (i, j), coefficients (i, j, k), B (i, j, k, l), row-major.
struct SprayData {
  int n = 0;
  Vec G;
  Vec N;
  Vec berwald;  // G^i_jk
  Vec B;        // B^i_jkl
  Vec chern;    // Gamma^i_jk
};

SprayData spray_at(const MetricSpec& spec, const PointDir& p, int order = 6);
SprayData spray_from(LocalGeometry& geo);

enum class Slot { covariant, contravariant };

/// Components of a tensor field as jets at geo's point, flattened row-major
/// over its slots.
using TensorField = std::function<std::vector<Jet>(LocalGeometry&)>;

/// T_{...|m}: delta_m T plus one connection term per slot (+ for
/// contravariant, - for covariant). The result appends m as the last index.
Vec horizontal_derivative(LocalGeometry& geo, const std::vector<Jet>& components,
                          const std::vector<Slot>& slots, Connection c = Connection::chern);

Vec horizontal_derivative(const MetricSpec& spec, const PointDir& p, const TensorField& field,
                          const std::vector<Slot>& slots, Connection c = Connection::chern,
                          int order = 6);

/// Contracts the trailing derivative index with y^m / F.
Vec spray_direction(LocalGeometry& geo, const Vec& derivative);

struct Trajectory {
  int n = 0;
  std::vector<double> t;
  std::vector<Vec> x, y;
  std::vector<double> F;
  bool exited = false;
  std::string message;

  double max_F_drift() const;
  void write_csv(std::ostream& out) const;
};

/// Fixed-step RK4 for x' = y, y' = -2 G(x, y). Stops early, flagged, when
/// x leaves the metric's domain.
Trajectory geodesic_integrate(const MetricSpec& spec, const Vec& x0, const Vec& y0, int steps,
                              double dt);

/// Spray coefficients G^i as plain reals.
Vec spray_value(const MetricSpec& spec, const Vec& x, const Vec& y);

}  // namespace finsler
