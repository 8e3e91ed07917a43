#pragma once

#include <string>
#include <vector>

#include "finsler/conventions.hpp"
#include "finsler/geometry.hpp"

namespace finsler {

/// A point of TM: chart coordinates x and a nonzero direction y.
struct PointDir {
  Vec x;
  Vec y;
};

/// Zeroth-stage tensors at one (x, y). Matrices are row-major, 3-tensors
/// are flattened as (i*n + j)*n + k.
struct Fundamentals {
  int n = 0;
  double F = 0.0;
  Vec g, g_inv;
  Vec C;  // 1/4 d^3 F^2
  Vec A;  // F * C
  Vec I;  // g^{ij} C_ijk
  double tau = 0.0;
  Vec dtau_dx, dtau_dy;
  double condition = 0.0;
};

Fundamentals fundamentals_at(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p);
Fundamentals fundamentals_from(LocalGeometry& geo);

/// g-orthonormal frame {b_1..b_{n-1}, e_n} with e_n = y/F.
struct Frame {
  int n = 0;
  Vec e_n;
  std::vector<Vec> basis;  // b_alpha, components u^i_alpha
  Vec gram;                // n x n Gram matrix of (b_1..b_{n-1}, e_n)
  int dropped_axis = -1;

  /// Max |gram - identity|.
  double gram_residual() const;
  /// u^i_a for a in [0, n-1); a = n-1 gives e_n.
  const Vec& u(int a) const { return a == n - 1 ? e_n : basis[a]; }
};

Frame adapted_frame(const Fundamentals& f, const PointDir& p);
Frame adapted_frame(LocalGeometry& geo);

/// Degree-0 scalars on SM that admit vertical derivatives.
enum class ScalarTag { tau, S, e, K };

ScalarTag parse_scalar_tag(const std::string& name);

/// Jet of the requested 0-homogeneous scalar at geo's point.
Jet scalar_jet(LocalGeometry& geo, ScalarTag tag);

/// frame_sign * F * u^i_alpha * d(phi)/dy^i at p, after normalizing y to
/// F = 1. alpha is zero-based in [0, n-1).
double vertical_derivative(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p,
                           ScalarTag tag, int alpha, const Conventions& conv = {});

/// Same, on a geometry whose y is already F-unit.
double vertical_derivative(LocalGeometry& geo, const Frame& frame, ScalarTag tag, int alpha,
                           const Conventions& conv = {});

/// Copy of p with y rescaled so that F(x, y) = 1.
PointDir normalize(const MetricSpec& spec, const PointDir& p);

}  // namespace finsler
