#pragma once

#include <string>

namespace finsler {

/// Sign conventions linking natural-coordinate tensors to frame quantities.
/// Defaults are the expected values; verify::calibrate_conventions measures
/// them and reports whether they were confirmed.
struct Conventions {
  /// Vertical frame vectors: e_alpha-bar = frame_sign * F u^i_alpha d/dy^i.
  int frame_sign = -1;
  /// Frame Landsberg tensor = landsberg_sign * (-1/2 y_m B^m_jkl).
  int landsberg_sign = -1;
  /// Berwald minus Chern coefficients = kappa * L^i_jk.
  int kappa = 1;
  /// Normalized hh-curvature = curvature_sign * raw; y^j R^i_jkl y^l = R^i_k.
  int curvature_sign = -1;
  bool calibrated = false;

  std::string describe() const;
};

}  // namespace finsler
