#pragma once

#include <span>
#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"
#include "finsler/metric.hpp"

namespace finsler {

enum class VolumeKind { busemann_hausdorff, riemannian, user };

/// Choice of background density sigma(x) in dV = sigma dx^1...dx^n.
struct VolumeDensity {
  VolumeKind kind = VolumeKind::busemann_hausdorff;
  ExprAst sigma;              // user kind: sigma(x)
  ExprAst gauge;              // optional f(x); sigma is multiplied by exp(-f)
  int quadrature_points = 0;  // 0 picks the per-dimension default
  double angular_offset = 0.0;
  /// Jet order used for the Busemann-Hausdorff quadrature. Three x-derivatives
  /// of sigma are all any curvature quantity consumes.
  int bh_order_cap = 3;

  static VolumeDensity busemann_hausdorff(int points = 0);
  static VolumeDensity riemannian();
  static VolumeDensity user(ExprAst sigma);
  VolumeDensity with_gauge(ExprAst f) const;

  /// Parses "bh", "riemannian" or "user:EXPR".
  static VolumeDensity parse(const std::string& text, int dimension);
  std::string describe() const;
  int points_for(int dimension) const;
};

class VolumeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Jet of sigma at x over the space of `jet_spec`; only the leading n (x)
/// variables carry derivatives. The order is the full jet order except for
/// Busemann-Hausdorff, which is capped at bh_order_cap.
Jet density(const VolumeDensity& vol, const MetricSpec& spec, std::span<const double> x,
            const JetSpec& jet_spec);

/// sigma(x) as a plain real.
double density_value(const VolumeDensity& vol, const MetricSpec& spec, std::span<const double> x);

struct ConvexitySample {
  Vec x;
  Vec y;
  double F = 0.0;
  double min_eigenvalue = 0.0;
  double beta_norm = -1.0;  // Randers only
  bool flagged = false;
  std::string reason;
};

struct ConvexityReport {
  std::vector<ConvexitySample> samples;
  int flagged = 0;
  bool ok() const { return flagged == 0; }
};

/// Minimum eigenvalue of g_ij at each (x, y); flags F <= 0, indefinite g and,
/// for Randers metrics, ||beta||_alpha >= 1.
ConvexityReport check_strong_convexity(const MetricSpec& spec,
                                       const std::vector<std::pair<Vec, Vec>>& samples);

}  // namespace finsler
