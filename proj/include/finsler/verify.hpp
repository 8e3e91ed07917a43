#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "finsler/conventions.hpp"
#include "finsler/curvature.hpp"
#include "finsler/fundamentals.hpp"
#include "finsler/metric.hpp"
#include "finsler/volume.hpp"

namespace finsler {

inline constexpr const char* engine_version = "finsler-engine 1.0.0";

struct Tolerances {
  double structure = 1e-8;   // homogeneity and contraction identities
  double dtau = 1e-9;        // vertical part of d(tau)
  double identity = 1e-7;    // frame identities and the E-route
  double quadrature = 1e-4;  // anything touching the BH quadrature or FD
  double classifier = 1e-5;  // spread / fit thresholds
  double flag = 1e-6;        // scalar flag curvature spread
  double trace = 1e-5;       // trace equations on Funk
  double oracle = 1e-5;      // jets vs finite differences

  /// Every tolerance set to the same value.
  static Tolerances uniform(double t);
};

// ---------------------------------------------------------------------------
// Sign calibration

struct CalibrationReport {
  Conventions conventions;
  bool unique = false;  // exactly one (frame_sign, landsberg_sign) pair works
  std::map<std::string, double> basic_equ4_residuals;  // keyed "s=+1,l=-1"
  double kappa_residual = 0.0;
  double curvature_residual_chern = 0.0;
  double curvature_residual_berwald = 0.0;
  int chern_sign = 0;
  int berwald_sign = 0;
  double jacobi1_residual = 0.0;          // S_|a + S_,a|n form
  double jacobi1_flipped_residual = 0.0;  // S_|a - S_,a|n form
  bool ok = false;
  std::string message;
};

/// Measures the sign conventions on a non-Berwald Randers metric.
CalibrationReport calibrate_conventions(double tol = 1e-7);

// ---------------------------------------------------------------------------
// Classifiers

struct Verdict {
  std::string kind;  // e_isotropic, S_weakly_isotropic, S_almost_isotropic, S_isotropic,
                     // scalar_flag, K_weakly_isotropic
  std::string metric;
  Vec x;
  bool decision = false;
  double threshold = 0.0;
  double measure = 0.0;  // spread, fit residual, |dxi| or |xi| as appropriate
  std::map<std::string, double> fitted;
  Vec xi;
};

Verdict classify_e_isotropy(const MetricSpec& spec, const VolumeDensity& vol, const Vec& x,
                            int num_dirs, double threshold = 1e-5);

struct SClassification {
  Verdict weakly, almost, isotropic;
  double c = 0.0;
  Vec xi;
  double fit_residual = 0.0;
  double dxi = 0.0;          // max antisymmetrized difference quotient
  double xi_alpha_check = 0.0;  // max |xi_alpha + S_{,alpha}|
};

struct ClassifyOptions {
  int num_dirs = 0;            // 0: 16 for n = 2, 32 for n = 3
  double threshold = 1e-5;     // fit residual and |xi|
  double dxi_threshold = 1e-4; // d(xi) = 0 test
  double stencil = 1e-2;
  bool almost = true;          // run the x-stencil
  Conventions conventions;
};

SClassification classify_S(const MetricSpec& spec, const VolumeDensity& vol, const Vec& x,
                           const ClassifyOptions& opt = {});

/// Least-squares fit of S-big = a F + xi_i y^i at x; returns (a, xi, residual, scale).
struct SFit {
  double a = 0.0;
  Vec xi;
  double residual = 0.0;
  double scale = 0.0;
};
SFit fit_S(const MetricSpec& spec, const VolumeDensity& vol, const Vec& x, int num_dirs);

/// K over `flags` transverse vectors for each of a few directions at x.
Verdict classify_scalar_flag(const MetricSpec& spec, const Vec& x, int flags, std::uint64_t seed,
                             double threshold = 1e-6);

// ---------------------------------------------------------------------------
// Scenarios

struct ScenarioCheck {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool passed = false;
};

struct ScenarioReport {
  std::string id;
  std::string metric;
  bool applicable = true;
  std::string note;
  std::vector<ScenarioCheck> checks;
  std::vector<Verdict> verdicts;

  bool passed() const;
  void add(const std::string& name, double value, double tol, bool pass);
  void add_le(const std::string& name, double value, double tol) { add(name, value, tol, value <= tol); }
};

struct ScenarioOptions {
  Tolerances tol;
  ClassifyOptions classify;
  Conventions conventions;
  std::uint64_t seed = 42;
};

ScenarioReport check_theorem1(const MetricSpec& spec, const VolumeDensity& vol,
                              const std::vector<Vec>& xs, const ScenarioOptions& opt = {});
ScenarioReport check_theorem2_cor12(const MetricSpec& spec, const VolumeDensity& vol,
                                    const std::vector<Vec>& xs, const ScenarioOptions& opt = {});
ScenarioReport check_corollary3(const MetricSpec& spec, const VolumeDensity& vol,
                                const std::vector<Vec>& xs, const ScenarioOptions& opt = {});

// ---------------------------------------------------------------------------
// Finite-difference oracle

enum class OracleQuantity { F2, G, S_big };

struct OracleOptions {
  long double step = 4e-2L;  // base step; scaled by |y| for y-slots
  int levels = 3;            // Richardson table depth
};

/// Mixed partial (exponents over (x, y), total degree <= 3) of F^2, G^component
/// or S-big, from nested Richardson-extrapolated central differences of
/// extended-precision evaluations of F. Shares no code with the jet engine.
double fd_oracle(const MetricSpec& spec, const VolumeDensity& vol, OracleQuantity q, int component,
                 const PointDir& p, const std::vector<int>& exponents, const OracleOptions& opt = {});

/// The matching jet-engine value, for comparison.
double jet_partial(const MetricSpec& spec, const VolumeDensity& vol, OracleQuantity q, int component,
                   const PointDir& p, const std::vector<int>& exponents);

// ---------------------------------------------------------------------------
// Suite

struct SuiteConfig {
  std::vector<MetricSpec> metrics;
  std::optional<VolumeDensity> volume;  // default: riemannian for Riemannian metrics, BH otherwise
  int quadrature_points = 0;
  int samples = 200;           // structure suite, per metric
  int identity_samples = 12;   // frame identities, per metric
  int classify_points = 3;     // x-samples for classifiers and scenarios
  int oracle_samples = 2;
  std::uint64_t seed = 42;
  int order = 6;
  Tolerances tol;
  std::string suite = "core";  // core | full
};

struct IdentityRow {
  std::string id;
  std::string metric;
  int sample = 0;
  Vec x, y;
  double residual = 0.0;
  double scale = 0.0;
  double tol = 0.0;
  bool passed = false;
};

struct IdentitySummary {
  std::string id;
  std::string metric;
  double max_residual = 0.0;
  double tol = 0.0;
  bool passed = true;
  int samples = 0;
  int failures = 0;
};

struct SuiteReport {
  std::string engine;
  CalibrationReport calibration;
  std::vector<IdentityRow> rows;
  std::vector<IdentitySummary> per_identity;
  std::vector<ScenarioReport> scenarios;
  std::vector<std::string> errors;
  std::string timestamp;  // metadata, excluded from comparisons
  Tolerances tol;
  std::uint64_t seed = 42;
  bool passed = true;

  /// JSON document; `with_metadata` adds the timestamp block.
  std::string to_json(bool with_metadata = true) const;
  std::string to_csv() const;
  /// Failing summaries and scenarios, one per line.
  std::string failure_table() const;
};

VolumeDensity default_volume(const MetricSpec& spec, int quadrature_points = 0);

/// Deterministic sample of (x, y) inside the inner half of the domain hint.
std::vector<PointDir> sample_points(const MetricSpec& spec, int count, std::uint64_t seed);

SuiteReport run_suite(const SuiteConfig& config);

}  // namespace finsler
