#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"

namespace finsler {

using Vec = std::vector<double>;

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// F = sqrt(g_ij(x) y^i y^j); `g` is row-major n*n, symmetric, x only.
struct RiemannianFamily {
  std::vector<ExprAst> g;
};

/// F = sqrt(a_ij(x) y^i y^j) + b_i(x) y^i.
struct RandersFamily {
  std::vector<ExprAst> a;
  std::vector<ExprAst> b;
};

/// x-independent norm F(y).
struct MinkowskiFamily {
  ExprAst norm;
};

/// Funk metric of the Euclidean unit ball.
struct FunkFamily {};

/// Arbitrary F(x, y).
struct ExpressionFamily {
  ExprAst f;
};

using MetricFamily =
    std::variant<RiemannianFamily, RandersFamily, MinkowskiFamily, FunkFamily, ExpressionFamily>;

struct DomainBox {
  Vec lo;
  Vec hi;
};

struct DomainBall {
  Vec center;
  double radius = 1.0;
};

using DomainHint = std::variant<DomainBox, DomainBall>;

/// A Finsler metric on a single coordinate chart.
struct MetricSpec {
  std::string name;
  int dimension = 2;
  MetricFamily family;
  DomainHint domain;

  /// Throws std::invalid_argument on structural problems (n < 2, wrong
  /// matrix sizes, variable indices out of range, y in a Minkowski norm).
  void validate() const;

  bool is_riemannian() const { return std::holds_alternative<RiemannianFamily>(family); }
  bool is_minkowski() const { return std::holds_alternative<MinkowskiFamily>(family); }
  bool is_funk() const { return std::holds_alternative<FunkFamily>(family); }
  bool is_randers() const { return std::holds_alternative<RandersFamily>(family); }
  std::string family_name() const;

  /// Strict interior test for the domain hint (and |x| < 1 for Funk).
  bool contains(std::span<const double> x) const;
};

/// F(x, y) over doubles or jets. Domain checks are the caller's job.
template <class T>
T evaluate_metric(const MetricSpec& spec, std::span<const T> x, std::span<const T> y, const T& like);

double evaluate_metric(const MetricSpec& spec, std::span<const double> x, std::span<const double> y);

/// Jet of F at (x, y) seeded in all 2n variables: x^i is variable i,
/// y^i is variable n + i.
Jet eval_F(const MetricSpec& spec, std::span<const double> x, std::span<const double> y,
           const JetSpec& jet_spec);

/// Riemannian g_ij(x) as doubles (row-major), for Riemannian specs.
std::vector<double> riemannian_matrix(const MetricSpec& spec, std::span<const double> x);

/// ||beta||_alpha for a Randers spec at x.
double randers_beta_norm(const MetricSpec& spec, std::span<const double> x);

/// Built-in metric zoo.
namespace builtin {
MetricSpec euclidean(int n);
/// Round unit sphere in stereographic coordinates, g = 4/(1+|x|^2)^2 delta.
MetricSpec sphere(int n = 2);
/// (y1^4 + ... + yn^4)^(1/4).
MetricSpec quartic_minkowski(int n = 2);
/// alpha Euclidean, beta a constant covector.
MetricSpec randers_berwald(Vec beta = {0.3, 0.2});
/// alpha Euclidean, beta = scale * x2 dx1.
MetricSpec randers_generic(double scale = 0.3);
/// alpha Euclidean, beta constant with the given alpha-norm along dx1.
MetricSpec randers_constant_norm(double norm);
MetricSpec funk(int n);

/// Names accepted by by_name().
std::vector<std::string> names();
MetricSpec by_name(const std::string& name);
/// {euclidean, sphere, quartic-minkowski, randers-berwald, randers-generic, funk2, funk3}
std::vector<MetricSpec> zoo();
}  // namespace builtin

}  // namespace finsler
