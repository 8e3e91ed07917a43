#pragma once

#include <vector>

namespace finsler {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `count` points on [-1, 1].
GaussLegendre gauss_legendre(int count);

/// Quadrature over the Euclidean unit sphere of directions in R^n.
struct SphereRule {
  int dimension = 2;
  std::vector<std::vector<double>> directions;
  std::vector<double> weights;  // sum of weights = area of S^{n-1}
};

/// n = 2: trapezoid rule with `points` nodes on the circle.
/// n = 3: `points` Gauss-Legendre nodes in cos(theta) times 2*`points`
///        trapezoid nodes in the azimuth.
/// `offset` shifts the periodic grid by that fraction of one step.
/// Throws std::invalid_argument for n >= 4.
SphereRule sphere_rule(int dimension, int points, double offset = 0.0);

/// Volume of the Euclidean unit ball in R^n.
double unit_ball_volume(int n);

/// Quasi-uniform deterministic directions: golden-angle on S^1, Fibonacci
/// lattice on S^2; other dimensions fall back to a seeded Gaussian draw.
std::vector<std::vector<double>> spread_directions(int dimension, int count);

}  // namespace finsler
