#include "finsler/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace finsler {

GaussLegendre gauss_legendre(int count) {
  if (count < 1) throw std::invalid_argument("gauss_legendre: count must be positive");
  GaussLegendre rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_count
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = count * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[count - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  return rule;
}

SphereRule sphere_rule(int dimension, int points, double offset) {
  if (points < 2) throw std::invalid_argument("sphere_rule: need at least 2 points");
  SphereRule rule;
  rule.dimension = dimension;
  const double two_pi = 2.0 * std::numbers::pi;
  if (dimension == 2) {
    const double step = two_pi / points;
    for (int k = 0; k < points; ++k) {
      const double t = (k + offset) * step;
      rule.directions.push_back({std::cos(t), std::sin(t)});
      rule.weights.push_back(step);
    }
    return rule;
  }
  if (dimension == 3) {
    const auto gl = gauss_legendre(points);
    const int azimuth = 2 * points;
    const double step = two_pi / azimuth;
    for (int i = 0; i < points; ++i) {
      const double u = gl.nodes[i];
      const double s = std::sqrt(1.0 - u * u);
      for (int k = 0; k < azimuth; ++k) {
        const double phi = (k + offset) * step;
        rule.directions.push_back({s * std::cos(phi), s * std::sin(phi), u});
        rule.weights.push_back(gl.weights[i] * step);
      }
    }
    return rule;
  }
  throw std::invalid_argument("sphere_rule: only dimensions 2 and 3 are supported");
}

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

std::vector<std::vector<double>> spread_directions(int dimension, int count) {
  std::vector<std::vector<double>> out;
  out.reserve(count);
  if (dimension == 2) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double t = 0.1 + k * golden;
      out.push_back({std::cos(t), std::sin(t)});
    }
    return out;
  }
  if (dimension == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
      const double z = 1.0 - (2.0 * k + 1.0) / count;
      const double r = std::sqrt(1.0 - z * z);
      const double t = k * golden;
      out.push_back({r * std::cos(t), r * std::sin(t), z});
    }
    return out;
  }
  std::mt19937_64 rng(1234);
  std::normal_distribution<double> normal;
  for (int k = 0; k < count; ++k) {
    std::vector<double> v(dimension);
    double norm = 0;
    for (double& c : v) {
      c = normal(rng);
      norm += c * c;
    }
    for (double& c : v) c /= std::sqrt(norm);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace finsler
