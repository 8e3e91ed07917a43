#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/curvature.hpp"
#include "finsler/spray.hpp"

using namespace finsler;

namespace {

std::vector<PointDir> samples(const MetricSpec& spec, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(-0.4, 0.4), uy(-1, 1);
  std::vector<PointDir> out;
  while (static_cast<int>(out.size()) < count) {
    PointDir p{Vec(spec.dimension), Vec(spec.dimension)};
    for (double& v : p.x) v = ux(rng);
    double norm = 0;
    for (double& v : p.y) norm += (v = uy(rng)) * v;
    if (norm > 0.05 && spec.contains(p.x)) out.push_back(p);
  }
  return out;
}

double max_abs(const Vec& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("spray and connection invariants") {
  for (const auto& spec : builtin::zoo()) {
    const int n = spec.dimension;
    for (const auto& p : samples(spec, 4, 21)) {
      CAPTURE(spec.name);
      const SprayData sd = spray_at(spec, p);
      PointDir q = p;
      for (double& v : q.y) v *= 2.5;
      const SprayData sq = spray_at(spec, q);
      const double scale = 1 + max_abs(sd.N);
      for (int i = 0; i < n; ++i) {
        CHECK(std::abs(sq.G[i] - 6.25 * sd.G[i]) <= 1e-10 * (1 + std::abs(sq.G[i])));
        double ny = 0;
        for (int k = 0; k < n; ++k) ny += sd.N[i * n + k] * p.y[k];
        CHECK(std::abs(ny - 2 * sd.G[i]) <= 1e-10 * scale);
        for (int j = 0; j < n; ++j) {
          double gy = 0;
          for (int k = 0; k < n; ++k) {
            gy += sd.berwald[(i * n + k) * n + j] * p.y[k];
            CHECK(sd.berwald[(i * n + j) * n + k] == doctest::Approx(sd.berwald[(i * n + k) * n + j]));
            CHECK(std::abs(sd.chern[(i * n + j) * n + k] - sd.chern[(i * n + k) * n + j]) <= 1e-10 * scale);
            double by = 0;
            for (int l = 0; l < n; ++l) by += sd.B[((i * n + j) * n + k) * n + l] * p.y[l];
            CHECK(std::abs(by) <= 1e-9 * scale);
          }
          CHECK(std::abs(gy - sd.N[i * n + j]) <= 1e-10 * scale);
          // y^j Gamma^i_jk = N^i_k for the Chern connection too
          double cy = 0;
          for (int k = 0; k < n; ++k) cy += sd.chern[(i * n + k) * n + j] * p.y[k];
          CHECK(std::abs(cy - sd.N[i * n + j]) <= 1e-10 * scale);
        }
      }
    }
  }
}

TEST_CASE("Minkowski norms have a vanishing spray") {
  for (const auto& p : samples(builtin::quartic_minkowski(), 5, 22)) {
    const SprayData sd = spray_at(builtin::quartic_minkowski(), p);
    CHECK(max_abs(sd.G) <= 1e-13);
    CHECK(max_abs(sd.N) <= 1e-13);
    CHECK(max_abs(sd.chern) <= 1e-13);
    CHECK(max_abs(sd.B) <= 1e-13);
  }
}

TEST_CASE("round sphere spray matches the Levi-Civita symbols") {
  const auto spec = builtin::sphere();
  for (const auto& p : samples(spec, 8, 23)) {
    // g = phi * identity with phi = 4 / (1 + |x|^2)^2
    const double r2 = p.x[0] * p.x[0] + p.x[1] * p.x[1];
    double dlog[2];
    for (int k = 0; k < 2; ++k) dlog[k] = -4 * p.x[k] / (1 + r2);
    const SprayData sd = spray_at(spec, p);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          const double gamma = 0.5 * ((i == j) * dlog[k] + (i == k) * dlog[j] - (j == k) * dlog[i]);
          CHECK(sd.chern[(i * 2 + j) * 2 + k] == doctest::Approx(gamma).epsilon(1e-11));
          CHECK(sd.berwald[(i * 2 + j) * 2 + k] == doctest::Approx(gamma).epsilon(1e-11));
        }
      }
      double G = 0;
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          G += 0.25 * ((i == j) * dlog[k] + (i == k) * dlog[j] - (j == k) * dlog[i]) * p.y[j] * p.y[k];
        }
      }
      CHECK(spray_value(spec, p.x, p.y)[i] == doctest::Approx(G).epsilon(1e-12));
    }
  }
}

TEST_CASE("Funk spray is projective with factor F/2") {
  for (int n : {2, 3}) {
    const auto spec = builtin::funk(n);
    for (const auto& p : samples(spec, 6, 24)) {
      const double F = evaluate_metric(spec, p.x, p.y);
      const Vec G = spray_value(spec, p.x, p.y);
      for (int i = 0; i < n; ++i) CHECK(std::abs(G[i] - 0.5 * F * p.y[i]) <= 1e-8 * (1 + F * F));
    }
  }
}

TEST_CASE("Chern connection is metric compatible and F is horizontally constant") {
  for (const auto& spec : {builtin::randers_generic(), builtin::funk(2), builtin::funk(3)}) {
    const int n = spec.dimension;
    for (const auto& p : samples(spec, 4, 25)) {
      LocalGeometry geo(spec, p.x, p.y);
      std::vector<Jet> g;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) g.push_back(geo.g(i, j));
      }
      CAPTURE(spec.name);
      CHECK(max_abs(horizontal_derivative(geo, g, {Slot::covariant, Slot::covariant})) <= 1e-9);
      CHECK(max_abs(horizontal_derivative(geo, {geo.F()}, {})) <= 1e-10);
      // Berwald is not metric compatible on Randers or Funk
      CHECK(max_abs(horizontal_derivative(geo, g, {Slot::covariant, Slot::covariant}, Connection::berwald)) > 1e-6);
    }
  }
}

TEST_CASE("Berwald minus Chern is the Landsberg tensor") {
  const Conventions conv;
  for (const auto& spec : {builtin::randers_generic(), builtin::funk(3)}) {
    const int n = spec.dimension;
    for (const auto& p : samples(spec, 4, 26)) {
      LocalGeometry geo(spec, p.x, p.y);
      double worst = 0, size = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            double L = 0;
            for (int m = 0; m < n; ++m) L += geo.g_inv(i, m).value() * geo.L(m, j, k).value();
            const double diff = geo.berwald(i, j, k).value() - geo.chern(i, j, k).value();
            worst = std::max(worst, std::abs(diff - conv.kappa * L));
            size = std::max(size, std::abs(diff));
          }
        }
      }
      CHECK(worst <= 1e-9);
      if (spec.name == "randers-generic") CHECK(size > 1e-4);
    }
  }
}

TEST_CASE("geodesic integration") {
  SUBCASE("Euclidean lines") {
    const Trajectory t = geodesic_integrate(builtin::euclidean(2), {0.1, 0.2}, {0.3, -0.4}, 100, 0.01);
    REQUIRE_FALSE(t.exited);
    CHECK(t.x.back()[0] == doctest::Approx(0.4));
    CHECK(t.x.back()[1] == doctest::Approx(-0.2));
    CHECK(t.max_F_drift() <= 1e-14);
  }
  SUBCASE("sphere conserves F") {
    const Trajectory t = geodesic_integrate(builtin::sphere(), {0.1, 0.0}, {0.2, 0.3}, 1000, 1e-3);
    REQUIRE_FALSE(t.exited);
    CHECK(t.max_F_drift() <= 1e-8);
  }
  SUBCASE("Funk geodesics through the centre are radial") {
    const Trajectory t = geodesic_integrate(builtin::funk(2), {0, 0}, {0.3, 0.4}, 200, 0.01);
    for (const auto& x : t.x) CHECK(std::abs(x[0] * 0.4 - x[1] * 0.3) <= 1e-10);
    CHECK(t.max_F_drift() <= 1e-6);
  }
  SUBCASE("leaving the domain stops the run") {
    const Trajectory t = geodesic_integrate(builtin::funk(2), {0, 0}, {1, 0}, 100000, 0.01);
    CHECK(t.exited);
    CHECK_FALSE(t.message.empty());
  }
}
