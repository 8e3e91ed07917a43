#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/fundamentals.hpp"

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

double max_diff(const Vec& a, const Vec& b, double scale = 1.0) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - scale * b[i]));
  return m;
}

double max_abs(const Vec& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

const VolumeDensity bh = VolumeDensity::busemann_hausdorff(512);

}  // namespace

TEST_CASE("algebraic invariants of the fundamental tensors") {
  for (const auto& spec : builtin::zoo()) {
    const int n = spec.dimension;
    const auto vol = VolumeDensity::busemann_hausdorff(n == 2 ? 512 : 32);
    for (const auto& p : samples(spec, 6, 11)) {
      const Fundamentals f = fundamentals_at(spec, vol, p);
      CAPTURE(spec.name);
      double inv = 0, gyy = 0, ay = 0, sym = 0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = 0;
          for (int k = 0; k < n; ++k) s += f.g[i * n + k] * f.g_inv[k * n + j];
          inv = std::max(inv, std::abs(s - (i == j)));
          gyy += f.g[i * n + j] * p.y[i] * p.y[j];
          double c = 0;
          for (int k = 0; k < n; ++k) {
            c += f.A[(i * n + j) * n + k] * p.y[k];
            sym = std::max(sym, std::abs(f.A[(i * n + j) * n + k] - f.A[(j * n + i) * n + k]));
            sym = std::max(sym, std::abs(f.A[(i * n + j) * n + k] - f.A[(i * n + k) * n + j]));
          }
          ay = std::max(ay, std::abs(c));
        }
      }
      CHECK(inv <= 1e-10);
      CHECK(std::abs(gyy - f.F * f.F) <= 1e-10 * f.F * f.F);
      CHECK(sym <= 1e-12);
      CHECK(ay <= 1e-10);
      CHECK(max_diff(f.dtau_dy, f.I) <= 1e-9);
      CHECK(max_diff(f.A, f.C, f.F) <= 1e-12);
    }
  }
}

TEST_CASE("homogeneity degrees in y") {
  for (const auto& spec : {builtin::randers_generic(), builtin::funk(2), builtin::quartic_minkowski()}) {
    for (const auto& p : samples(spec, 5, 12)) {
      const Fundamentals f = fundamentals_at(spec, bh, p);
      for (double lam : {0.5, 3.0}) {
        PointDir q = p;
        for (double& v : q.y) v *= lam;
        const Fundamentals h = fundamentals_at(spec, bh, q);
        CAPTURE(spec.name);
        CHECK(std::abs(h.F - lam * f.F) <= 1e-12 * lam * f.F);
        CHECK(max_diff(h.g, f.g) <= 1e-10);
        CHECK(max_diff(h.A, f.A) <= 1e-10);
        CHECK(max_diff(h.C, f.C, 1 / lam) <= 1e-10);
        CHECK(max_diff(h.I, f.I, 1 / lam) <= 1e-10);
        CHECK(std::abs(h.tau - f.tau) <= 1e-10);
        CHECK(max_diff(h.dtau_dx, f.dtau_dx) <= 1e-9);
      }
    }
  }
}

TEST_CASE("Riemannian metrics have no Cartan tensor and no distortion") {
  for (const auto& spec : {builtin::euclidean(2), builtin::euclidean(3), builtin::sphere()}) {
    for (const auto& p : samples(spec, 5, 13)) {
      const Fundamentals f = fundamentals_at(spec, VolumeDensity::riemannian(), p);
      CHECK(max_abs(f.C) <= 1e-12);
      CHECK(max_abs(f.I) <= 1e-12);
      CHECK(std::abs(f.tau) <= 1e-12);
      CHECK(max_abs(f.dtau_dx) <= 1e-12);
      // Busemann-Hausdorff agrees with the Riemannian volume up to quadrature error
      const Fundamentals b = fundamentals_at(spec, bh, p);
      CHECK(std::abs(b.tau) <= 1e-9);
    }
  }
}

TEST_CASE("adapted frame") {
  SUBCASE("Euclidean plane at y = (2, 0)") {
    const PointDir p{{0, 0}, {2, 0}};
    const Frame fr = adapted_frame(fundamentals_at(builtin::euclidean(2), bh, p), p);
    CHECK(fr.e_n[0] == doctest::Approx(1.0));
    CHECK(fr.e_n[1] == doctest::Approx(0.0));
    CHECK(std::abs(fr.basis[0][0]) <= 1e-15);
    CHECK(std::abs(fr.basis[0][1]) == doctest::Approx(1.0));
    CHECK(fr.gram_residual() <= 1e-14);
  }
  SUBCASE("g-orthonormal on funk3") {
    const auto spec = builtin::funk(3);
    for (const auto& p : samples(spec, 10, 14)) {
      const Frame fr = adapted_frame(fundamentals_at(spec, VolumeDensity::busemann_hausdorff(32), p), p);
      CHECK(fr.gram_residual() <= 1e-12);
      CHECK(fr.basis.size() == 2);
    }
  }
  SUBCASE("deterministic") {
    const auto spec = builtin::randers_generic();
    for (const auto& p : samples(spec, 5, 15)) {
      const auto f = fundamentals_at(spec, bh, p);
      const Frame a = adapted_frame(f, p), b = adapted_frame(f, p);
      CHECK(a.basis == b.basis);
      CHECK(a.e_n == b.e_n);
      CHECK(a.dropped_axis == b.dropped_axis);
    }
  }
}

TEST_CASE("vertical derivative of tau is the frame mean Cartan torsion") {
  const auto spec = builtin::funk(2);
  const PointDir p = normalize(spec, {{0.3, 0.1}, {1.0, 0.5}});
  const Fundamentals f = fundamentals_at(spec, bh, p);
  const Frame fr = adapted_frame(f, p);
  const Conventions conv;
  double expected = 0;
  for (int i = 0; i < 2; ++i) expected += fr.basis[0][i] * f.I[i];
  expected *= conv.frame_sign * f.F;
  CHECK(std::abs(expected) > 1e-3);
  CHECK(vertical_derivative(spec, bh, p, ScalarTag::tau, 0, conv) == doctest::Approx(expected).epsilon(1e-10));
  // degree-0 scalars: the unnormalized direction gives the same value
  PointDir q = p;
  for (double& v : q.y) v *= 4;
  CHECK(vertical_derivative(spec, bh, q, ScalarTag::tau, 0, conv) == doctest::Approx(expected).epsilon(1e-10));
  CHECK_THROWS_AS(vertical_derivative(spec, bh, p, ScalarTag::tau, 1, conv), std::invalid_argument);
  CHECK_THROWS_AS(parse_scalar_tag("H"), std::invalid_argument);
}
