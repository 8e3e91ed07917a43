#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/curvature.hpp"

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

VolumeDensity bh_for(int n) { return VolumeDensity::busemann_hausdorff(n == 2 ? 1024 : 48); }

}  // namespace

TEST_CASE("E, L and R are symmetric and annihilate y") {
  for (const auto& spec : builtin::zoo()) {
    const int n = spec.dimension;
    for (const auto& p : samples(spec, 3, 31)) {
      CAPTURE(spec.name);
      const CurvatureBundle cb = curvature_bundle(spec, bh_for(n), p);
      const double Es = 1 + max_abs(cb.E.E), Ls = 1 + max_abs(cb.L.L), Rs = 1 + max_abs(cb.flag.Rspray);
      for (int j = 0; j < n; ++j) {
        double Ey = 0, Ry = 0, yR = 0;
        for (int k = 0; k < n; ++k) {
          CHECK(std::abs(cb.E.E[j * n + k] - cb.E.E[k * n + j]) <= 1e-10 * Es);
          CHECK(std::abs(cb.flag.R_lower[j * n + k] - cb.flag.R_lower[k * n + j]) <= 1e-9 * Rs);
          Ey += cb.E.E[j * n + k] * p.y[k];
          Ry += cb.flag.Rspray[j * n + k] * p.y[k];
          yR += cb.flag.R_lower[k * n + j] * p.y[k];
          double Ly = 0;
          for (int l = 0; l < n; ++l) {
            CHECK(std::abs(cb.L.L[(j * n + k) * n + l] - cb.L.L[(k * n + j) * n + l]) <= 1e-10 * Ls);
            CHECK(std::abs(cb.L.L[(j * n + k) * n + l] - cb.L.L[(j * n + l) * n + k]) <= 1e-10 * Ls);
            Ly += cb.L.L[(j * n + k) * n + l] * p.y[l];
          }
          CHECK(std::abs(Ly) <= 1e-10 * Ls);
        }
        CHECK(std::abs(Ey) <= 1e-10 * Es);
        CHECK(std::abs(Ry) <= 1e-9 * Rs);
        CHECK(std::abs(yR) <= 1e-9 * Rs);
      }
      double Jy = 0;
      for (int j = 0; j < n; ++j) Jy += cb.L.J[j] * p.y[j];
      CHECK(std::abs(Jy) <= 1e-10 * Ls);
    }
  }
}

TEST_CASE("both hh-curvatures reproduce the spray curvature") {
  for (const auto& spec : {builtin::randers_generic(), builtin::funk(3), builtin::sphere()}) {
    const int n = spec.dimension;
    for (const auto& p : samples(spec, 3, 32)) {
      const CurvatureBundle cb = curvature_bundle(spec, bh_for(n), p);
      const double scale = 1 + max_abs(cb.flag.Rspray);
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          double rc = 0, rb = 0;
          for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
              rc += p.y[j] * cb.hh.R_chern[((i * n + j) * n + k) * n + l] * p.y[l];
              rb += p.y[j] * cb.hh.R_berwald[((i * n + j) * n + k) * n + l] * p.y[l];
            }
          }
          CHECK(std::abs(rc - cb.flag.Rspray[i * n + k]) <= 1e-8 * scale);
          CHECK(std::abs(rb - cb.flag.Rspray[i * n + k]) <= 1e-8 * scale);
        }
      }
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
          CHECK(std::abs(cb.hh.trR[k * n + l] + cb.hh.trR[l * n + k]) <= 1e-9 * scale);
          CHECK(std::abs(cb.hh.trR_berwald[k * n + l] + cb.hh.trR_berwald[l * n + k]) <= 1e-9 * scale);
        }
      }
    }
  }
}

TEST_CASE("S-curvature routes and the Hessian relation") {
  for (const auto& spec : {builtin::randers_generic(), builtin::randers_berwald(), builtin::funk(2)}) {
    for (const auto& p : samples(spec, 4, 33)) {
      const auto vol = bh_for(2);
      const double a = s_curvature(spec, vol, p, SRoute::distortion);
      const double b = s_curvature(spec, vol, p, SRoute::divergence);
      CHECK(std::abs(a - b) <= 1e-7 * (1 + std::abs(a)));

      LocalGeometry geo(spec, p.x, p.y, vol);
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
          std::vector<int> ex(4, 0);
          ex[2 + j] += 1;
          ex[2 + k] += 1;
          CHECK(geo.E(j, k).value() == doctest::Approx(0.5 * geo.S_big().partial(ex)).epsilon(1e-7).scale(1));
        }
      }
    }
  }
}

TEST_CASE("Funk metric constants") {
  for (int n : {2, 3}) {
    const auto spec = builtin::funk(n);
    for (const auto& p : samples(spec, 4, 34)) {
      const CurvatureBundle cb = curvature_bundle(spec, bh_for(n), p);
      const double F = cb.F;
      CAPTURE(n);
      CHECK(cb.S_big / F == doctest::Approx((n + 1) / 2.0).epsilon(1e-6));
      CHECK(cb.E.e == doctest::Approx((n + 1) / 2.0 * (n - 1)).epsilon(1e-6));
      Vec V(n, 0.0);
      V[p.y[0] == 0 ? 0 : 1] = 1.0;
      CHECK(cb.flag.flag(V) == doctest::Approx(-0.25).epsilon(1e-8));
      CHECK(cb.flag.ricci / ((n - 1) * F * F) == doctest::Approx(-0.25).epsilon(1e-8));
    }
  }
}

TEST_CASE("unit sphere has flag curvature one") {
  const auto spec = builtin::sphere();
  for (const auto& p : samples(spec, 6, 35)) {
    const FlagCurvature fc = riemann_flag(spec, p, Vec{p.y[1], -p.y[0] + 0.3});
    REQUIRE(fc.K);
    CHECK(*fc.K == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK_THROWS(riemann_flag(spec, {{0, 0}, {1, 2}}, Vec{2, 4}));
}

TEST_CASE("mean Landsberg curvature") {
  SUBCASE("non-Berwald Randers has J != 0") {
    double biggest = 0;
    for (const auto& p : samples(builtin::randers_generic(), 4, 36)) {
      const Landsberg L = landsberg(builtin::randers_generic(), p);
      biggest = std::max(biggest, max_abs(L.J));
    }
    CHECK(biggest > 1e-3);
  }
  SUBCASE("Berwald metrics have L = 0 and the two hh-curvatures agree") {
    for (const auto& p : samples(builtin::randers_berwald(), 4, 37)) {
      const CurvatureBundle cb = curvature_bundle(builtin::randers_berwald(), bh_for(2), p);
      CHECK(max_abs(cb.L.L) <= 1e-10);
      CHECK(max_abs(cb.E.E) <= 1e-9);
      Vec diff(cb.hh.R_chern.size());
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = cb.hh.R_chern[i] - cb.hh.R_berwald[i];
      CHECK(max_abs(diff) <= 1e-9);
      CHECK(max_abs(cb.hh.sigma_bar) <= 1e-9);
    }
  }
}

TEST_CASE("frame identities") {
  const Conventions conv;
  for (const auto& spec : {builtin::randers_generic(), builtin::funk(2), builtin::funk(3)}) {
    const int n = spec.dimension;
    for (const auto& p : samples(spec, 3, 38)) {
      CAPTURE(spec.name);
      const bool funk = spec.name.rfind("funk", 0) == 0;
      const FrameTerms t = frame_identity_terms(spec, bh_for(n), p, conv, funk);
      for (int a = 0; a < n - 1; ++a) {
        CHECK(std::abs(t.basic_equ4(a)) <= 1e-7);
        CHECK(std::abs(t.jacobi1(a)) <= 1e-7);
        if (funk) CHECK(std::abs(t.jacobi2(a)) <= 1e-5);
      }
    }
  }
  const FrameTerms no_k = frame_identity_terms(builtin::randers_generic(), bh_for(2), {{0, 0}, {1, 0}}, conv);
  CHECK_FALSE(no_k.K_comma);
  CHECK_THROWS(no_k.jacobi2(0));
}
