#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "finsler/verify.hpp"

using namespace finsler;

TEST_CASE("sign calibration is unique") {
  const CalibrationReport cal = calibrate_conventions();
  CHECK(cal.ok);
  CHECK(cal.unique);
  CHECK(cal.conventions.calibrated);
  const Conventions expected;
  CHECK(cal.conventions.frame_sign == expected.frame_sign);
  CHECK(cal.conventions.landsberg_sign == expected.landsberg_sign);
  CHECK(cal.conventions.kappa == expected.kappa);
  CHECK(cal.conventions.curvature_sign == expected.curvature_sign);
  REQUIRE(cal.basic_equ4_residuals.size() == 4);
  int consistent = 0;
  for (const auto& [key, r] : cal.basic_equ4_residuals) consistent += r <= 1e-7;
  CHECK(consistent == 1);
  CHECK(cal.kappa_residual <= 1e-7);
  CHECK(cal.jacobi1_residual <= 1e-7);
  CHECK(cal.jacobi1_flipped_residual > 1e-2);
}

TEST_CASE("e-isotropy classifier") {
  const auto bh = VolumeDensity::busemann_hausdorff();
  const Verdict funk = classify_e_isotropy(builtin::funk(2), bh, {0.3, 0}, 16);
  CHECK(funk.decision);
  CHECK(funk.fitted.at("c") == doctest::Approx(1.5).epsilon(1e-6));
  const Verdict funk3 = classify_e_isotropy(builtin::funk(3), VolumeDensity::busemann_hausdorff(48), {0.1, 0.2, 0}, 32);
  CHECK(funk3.decision);
  CHECK(funk3.fitted.at("c") == doctest::Approx(4.0).epsilon(1e-6));
  const Verdict generic = classify_e_isotropy(builtin::randers_generic(), bh, {0.2, 0.1}, 16);
  CHECK_FALSE(generic.decision);
  CHECK(generic.measure > 1e-2);
}

TEST_CASE("S classifier and its lattice") {
  const auto bh = VolumeDensity::busemann_hausdorff();
  SUBCASE("Funk is isotropic with c = (n+1)/2") {
    const SClassification s = classify_S(builtin::funk(2), bh, {0.3, 0});
    CHECK(s.isotropic.decision);
    CHECK(s.c == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(std::hypot(s.xi[0], s.xi[1]) <= 1e-8);
  }
  SUBCASE("a gauge change by f = x1 gives xi = df") {
    const auto vol = VolumeDensity::riemannian().with_gauge(parse_metric("x1", 2));
    const SClassification s = classify_S(builtin::euclidean(2), vol, {0.2, 0.1});
    CHECK(s.almost.decision);
    CHECK_FALSE(s.isotropic.decision);
    CHECK(s.xi[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(s.xi[1]) <= 1e-8);
    CHECK(std::abs(s.c) <= 1e-8);
    CHECK(s.dxi <= 1e-6);
  }
  SUBCASE("generic Randers is not weakly isotropic") {
    const SClassification s = classify_S(builtin::randers_generic(), bh, {0.2, 0.1});
    CHECK_FALSE(s.weakly.decision);
    CHECK_FALSE(s.almost.decision);
    CHECK_FALSE(s.isotropic.decision);
  }
  SUBCASE("isotropic implies almost implies weakly") {
    for (const auto& spec : builtin::zoo()) {
      const auto vol = default_volume(spec);
      for (const auto& p : sample_points(spec, 2, 9)) {
        const SClassification s = classify_S(spec, vol, p.x);
        CAPTURE(spec.name);
        if (s.isotropic.decision) CHECK(s.almost.decision);
        if (s.almost.decision) CHECK(s.weakly.decision);
      }
    }
  }
}

TEST_CASE("scalar flag classifier") {
  const Verdict funk = classify_scalar_flag(builtin::funk(3), {0.1, 0, 0}, 64, 1);
  CHECK(funk.decision);
  CHECK(funk.fitted.at("K_mean") == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK(classify_scalar_flag(builtin::sphere(), {0.3, 0.2}, 64, 1).decision);
}

TEST_CASE("scenarios") {
  const std::vector<Vec> xs{{0.1, -0.2}, {0.3, 0.1}};
  SUBCASE("theorem 1 on Funk and generic Randers") {
    const auto funk = check_theorem1(builtin::funk(2), VolumeDensity::busemann_hausdorff(), xs);
    CHECK(funk.passed());
    const auto generic = check_theorem1(builtin::randers_generic(), VolumeDensity::busemann_hausdorff(), xs);
    CHECK(generic.passed());
    for (const auto& v : generic.verdicts) {
      if (v.kind == "e_isotropic" || v.kind == "S_isotropic") CHECK_FALSE(v.decision);
    }
  }
  SUBCASE("theorem 2 and corollaries on a Berwald metric") {
    const auto rep = check_theorem2_cor12(builtin::randers_berwald(), default_volume(builtin::randers_berwald()), xs);
    CHECK(rep.applicable);
    CHECK(rep.passed());
    bool gauge = false;
    for (const auto& c : rep.checks) gauge |= c.name == "cor1:gauge_xi_equals_df" && c.passed;
    CHECK(gauge);
  }
  SUBCASE("corollary 3 on Funk") {
    const auto rep = check_corollary3(builtin::funk(2), VolumeDensity::busemann_hausdorff(), xs);
    CHECK(rep.passed());
  }
}

TEST_CASE("finite-difference oracle") {
  const auto bh = VolumeDensity::busemann_hausdorff();
  SUBCASE("Euclidean F^2 second derivatives") {
    const PointDir p{{0.1, 0.2}, {0.6, -0.8}};
    CHECK(fd_oracle(builtin::euclidean(2), bh, OracleQuantity::F2, 0, p, {0, 0, 2, 0}) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::abs(fd_oracle(builtin::euclidean(2), bh, OracleQuantity::F2, 0, p, {0, 0, 1, 1})) <= 1e-9);
  }
  SUBCASE("jets and differences agree") {
    const PointDir p{{0.2, -0.1}, {0.7, 0.4}};
    for (const auto& spec : {builtin::sphere(), builtin::randers_generic(), builtin::funk(2)}) {
      const auto vol = default_volume(spec);
      for (const auto& ex : std::vector<std::vector<int>>{{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 1}, {1, 0, 0, 2}}) {
        for (auto q : {OracleQuantity::F2, OracleQuantity::G, OracleQuantity::S_big}) {
          const double jet = jet_partial(spec, vol, q, 0, p, ex);
          const double fd = fd_oracle(spec, vol, q, 0, p, ex);
          CAPTURE(spec.name);
          CHECK(std::abs(jet - fd) <= 1e-5 * (1 + std::abs(jet)));
        }
      }
    }
  }
  SUBCASE("Funk S/F through differences alone") {
    const PointDir p = normalize(builtin::funk(2), {{0.3, 0.2}, {0.5, 1.0}});
    CHECK(fd_oracle(builtin::funk(2), bh, OracleQuantity::S_big, 0, p, {0, 0, 0, 0}) ==
          doctest::Approx(1.5).epsilon(1e-4));
  }
  SUBCASE("exponent validation") {
    const PointDir p{{0, 0}, {1, 0}};
    CHECK_THROWS_AS(fd_oracle(builtin::euclidean(2), bh, OracleQuantity::F2, 0, p, {0, 0, 2, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(fd_oracle(builtin::euclidean(2), bh, OracleQuantity::F2, 0, p, {0, 1}), std::invalid_argument);
  }
}

TEST_CASE("suite reports") {
  SUBCASE("empty metric list") {
    SuiteConfig cfg;
    const SuiteReport rep = run_suite(cfg);
    CHECK(rep.passed);
    CHECK(rep.rows.empty());
  }
  SUBCASE("deterministic JSON and CSV") {
    SuiteConfig cfg;
    cfg.metrics = {builtin::funk(2), builtin::sphere()};
    cfg.samples = 6;
    cfg.identity_samples = 2;
    cfg.classify_points = 1;
    cfg.oracle_samples = 1;
    const SuiteReport a = run_suite(cfg), b = run_suite(cfg);
    CHECK(a.passed);
    CHECK(a.to_json(false) == b.to_json(false));
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_json(true).find("timestamp") != std::string::npos);
    CHECK(a.to_json(false).find("timestamp") == std::string::npos);
    CHECK(a.to_csv().rfind("identity,metric,sample,x,y,residual,scale,tol,passed\n", 0) == 0);
    CHECK(a.failure_table().empty());
  }
  SUBCASE("impossible tolerances fail") {
    SuiteConfig cfg;
    cfg.metrics = {builtin::funk(2)};
    cfg.samples = 4;
    cfg.identity_samples = 2;
    cfg.classify_points = 1;
    cfg.oracle_samples = 1;
    cfg.tol = Tolerances::uniform(1e-18);
    const SuiteReport rep = run_suite(cfg);
    CHECK_FALSE(rep.passed);
    CHECK_FALSE(rep.failure_table().empty());
  }
}
