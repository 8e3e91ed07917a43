#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "finsler/config.hpp"
#include "finsler/metric.hpp"
#include "finsler/volume.hpp"

using namespace finsler;

namespace {

double funk_formula(const Vec& x, const Vec& y) {
  double xx = 0, yy = 0, xy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx += x[i] * x[i];
    yy += y[i] * y[i];
    xy += x[i] * y[i];
  }
  return (std::sqrt(yy - (xx * yy - xy * xy)) + xy) / (1 - xx);
}

Vec random_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(n);
  for (double& a : v) a = u(rng);
  return v;
}

}  // namespace

TEST_CASE("parser builds the expected trees") {
  CHECK(parse_metric("sqrt(y1^2 + y2^2)", 2).to_string() == "sqrt(add(pow(y1,2),pow(y2,2)))");
  CHECK(parse_metric("sqrt(y1^2+y2^2) + 0.5*y1", 2).to_string() ==
        "add(sqrt(add(pow(y1,2),pow(y2,2))),mul(0.5,y1))");
  // ^ binds tighter than unary minus and is right associative
  CHECK(parse_metric("-x1^2", 2).eval(Vec{3.0, 0.0}, Vec{0.0, 0.0}) == doctest::Approx(-9.0));
  CHECK(parse_metric("2^3^2", 2).eval(Vec{0, 0}, Vec{0, 0}) == doctest::Approx(512.0));
  CHECK(parse_metric("8/4/2", 2).eval(Vec{0, 0}, Vec{0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("parse errors carry kind and offset") {
  auto error_of = [](const char* src) {
    try {
      parse_metric(src, 2);
    } catch (const ParseError& e) {
      return std::make_pair(e.kind(), e.position());
    }
    FAIL("no error for " << src);
    return std::make_pair(ParseError::Kind::lexical, std::size_t{0});
  };
  CHECK(error_of("sqrt(y1^2 +") == std::make_pair(ParseError::Kind::syntax, std::size_t{12}));
  CHECK(error_of("foo(y1)").first == ParseError::Kind::unknown_identifier);
  CHECK(error_of("y3 + y1").first == ParseError::Kind::unknown_identifier);
  CHECK(error_of("sin(y1, y2)").first == ParseError::Kind::arity);
  CHECK(error_of("y1 $ y2").first == ParseError::Kind::lexical);
}

TEST_CASE("real evaluation matches the jet constant term") {
  const auto e = parse_metric("sqrt(exp(x1)*y1^2 + y2^2 + sin(x2)*y1*y2/3) + 0.1*cos(x1)*log(2+x2)*y2", 2);
  std::mt19937_64 rng(5);
  for (int s = 0; s < 20; ++s) {
    const Vec x = random_vec(rng, 2, -0.5, 0.5), y = random_vec(rng, 2, 0.5, 1.5);
    const auto space = jet_space(4, 3);
    std::vector<Jet> xs, ys;
    for (int i = 0; i < 2; ++i) {
      xs.push_back(Jet::variable(space, i, x[i]));
      ys.push_back(Jet::variable(space, 2 + i, y[i]));
    }
    const double real = e.eval(x, y);
    CHECK(std::abs(e.eval<Jet>(xs, ys, xs[0]).value() - real) <= 1e-14 * (1 + std::abs(real)));
  }
}

TEST_CASE("eval_F reference values") {
  CHECK(evaluate_metric(builtin::euclidean(2), Vec{0, 0}, Vec{3, 4}) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(evaluate_metric(builtin::funk(2), Vec{0, 0}, Vec{1, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(evaluate_metric(builtin::quartic_minkowski(2), Vec{0, 0}, Vec{1, 1}) ==
        doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
  const Jet F = eval_F(builtin::euclidean(2), Vec{0, 0}, Vec{3, 4}, JetSpec{4, 2});
  CHECK(F.value() == doctest::Approx(5.0));
  CHECK(F.gradient(2) == doctest::Approx(0.6));
}

TEST_CASE("funk family matches the closed formula") {
  for (int n : {2, 3}) {
    const auto spec = builtin::funk(n);
    std::mt19937_64 rng(n);
    for (int s = 0; s < 50; ++s) {
      const Vec x = random_vec(rng, n, -0.5, 0.5), y = random_vec(rng, n, -1, 1);
      CHECK(evaluate_metric(spec, x, y) == doctest::Approx(funk_formula(x, y)).epsilon(1e-13));
    }
  }
}

TEST_CASE("F is positively 1-homogeneous for every family") {
  std::vector<MetricSpec> specs = builtin::zoo();
  specs.push_back(metric_from_expression("(y1^4 + y2^4 + x1^2*y1^2*y2^2)^0.25", 2));
  for (const auto& spec : specs) {
    std::mt19937_64 rng(17);
    const int n = spec.dimension;
    for (int s = 0; s < 30; ++s) {
      const Vec x = random_vec(rng, n, -0.4, 0.4), y = random_vec(rng, n, -1, 1);
      const double F = evaluate_metric(spec, x, y);
      for (double lam : {0.5, 2.0, 7.0}) {
        Vec ly = y;
        for (double& v : ly) v *= lam;
        CHECK_MESSAGE(std::abs(evaluate_metric(spec, x, ly) - lam * F) <= 1e-10 * lam * F, spec.name);
      }
    }
  }
}

TEST_CASE("domain hints and validation") {
  CHECK(builtin::funk(2).contains(Vec{0.5, 0.5}));
  CHECK_FALSE(builtin::funk(2).contains(Vec{0.8, 0.8}));
  CHECK_FALSE(builtin::sphere().contains(Vec{1.5, 0}));
  MetricSpec bad{"bad", 1, FunkFamily{}, DomainBall{Vec(1, 0.0), 0.5}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  MetricSpec mink{"m", 2, MinkowskiFamily{parse_metric("sqrt(y1^2 + x1^2*y2^2)", 2)}, DomainBox{{-1, -1}, {1, 1}}};
  CHECK_THROWS_AS(mink.validate(), std::invalid_argument);
}

TEST_CASE("Busemann-Hausdorff density") {
  const int pts = 2048;
  SUBCASE("Euclidean unit ball gives 1 with vanishing derivatives") {
    for (int n : {2, 3}) {
      const Jet s = density(VolumeDensity::busemann_hausdorff(n == 2 ? pts : 48), builtin::euclidean(n),
                            Vec(n, 0.1), JetSpec{2 * n, 3});
      CHECK(s.value() == doctest::Approx(1.0).epsilon(1e-12));
      for (int i = 0; i < n; ++i) CHECK(std::abs(s.gradient(i)) < 1e-12);
    }
  }
  SUBCASE("quartic norm against the closed-form ball area") {
    // area{y1^4 + y2^4 < 1} = 4 Gamma(5/4)^2 / Gamma(3/2)
    const double area = 4 * std::pow(std::tgamma(1.25), 2) / std::tgamma(1.5);
    const double sigma = density_value(VolumeDensity::busemann_hausdorff(pts), builtin::quartic_minkowski(), Vec{0, 0});
    CHECK(sigma == doctest::Approx(M_PI / area).epsilon(1e-12));
  }
  SUBCASE("half-step rotation of the angular grid") {
    for (const auto& spec : {builtin::quartic_minkowski(), builtin::randers_generic(), builtin::funk(2)}) {
      VolumeDensity a = VolumeDensity::busemann_hausdorff(pts), b = a;
      b.angular_offset = 0.5;
      const Vec x{0.2, -0.1};
      CHECK(std::abs(density_value(a, spec, x) - density_value(b, spec, x)) <= 1e-8);
    }
  }
  SUBCASE("Riemannian metrics give sqrt(det g)") {
    const auto spec = builtin::sphere();
    for (const Vec& x : {Vec{0.0, 0.0}, Vec{0.3, -0.4}, Vec{-0.6, 0.2}}) {
      const double bh = density_value(VolumeDensity::busemann_hausdorff(pts), spec, x);
      const double r = density_value(VolumeDensity::riemannian(), spec, x);
      CHECK(std::abs(bh - r) <= 1e-6 * r);
    }
  }
  SUBCASE("n = 4 is rejected") {
    CHECK_THROWS_AS(density_value(VolumeDensity::busemann_hausdorff(), builtin::euclidean(4), Vec(4, 0.0)),
                    VolumeError);
  }
}

TEST_CASE("riemannian and user densities") {
  MetricSpec diag{"diag", 2,
                  RiemannianFamily{{ExprAst::constant(4), ExprAst::constant(0), ExprAst::constant(0),
                                    ExprAst::constant(1)}},
                  DomainBox{{-1, -1}, {1, 1}}};
  CHECK(density_value(VolumeDensity::riemannian(), diag, Vec{0, 0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(density_value(VolumeDensity::riemannian(), builtin::funk(2), Vec{0, 0}), VolumeError);

  const auto user = VolumeDensity::parse("user:exp(x1)", 2);
  const Jet s = density(user, builtin::euclidean(2), Vec{0.5, 0}, JetSpec{4, 3});
  CHECK(s.value() == doctest::Approx(std::exp(0.5)));
  CHECK(s.gradient(0) == doctest::Approx(std::exp(0.5)));
  CHECK(s.gradient(2) == 0.0);
  CHECK_THROWS(VolumeDensity::parse("user:y1^2", 2));
  CHECK_THROWS_AS(density_value(VolumeDensity::user(parse_metric("x1", 2)), builtin::euclidean(2), Vec{-0.5, 0}),
                  VolumeError);

  // gauge factor exp(-f)
  const auto g = VolumeDensity::riemannian().with_gauge(parse_metric("x1", 2));
  CHECK(density_value(g, builtin::euclidean(2), Vec{0.3, 0}) == doctest::Approx(std::exp(-0.3)));
}

TEST_CASE("strong convexity guard") {
  std::vector<std::pair<Vec, Vec>> samples;
  std::mt19937_64 rng(3);
  for (int s = 0; s < 20; ++s) samples.emplace_back(random_vec(rng, 2, -0.5, 0.5), random_vec(rng, 2, -1, 1));
  const auto euclid = check_strong_convexity(builtin::euclidean(2), samples);
  CHECK(euclid.ok());
  for (const auto& s : euclid.samples) CHECK(s.min_eigenvalue == doctest::Approx(1.0));
  CHECK(check_strong_convexity(builtin::randers_constant_norm(0.5), samples).ok());
  const auto bad = check_strong_convexity(builtin::randers_constant_norm(1.2), samples);
  CHECK(bad.flagged == 20);
}

TEST_CASE("metric config files") {
  const auto cfg = parse_metric_config(R"({
    "name": "tilted", "dimension": 2, "family": "randers",
    "a": [["1", "0"], ["0", "1"]], "b": ["0.2*x2", 0],
    "domain": {"box": {"lo": [-0.5, -0.5], "hi": [0.5, 0.5]}},
    "volume": {"kind": "bh", "quadrature_points": 512}})");
  CHECK(cfg.spec.name == "tilted");
  CHECK(cfg.spec.is_randers());
  REQUIRE(cfg.volume);
  CHECK(cfg.volume->quadrature_points == 512);
  CHECK(evaluate_metric(cfg.spec, Vec{0, 0.5}, Vec{1, 0}) == doctest::Approx(1.1));
  CHECK_FALSE(cfg.spec.contains(Vec{0.6, 0}));

  const auto funk = parse_metric_config(R"({"family": "builtin", "builtin": "funk3"})");
  CHECK(funk.spec.dimension == 3);
  const auto user = parse_metric_config(
      R"({"family": "minkowski", "dimension": 2, "norm": "(y1^4+y2^4)^0.25", "volume": {"kind": "user", "sigma": "1"}})");
  CHECK(user.volume->kind == VolumeKind::user);

  CHECK_THROWS_AS(parse_metric_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_metric_config(R"({"family": "hyperbolic", "dimension": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_metric_config(R"({"family": "riemannian", "dimension": 2, "g": ["1"]})"), ConfigError);
  CHECK_THROWS_AS(parse_metric_config(R"({"family": "expression", "dimension": "two", "F": "y1"})"), ConfigError);
  CHECK_THROWS_AS(parse_metric_config(R"({"family": "expression", "dimension": 2, "F": "sqrt(y1^2 +"})"),
                  ConfigError);
  CHECK_THROWS_AS(load_metric_config("/nonexistent/metric.json"), ConfigError);
}
