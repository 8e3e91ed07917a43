#include "finsler/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace finsler {

namespace {

using nlohmann::json;

ExprAst expr_field(const json& v, int n, const std::string& what) {
  if (v.is_number()) return ExprAst::constant(v.get<double>());
  if (!v.is_string()) throw ConfigError(what + ": expected an expression string or number");
  try {
    return parse_metric(v.get<std::string>(), n);
  } catch (const ParseError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

std::vector<ExprAst> expr_list(const json& v, int n, std::size_t count, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + ": expected an array");
  std::vector<ExprAst> out;
  for (const auto& item : v) {
    if (item.is_array()) {
      for (const auto& inner : item) out.push_back(expr_field(inner, n, what));
    } else {
      out.push_back(expr_field(item, n, what));
    }
  }
  if (out.size() != count) {
    throw ConfigError(what + ": expected " + std::to_string(count) + " entries, got " + std::to_string(out.size()));
  }
  return out;
}

Vec real_list(const json& v, std::size_t count, const std::string& what) {
  if (!v.is_array() || v.size() != count) throw ConfigError(what + ": expected " + std::to_string(count) + " numbers");
  Vec out;
  for (const auto& item : v) {
    if (!item.is_number()) throw ConfigError(what + ": expected numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  return doc.at(key);
}

}  // namespace

MetricSpec metric_from_expression(const std::string& source, int dimension) {
  if (dimension < 2) throw ConfigError("dimension must be at least 2");
  MetricSpec spec{"expression", dimension, ExpressionFamily{parse_metric(source, dimension)},
                  DomainBox{Vec(dimension, -1.0), Vec(dimension, 1.0)}};
  spec.validate();
  return spec;
}

namespace {

MetricConfig parse_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("metric file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("metric file must hold a JSON object");

  MetricConfig cfg;
  const json& fam = require(doc, "family");
  if (!fam.is_string()) throw ConfigError("family must be a string");
  const std::string family = fam.get<std::string>();
  if (family == "builtin") {
    try {
      cfg.spec = builtin::by_name(require(doc, "builtin").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    const int n = require(doc, "dimension").get<int>();
    if (n < 2) throw ConfigError("dimension must be at least 2");
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    MetricSpec& spec = cfg.spec;
    spec.dimension = n;
    spec.domain = DomainBox{Vec(n, -1.0), Vec(n, 1.0)};
    if (family == "riemannian") {
      spec.family = RiemannianFamily{expr_list(require(doc, "g"), n, nn, "g")};
    } else if (family == "randers") {
      spec.family = RandersFamily{expr_list(require(doc, "a"), n, nn, "a"), expr_list(require(doc, "b"), n, n, "b")};
    } else if (family == "minkowski") {
      spec.family = MinkowskiFamily{expr_field(require(doc, "norm"), n, "norm")};
    } else if (family == "funk") {
      spec.family = FunkFamily{};
      spec.domain = DomainBall{Vec(n, 0.0), 0.9};
    } else if (family == "expression") {
      spec.family = ExpressionFamily{expr_field(require(doc, "F"), n, "F")};
    } else {
      throw ConfigError("unknown family '" + family +
                        "' (riemannian, randers, minkowski, funk, expression, builtin)");
    }
    spec.name = doc.value("name", family);
  }
  if (doc.contains("name")) cfg.spec.name = doc["name"].get<std::string>();

  const int n = cfg.spec.dimension;
  if (doc.contains("domain")) {
    const json& d = doc["domain"];
    if (d.contains("box")) {
      cfg.spec.domain = DomainBox{real_list(require(d["box"], "lo"), n, "domain.box.lo"),
                                  real_list(require(d["box"], "hi"), n, "domain.box.hi")};
    } else if (d.contains("ball")) {
      cfg.spec.domain = DomainBall{real_list(require(d["ball"], "center"), n, "domain.ball.center"),
                                   require(d["ball"], "radius").get<double>()};
    } else {
      throw ConfigError("domain must hold 'box' or 'ball'");
    }
  }
  try {
    cfg.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (doc.contains("volume")) {
    const json& v = doc["volume"];
    const std::string kind = v.value("kind", "bh");
    try {
      if (kind == "user") {
        const json& sigma = require(v, "sigma");
        cfg.volume = VolumeDensity::parse(
            "user:" + (sigma.is_string() ? sigma.get<std::string>() : sigma.dump()), n);
      } else {
        cfg.volume = VolumeDensity::parse(kind, n);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("volume: ") + e.what());
    }
    cfg.volume->quadrature_points = v.value("quadrature_points", 0);
  }
  return cfg;
}

}  // namespace

MetricConfig parse_metric_config(const std::string& text) {
  try {
    return parse_document(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("metric file: ") + e.what());
  } catch (const ParseError& e) {
    throw ConfigError(std::string("metric file: ") + e.what());
  }
}

MetricConfig load_metric_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open metric file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric_config(ss.str());
}

}  // namespace finsler
