#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "finsler/metric.hpp"
#include "finsler/volume.hpp"

namespace finsler {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A metric file: the metric plus an optional volume choice.
struct MetricConfig {
  MetricSpec spec;
  std::optional<VolumeDensity> volume;
};

/// JSON metric description, e.g.
///   {"name": "tilted", "dimension": 2, "family": "randers",
///    "a": [["1", "0"], ["0", "1"]], "b": ["0.2*x2", "0"],
///    "domain": {"box": {"lo": [-1, -1], "hi": [1, 1]}},
///    "volume": {"kind": "bh", "quadrature_points": 1024}}
/// Families: riemannian (g), randers (a, b), minkowski (norm), funk,
/// expression (F), builtin (builtin: name). Matrices may be nested or flat.
MetricConfig parse_metric_config(const std::string& text);
MetricConfig load_metric_config(const std::string& path);

/// Metric from an inline expression F(x, y) on the box [-1, 1]^n.
MetricSpec metric_from_expression(const std::string& source, int dimension);

}  // namespace finsler
