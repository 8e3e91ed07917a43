#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace finsler {

/// Error raised by the expression parser. `position` is the 1-based byte
/// position in the source where the problem was detected.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { lexical, syntax, unknown_identifier, arity };

  ParseError(Kind kind, std::size_t position, const std::string& message);

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

enum class ExprOp { constant, var_x, var_y, add, sub, mul, div, pow, sqrt, exp, log, sin, cos };

struct ExprNode {
  ExprOp op = ExprOp::constant;
  double value = 0.0;  // constant
  int index = 0;       // var_x / var_y, zero-based
  std::vector<std::shared_ptr<const ExprNode>> args;
};

/// Immutable expression tree over chart coordinates x1..xn and directions
/// y1..yn. Evaluates identically over doubles and jets.
class ExprAst {
 public:
  ExprAst() = default;
  explicit ExprAst(std::shared_ptr<const ExprNode> root);

  static ExprAst constant(double v);
  static ExprAst x(int index);
  static ExprAst y(int index);

  const ExprNode& root() const { return *root_; }
  const std::shared_ptr<const ExprNode>& root_ptr() const { return root_; }
  bool empty() const { return !root_; }

  /// Number of x (resp. y) slots referenced: 1 + the largest index, or 0.
  int x_extent() const;
  int y_extent() const;

  /// Compact prefix form, e.g. sqrt(add(pow(y1,2),pow(y2,2))).
  std::string to_string() const;

  template <class T>
  T eval(std::span<const T> x, std::span<const T> y, const T& like) const;

  double eval(std::span<const double> x, std::span<const double> y) const {
    return eval<double>(x, y, 0.0);
  }

 private:
  std::shared_ptr<const ExprNode> root_;
};

ExprAst operator+(const ExprAst& a, const ExprAst& b);
ExprAst operator-(const ExprAst& a, const ExprAst& b);
ExprAst operator*(const ExprAst& a, const ExprAst& b);
ExprAst operator/(const ExprAst& a, const ExprAst& b);

/// Parses an expression over x1..xn, y1..yn, numbers, + - * / ^, sqrt, exp,
/// log, sin, cos and parentheses. Precedence: ^ (right associative), then
/// unary minus, then * /, then + -. When `dimension` > 0, variable indices
/// above it are rejected as unknown identifiers.
ExprAst parse_metric(std::string_view source, int dimension = 0);

}  // namespace finsler
