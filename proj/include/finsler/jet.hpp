#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace finsler {

/// Truncation settings for jets over the 2n chart variables (x, y).
struct JetSpec {
  int num_vars = 4;
  int max_order = 6;

  /// Throws std::invalid_argument unless num_vars is even and >= 2 and
  /// max_order >= 1.
  void validate() const;
  friend bool operator==(const JetSpec&, const JetSpec&) = default;
};

/// Number of monomials of total degree <= order in num_vars variables.
std::size_t monomial_count(int num_vars, int order);

/// Precomputed multi-index tables for one (num_vars, max_order) pair.
///
/// Coefficients are stored densely, graded by total degree, so a jet
/// truncated at order d is a prefix of a jet truncated at max_order.
class JetSpace {
 public:
  struct ProductTerm {
    std::uint16_t lhs;
    std::uint16_t rhs;
    std::uint16_t out;
  };

  JetSpace(int num_vars, int max_order);

  int num_vars() const { return num_vars_; }
  int max_order() const { return max_order_; }

  /// Number of coefficients of a jet truncated at `order`.
  std::size_t size(int order) const { return degree_end_[order]; }
  int degree(std::size_t idx) const { return degree_[idx]; }
  std::span<const std::uint8_t> multi_index(std::size_t idx) const;

  /// Index of a multi-index, or -1 when its degree exceeds max_order.
  long index_of(std::span<const int> exponents) const;
  /// Index of m + e_var for the monomial at idx, or -1 past max_order.
  long raise(int var, std::size_t idx) const { return raise_[var][idx]; }

  /// Product terms whose output has degree <= order form a prefix.
  std::span<const ProductTerm> product_terms(int order) const;

 private:
  int num_vars_;
  int max_order_;
  std::vector<std::uint8_t> exponents_;
  std::vector<int> degree_;
  std::vector<std::size_t> degree_end_;
  std::vector<std::vector<long>> raise_;
  std::vector<ProductTerm> products_;
  std::vector<std::size_t> product_end_;
};

/// Shared, lazily built table for a given shape. Thread-safe.
std::shared_ptr<const JetSpace> jet_space(int num_vars, int max_order);
std::shared_ptr<const JetSpace> jet_space(const JetSpec& spec);

class JetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Truncated multivariate Taylor expansion of a scalar at a base point.
///
/// coeff(m) holds d^m f / m!. A jet carries its own truncation order, which
/// drops by one under differentiation; binary operations truncate to the
/// smaller order of their operands.
class Jet {
 public:
  Jet() = default;
  Jet(std::shared_ptr<const JetSpace> space, int order);

  static Jet constant(std::shared_ptr<const JetSpace> space, double value, int order = -1);
  static Jet variable(std::shared_ptr<const JetSpace> space, int index, double value);

  const JetSpace& space() const { return *space_; }
  const std::shared_ptr<const JetSpace>& space_ptr() const { return space_; }
  int order() const { return order_; }
  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// Coefficient of the monomial with the given exponents (0 past order).
  double coeff(std::span<const int> exponents) const;
  /// Mixed partial derivative d^m f at the base point: m! * coeff(m).
  double partial(std::span<const int> exponents) const;
  /// First partial derivative with respect to one variable.
  double gradient(int var) const;

  /// Copy truncated to a lower order.
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator-(double a, const Jet& b) { return -b + a; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator/(double a, const Jet& b);

 private:
  void check_compatible(const Jet& rhs) const;

  std::shared_ptr<const JetSpace> space_;
  int order_ = 0;
  std::vector<double> coeffs_;
};

/// Seeds the coordinate function `index` at `value`.
Jet seed_variable(int index, double value, const JetSpec& spec);

/// Partial derivative with respect to one variable; the order drops by one.
Jet derivative(const Jet& a, int var);

/// f(a) for a univariate f given its Taylor coefficients at a.value().
Jet compose(const Jet& a, std::span<const double> taylor);

Jet reciprocal(const Jet& a);
Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet pow(const Jet& a, double r);
Jet pow(const Jet& a, int k);
Jet square(const Jet& a);

double extract_partial(const Jet& a, std::span<const int> multi_index);

/// Re-expresses a jet over the leading variables of a wider space; the
/// extra variables enter with zero coefficients.
Jet embed(const Jet& src, const std::shared_ptr<const JetSpace>& target);

/// Plain-real overloads so templated evaluators can run on double and Jet.
inline double value_of(double v) { return v; }
inline double value_of(const Jet& j) { return j.value(); }

}  // namespace finsler
