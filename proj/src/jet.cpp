#include "finsler/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

namespace finsler {

void JetSpec::validate() const {
  if (num_vars < 2 || num_vars % 2 != 0) {
    throw std::invalid_argument("JetSpec: num_vars must be even and >= 2, got " +
                                std::to_string(num_vars));
  }
  if (max_order < 1) {
    throw std::invalid_argument("JetSpec: max_order must be >= 1");
  }
}

std::size_t monomial_count(int num_vars, int order) {
  // C(num_vars + order, order)
  std::size_t c = 1;
  for (int k = 1; k <= order; ++k) {
    c = c * static_cast<std::size_t>(num_vars + k) / static_cast<std::size_t>(k);
  }
  return c;
}

namespace {

void enumerate_degree(int num_vars, int degree, int var, std::vector<int>& current,
                      std::vector<std::uint8_t>& out) {
  if (var == num_vars - 1) {
    current[var] = degree;
    for (int e : current) out.push_back(static_cast<std::uint8_t>(e));
    return;
  }
  for (int e = degree; e >= 0; --e) {
    current[var] = e;
    enumerate_degree(num_vars, degree - e, var + 1, current, out);
  }
  current[var] = 0;
}

}  // namespace

JetSpace::JetSpace(int num_vars, int max_order) : num_vars_(num_vars), max_order_(max_order) {
  if (num_vars < 1 || max_order < 0) throw std::invalid_argument("JetSpace: bad shape");
  const std::size_t total = monomial_count(num_vars, max_order);
  if (total > 65535) throw std::invalid_argument("JetSpace: too many coefficients");

  std::vector<int> current(num_vars, 0);
  degree_end_.resize(max_order + 1);
  for (int d = 0; d <= max_order; ++d) {
    enumerate_degree(num_vars, d, 0, current, exponents_);
    degree_end_[d] = exponents_.size() / num_vars;
    while (degree_.size() < degree_end_[d]) degree_.push_back(d);
  }

  std::map<std::vector<int>, long> lookup;
  for (std::size_t i = 0; i < total; ++i) {
    auto m = multi_index(i);
    lookup.emplace(std::vector<int>(m.begin(), m.end()), static_cast<long>(i));
  }

  raise_.assign(num_vars, std::vector<long>(total, -1));
  for (std::size_t i = 0; i < total; ++i) {
    if (degree_[i] == max_order) continue;
    auto m = multi_index(i);
    std::vector<int> up(m.begin(), m.end());
    for (int v = 0; v < num_vars; ++v) {
      ++up[v];
      raise_[v][i] = lookup.at(up);
      --up[v];
    }
  }

  std::vector<std::vector<ProductTerm>> by_degree(max_order + 1);
  std::vector<int> sum(num_vars);
  for (std::size_t i = 0; i < total; ++i) {
    auto a = multi_index(i);
    for (std::size_t j = 0; j < total; ++j) {
      const int d = degree_[i] + degree_[j];
      if (d > max_order) {
        if (degree_[j] > max_order - degree_[i]) break;
        continue;
      }
      auto b = multi_index(j);
      for (int v = 0; v < num_vars; ++v) sum[v] = a[v] + b[v];
      const long k = lookup.at(sum);
      by_degree[d].push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                              static_cast<std::uint16_t>(k)});
    }
  }
  product_end_.resize(max_order + 1);
  for (int d = 0; d <= max_order; ++d) {
    products_.insert(products_.end(), by_degree[d].begin(), by_degree[d].end());
    product_end_[d] = products_.size();
  }
}

std::span<const std::uint8_t> JetSpace::multi_index(std::size_t idx) const {
  return {exponents_.data() + idx * num_vars_, static_cast<std::size_t>(num_vars_)};
}

long JetSpace::index_of(std::span<const int> exponents) const {
  if (static_cast<int>(exponents.size()) != num_vars_) {
    throw std::invalid_argument("JetSpace: multi-index has wrong length");
  }
  int d = 0;
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("JetSpace: negative exponent");
    d += e;
  }
  if (d > max_order_) return -1;
  long idx = 0;
  for (int v = 0; v < num_vars_; ++v) {
    for (int k = 0; k < exponents[v]; ++k) idx = raise_[v][idx];
  }
  return idx;
}

std::span<const JetSpace::ProductTerm> JetSpace::product_terms(int order) const {
  return {products_.data(), product_end_[order]};
}

std::shared_ptr<const JetSpace> jet_space(int num_vars, int max_order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{num_vars, max_order}];
  if (!slot) slot = std::make_shared<const JetSpace>(num_vars, max_order);
  return slot;
}

std::shared_ptr<const JetSpace> jet_space(const JetSpec& spec) {
  spec.validate();
  return jet_space(spec.num_vars, spec.max_order);
}

// ---------------------------------------------------------------------------

Jet::Jet(std::shared_ptr<const JetSpace> space, int order)
    : space_(std::move(space)), order_(order) {
  if (order_ < 0 || order_ > space_->max_order()) throw JetError("Jet: order out of range");
  coeffs_.assign(space_->size(order_), 0.0);
}

Jet Jet::constant(std::shared_ptr<const JetSpace> space, double value, int order) {
  const int o = order < 0 ? space->max_order() : order;
  Jet j(std::move(space), o);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(std::shared_ptr<const JetSpace> space, int index, double value) {
  if (index < 0 || index >= space->num_vars()) {
    throw JetError("seed_variable: index " + std::to_string(index) + " out of range");
  }
  Jet j = constant(std::move(space), value);
  if (j.order_ >= 1) j.coeffs_[j.space_->raise(index, 0)] = 1.0;
  return j;
}

double Jet::coeff(std::span<const int> exponents) const {
  const long idx = space_->index_of(exponents);
  if (idx < 0) throw JetError("Jet: multi-index degree exceeds max_order");
  if (static_cast<std::size_t>(idx) >= coeffs_.size()) {
    throw JetError("Jet: multi-index degree exceeds jet order");
  }
  return coeffs_[idx];
}

double Jet::partial(std::span<const int> exponents) const {
  double factorial = 1.0;
  for (int e : exponents) {
    for (int k = 2; k <= e; ++k) factorial *= k;
  }
  return factorial * coeff(exponents);
}

double Jet::gradient(int var) const {
  if (order_ < 1) throw JetError("Jet: gradient of an order-0 jet");
  return coeffs_[space_->raise(var, 0)];
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet j(space_, order);
  std::copy_n(coeffs_.begin(), j.coeffs_.size(), j.coeffs_.begin());
  return j;
}

void Jet::check_compatible(const Jet& rhs) const {
  if (space_ != rhs.space_) throw JetError("Jet: operands from different jet spaces");
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_compatible(rhs);
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_compatible(rhs);
  if (rhs.order_ < order_) *this = truncated(rhs.order_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator+=(double rhs) {
  coeffs_[0] += rhs;
  return *this;
}
Jet& Jet::operator-=(double rhs) {
  coeffs_[0] -= rhs;
  return *this;
}
Jet& Jet::operator*=(double rhs) {
  for (double& c : coeffs_) c *= rhs;
  return *this;
}
Jet& Jet::operator/=(double rhs) {
  for (double& c : coeffs_) c /= rhs;
  return *this;
}

Jet operator-(Jet a) {
  for (double& c : a.coeffs_) c = -c;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  const int order = std::min(a.order_, b.order_);
  Jet out(a.space_, order);
  const double* pa = a.coeffs_.data();
  const double* pb = b.coeffs_.data();
  double* po = out.coeffs_.data();
  for (const auto& t : a.space_->product_terms(order)) po[t.out] += pa[t.lhs] * pb[t.rhs];
  return out;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet operator/(double a, const Jet& b) { return reciprocal(b) * a; }

// ---------------------------------------------------------------------------

Jet seed_variable(int index, double value, const JetSpec& spec) {
  return Jet::variable(jet_space(spec), index, value);
}

Jet derivative(const Jet& a, int var) {
  const auto& space = a.space();
  if (var < 0 || var >= space.num_vars()) throw JetError("derivative: variable out of range");
  if (a.order() < 1) throw JetError("derivative: jet order underflow");
  Jet out(a.space_ptr(), a.order() - 1);
  auto src = a.coeffs();
  auto dst = out.coeffs();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const long up = space.raise(var, i);
    dst[i] = (space.multi_index(i)[var] + 1) * src[up];
  }
  return out;
}

Jet compose(const Jet& a, std::span<const double> taylor) {
  // Horner in the non-constant part t = a - a(0); t^k vanishes past order.
  Jet t = a;
  t.coeffs()[0] = 0.0;
  const int terms = std::min<int>(a.order(), static_cast<int>(taylor.size()) - 1);
  Jet out = Jet::constant(a.space_ptr(), taylor[terms], a.order());
  for (int k = terms - 1; k >= 0; --k) {
    out = out * t;
    out += taylor[k];
  }
  return out;
}

namespace {

std::vector<double> power_series(double c, double r, int order) {
  // (c + t)^r = c^r * sum binom(r, k) (t / c)^k
  std::vector<double> s(order + 1);
  s[0] = std::pow(c, r);
  for (int k = 1; k <= order; ++k) s[k] = s[k - 1] * (r - (k - 1)) / (k * c);
  return s;
}

}  // namespace

Jet reciprocal(const Jet& a) {
  const double c = a.value();
  if (c == 0.0) throw JetError("division by a jet with zero constant term");
  return compose(a, power_series(c, -1.0, a.order()));
}

Jet sqrt(const Jet& a) {
  const double c = a.value();
  if (!(c > 0.0)) throw JetError("sqrt: constant term must be positive, got " + std::to_string(c));
  return compose(a, power_series(c, 0.5, a.order()));
}

Jet pow(const Jet& a, double r) {
  if (r == std::floor(r) && std::abs(r) <= 64.0) return pow(a, static_cast<int>(r));
  const double c = a.value();
  if (!(c > 0.0)) throw JetError("pow: constant term must be positive for non-integer exponent");
  return compose(a, power_series(c, r, a.order()));
}

Jet pow(const Jet& a, int k) {
  if (k < 0) return reciprocal(pow(a, -k));
  Jet result = Jet::constant(a.space_ptr(), 1.0, a.order());
  Jet base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

Jet square(const Jet& a) { return a * a; }

Jet exp(const Jet& a) {
  std::vector<double> s(a.order() + 1);
  s[0] = std::exp(a.value());
  for (int k = 1; k <= a.order(); ++k) s[k] = s[k - 1] / k;
  return compose(a, s);
}

Jet log(const Jet& a) {
  const double c = a.value();
  if (!(c > 0.0)) throw JetError("log: constant term must be positive, got " + std::to_string(c));
  std::vector<double> s(a.order() + 1);
  s[0] = std::log(c);
  double cpow = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    cpow *= c;
    s[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * cpow);
  }
  return compose(a, s);
}

namespace {

std::vector<double> trig_series(double c, int order, int phase) {
  // k-th derivative of sin is sin(c + k*pi/2); cos is sin shifted by one.
  const double sc = std::sin(c);
  const double cc = std::cos(c);
  const double cycle[4] = {sc, cc, -sc, -cc};
  std::vector<double> s(order + 1);
  double factorial = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) factorial *= k;
    s[k] = cycle[(k + phase) % 4] / factorial;
  }
  return s;
}

}  // namespace

Jet sin(const Jet& a) { return compose(a, trig_series(a.value(), a.order(), 0)); }
Jet cos(const Jet& a) { return compose(a, trig_series(a.value(), a.order(), 1)); }

double extract_partial(const Jet& a, std::span<const int> multi_index) {
  return a.partial(multi_index);
}

Jet embed(const Jet& src, const std::shared_ptr<const JetSpace>& target) {
  const auto& from = src.space();
  if (target->num_vars() < from.num_vars()) throw JetError("embed: target has fewer variables");
  const int order = std::min(src.order(), target->max_order());
  Jet out(target, order);
  std::vector<int> m(target->num_vars(), 0);
  auto dst = out.coeffs();
  for (std::size_t i = 0; i < from.size(order); ++i) {
    auto e = from.multi_index(i);
    std::copy(e.begin(), e.end(), m.begin());
    dst[target->index_of(m)] = src.coeffs()[i];
  }
  return out;
}

}  // namespace finsler
