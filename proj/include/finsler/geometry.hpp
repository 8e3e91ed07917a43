#pragma once

#include <optional>
#include <span>
#include <vector>

#include "finsler/jet.hpp"
#include "finsler/jet_matrix.hpp"
#include "finsler/metric.hpp"
#include "finsler/volume.hpp"

namespace finsler {

/// Raised when g is too badly conditioned to trust derived quantities.
class IllConditioned : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class SRoute { distortion, divergence };
enum class Connection { chern, berwald };

/// Lazily evaluated jet pipeline at one point (x, y) of TM.
///
/// Jets live over the 2n variables (x^1..x^n, y^1..y^n) and every quantity
/// is computed once on first access. Orders drop along the pipeline:
/// F^2 (K), g (K-2), G (K-2), N (K-3), Berwald coefficients (K-4),
/// Chern coefficients (K-3), E and L (K-5), spray curvature (K-4).
/// Not thread-safe; build one per thread.
class LocalGeometry {
 public:
  static constexpr double max_condition = 1e8;

  LocalGeometry(const MetricSpec& spec, std::span<const double> x, std::span<const double> y,
                const VolumeDensity& volume = {}, int order = 6);

  int dim() const { return n_; }
  int order() const { return order_; }
  const MetricSpec& spec() const { return spec_; }
  const VolumeDensity& volume() const { return volume_; }
  const Vec& x() const { return x_; }
  const Vec& y() const { return y_; }
  const std::shared_ptr<const JetSpace>& space() const { return space_; }
  int xvar(int i) const { return i; }
  int yvar(int i) const { return n_ + i; }
  const Jet& y_jet(int i) const { return ys_[i]; }

  const Jet& F();
  const Jet& F2();
  const Jet& g(int i, int j);
  const Jet& g_inv(int i, int j);
  const Jet& log_det_g();
  double condition_number();
  /// C_ijk = 1/4 d^3 F^2 / dy^i dy^j dy^k.
  double cartan(int i, int j, int k);
  /// g_ij y^j as jets.
  const Jet& y_lower(int i);

  const Jet& log_sigma();
  const Jet& tau();
  /// Supplies ln sigma computed elsewhere (e.g. cached per x); must live on
  /// this geometry's jet space.
  void set_log_sigma(Jet log_sigma);

  const Jet& G(int i);
  const Jet& N(int i, int j);
  const Jet& berwald(int i, int j, int k);
  const Jet& chern(int i, int j, int k);
  const Jet& coefficients(Connection c, int i, int j, int k) {
    return c == Connection::chern ? chern(i, j, k) : berwald(i, j, k);
  }
  /// B^i_jkl = d G^i_jk / dy^l.
  const Jet& berwald_curvature(int i, int j, int k, int l);

  /// delta_k t = dt/dx^k - N^m_k dt/dy^m, as a jet one order below t.
  Jet delta(const Jet& t, int k);
  /// Value of delta_k t at the base point (needs t of order >= 1).
  double delta_value(const Jet& t, int k);

  const Jet& S_big(SRoute route = SRoute::distortion);
  const Jet& E(int j, int k);
  const Jet& e_scalar();
  const Jet& L(int j, int k, int l);
  const Jet& J(int k);
  const Jet& R(int i, int k);
  const Jet& ricci();

  /// Raw hh-curvature d_l L^i_jk - d_k L^i_jl + L^m_jk L^i_ml - L^m_jl L^i_mk
  /// of the connection with coefficients L, flattened as ((i*n + j)*n + k)*n + l.
  const std::vector<double>& hh_curvature(Connection c);

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
  std::size_t idx(int i, int j, int k) const { return idx(i, j) * n_ + k; }
  std::size_t idx(int i, int j, int k, int l) const { return idx(i, j, k) * n_ + l; }

 private:
  void require(int min_order, const char* what) const;
  void build_fundamentals();
  void build_volume();
  void build_spray();
  void build_chern();
  void build_berwald_curvature();
  void build_E();
  void build_landsberg();
  void build_riemann();

  const MetricSpec& spec_;
  VolumeDensity volume_;
  int n_;
  int order_;
  Vec x_, y_;
  std::shared_ptr<const JetSpace> space_;
  std::vector<Jet> xs_, ys_;

  std::optional<Jet> F_, F2_, log_det_g_, log_sigma_, tau_, e_, ricci_;
  std::optional<Jet> S_[2];
  std::vector<Jet> g_, g_inv_, y_lower_, G_, N_, berwald_, chern_, B_, E_, L_, J_, R_;
  double condition_ = 0.0;
  std::vector<double> hh_[2];
};

}  // namespace finsler
