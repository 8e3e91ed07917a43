#include "finsler/geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace finsler {

LocalGeometry::LocalGeometry(const MetricSpec& spec, std::span<const double> x,
                             std::span<const double> y, const VolumeDensity& volume, int order)
    : spec_(spec),
      volume_(volume),
      n_(spec.dimension),
      order_(order),
      x_(x.begin(), x.end()),
      y_(y.begin(), y.end()) {
  if (static_cast<int>(x_.size()) != n_ || static_cast<int>(y_.size()) != n_) {
    throw std::invalid_argument("LocalGeometry: point has wrong dimension");
  }
  space_ = jet_space(JetSpec{2 * n_, order_});
  for (int i = 0; i < n_; ++i) xs_.push_back(Jet::variable(space_, i, x_[i]));
  for (int i = 0; i < n_; ++i) ys_.push_back(Jet::variable(space_, n_ + i, y_[i]));
}

void LocalGeometry::require(int min_order, const char* what) const {
  if (order_ < min_order) {
    throw JetError(std::string(what) + " needs jet order >= " + std::to_string(min_order) +
                   ", have " + std::to_string(order_));
  }
}

const Jet& LocalGeometry::F() {
  if (!F_) F_ = eval_F(spec_, x_, y_, JetSpec{2 * n_, order_});
  return *F_;
}

const Jet& LocalGeometry::F2() {
  if (!F2_) F2_ = square(F());
  return *F2_;
}

void LocalGeometry::build_fundamentals() {
  if (!g_.empty()) return;
  require(2, "fundamental tensor");
  const Jet& f2 = F2();
  std::vector<Jet> dy;
  for (int i = 0; i < n_; ++i) dy.push_back(derivative(f2, yvar(i)));
  JetMatrix g(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      g(i, j) = 0.5 * derivative(dy[i], yvar(j));
      g(j, i) = g(i, j);
    }
  }
  Eigen::MatrixXd gv(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) gv(i, j) = g(i, j).value();
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gv).eigenvalues();
  if (!(ev(0) > 0)) throw DomainError("fundamental tensor is not positive definite");
  condition_ = ev(n_ - 1) / ev(0);
  if (condition_ > max_condition) {
    throw IllConditioned("fundamental tensor condition number " + std::to_string(condition_) +
                         " exceeds 1e8");
  }
  const JetMatrix inv = inverse(g);
  log_det_g_ = log(determinant(g));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      g_.push_back(g(i, j));
      g_inv_.push_back(inv(i, j));
    }
  }
  for (int i = 0; i < n_; ++i) {
    Jet s = g(i, 0) * ys_[0];
    for (int j = 1; j < n_; ++j) s += g(i, j) * ys_[j];
    y_lower_.push_back(std::move(s));
  }
}

const Jet& LocalGeometry::g(int i, int j) {
  build_fundamentals();
  return g_[idx(i, j)];
}

const Jet& LocalGeometry::g_inv(int i, int j) {
  build_fundamentals();
  return g_inv_[idx(i, j)];
}

const Jet& LocalGeometry::log_det_g() {
  build_fundamentals();
  return *log_det_g_;
}

double LocalGeometry::condition_number() {
  build_fundamentals();
  return condition_;
}

const Jet& LocalGeometry::y_lower(int i) {
  build_fundamentals();
  return y_lower_[i];
}

double LocalGeometry::cartan(int i, int j, int k) {
  require(3, "Cartan tensor");
  std::vector<int> m(2 * n_, 0);
  ++m[yvar(i)];
  ++m[yvar(j)];
  ++m[yvar(k)];
  return 0.25 * F2().partial(m);
}

void LocalGeometry::build_volume() {
  if (tau_) return;
  if (!log_sigma_) log_sigma_ = log(density(volume_, spec_, x_, JetSpec{2 * n_, order_}));
  tau_ = 0.5 * log_det_g() - *log_sigma_;
}

void LocalGeometry::set_log_sigma(Jet log_sigma) {
  if (log_sigma.space_ptr() != space_) throw JetError("set_log_sigma: jet from another space");
  log_sigma_ = std::move(log_sigma);
  tau_.reset();
  S_[0].reset();
  S_[1].reset();
}

const Jet& LocalGeometry::log_sigma() {
  build_volume();
  return *log_sigma_;
}

const Jet& LocalGeometry::tau() {
  build_volume();
  return *tau_;
}

void LocalGeometry::build_spray() {
  if (!G_.empty()) return;
  require(2, "spray");
  build_fundamentals();
  const Jet& f2 = F2();
  std::vector<Jet> rhs;
  for (int l = 0; l < n_; ++l) {
    const Jet dyl = derivative(f2, yvar(l));
    Jet s = ys_[0] * derivative(dyl, xvar(0));
    for (int k = 1; k < n_; ++k) s += ys_[k] * derivative(dyl, xvar(k));
    rhs.push_back(s - derivative(f2, xvar(l)));
  }
  for (int i = 0; i < n_; ++i) {
    Jet s = g_inv(i, 0) * rhs[0];
    for (int l = 1; l < n_; ++l) s += g_inv(i, l) * rhs[l];
    G_.push_back(0.25 * s);
  }
  if (order_ < 3) return;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) N_.push_back(derivative(G_[i], yvar(j)));
  }
  if (order_ >= 4) {
    berwald_.resize(static_cast<std::size_t>(n_) * n_ * n_);
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        for (int k = j; k < n_; ++k) {
          berwald_[idx(i, j, k)] = derivative(N_[idx(i, j)], yvar(k));
          berwald_[idx(i, k, j)] = berwald_[idx(i, j, k)];
        }
      }
    }
  }
}

const Jet& LocalGeometry::G(int i) {
  build_spray();
  return G_[i];
}

const Jet& LocalGeometry::N(int i, int j) {
  require(3, "nonlinear connection");
  build_spray();
  return N_[idx(i, j)];
}

const Jet& LocalGeometry::berwald(int i, int j, int k) {
  require(4, "Berwald connection coefficients");
  build_spray();
  return berwald_[idx(i, j, k)];
}

Jet LocalGeometry::delta(const Jet& t, int k) {
  require(3, "horizontal derivative");
  build_spray();
  Jet out = derivative(t, xvar(k));
  for (int m = 0; m < n_; ++m) out -= N_[idx(m, k)] * derivative(t, yvar(m));
  return out;
}

double LocalGeometry::delta_value(const Jet& t, int k) {
  require(3, "horizontal derivative");
  build_spray();
  double out = t.gradient(xvar(k));
  for (int m = 0; m < n_; ++m) out -= N_[idx(m, k)].value() * t.gradient(yvar(m));
  return out;
}

void LocalGeometry::build_chern() {
  if (!chern_.empty()) return;
  require(4, "Chern connection coefficients");
  build_spray();
  // dg[(l, j, k)] = delta_k g_lj
  std::vector<Jet> dg(static_cast<std::size_t>(n_) * n_ * n_);
  for (int l = 0; l < n_; ++l) {
    for (int j = l; j < n_; ++j) {
      for (int k = 0; k < n_; ++k) {
        dg[idx(l, j, k)] = delta(g_[idx(l, j)], k);
        dg[idx(j, l, k)] = dg[idx(l, j, k)];
      }
    }
  }
  std::vector<Jet> lower(dg.size());
  for (int l = 0; l < n_; ++l) {
    for (int j = 0; j < n_; ++j) {
      for (int k = j; k < n_; ++k) {
        lower[idx(l, j, k)] = 0.5 * (dg[idx(l, j, k)] + dg[idx(l, k, j)] - dg[idx(j, k, l)]);
      }
    }
  }
  chern_.resize(dg.size());
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int k = j; k < n_; ++k) {
        Jet s = g_inv_[idx(i, 0)] * lower[idx(0, j, k)];
        for (int l = 1; l < n_; ++l) s += g_inv_[idx(i, l)] * lower[idx(l, j, k)];
        chern_[idx(i, j, k)] = s;
        chern_[idx(i, k, j)] = std::move(s);
      }
    }
  }
}

const Jet& LocalGeometry::chern(int i, int j, int k) {
  build_chern();
  return chern_[idx(i, j, k)];
}

void LocalGeometry::build_berwald_curvature() {
  if (!B_.empty()) return;
  require(5, "Berwald curvature");
  build_spray();
  B_.resize(static_cast<std::size_t>(n_) * n_ * n_ * n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int k = j; k < n_; ++k) {
        for (int l = k; l < n_; ++l) {
          const Jet b = derivative(berwald_[idx(i, j, k)], yvar(l));
          const int p[3] = {j, k, l};
          // all permutations of (j, k, l)
          const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
          for (const auto& q : perms) B_[idx(i, p[q[0]], p[q[1]], p[q[2]])] = b;
        }
      }
    }
  }
}

const Jet& LocalGeometry::berwald_curvature(int i, int j, int k, int l) {
  build_berwald_curvature();
  return B_[idx(i, j, k, l)];
}

const Jet& LocalGeometry::S_big(SRoute route) {
  auto& slot = S_[static_cast<int>(route)];
  if (slot) return *slot;
  require(3, "S-curvature");
  build_spray();
  if (route == SRoute::distortion) {
    const Jet& t = tau();
    Jet s = ys_[0] * derivative(t, xvar(0)) - 2.0 * G_[0] * derivative(t, yvar(0));
    for (int i = 1; i < n_; ++i) {
      s += ys_[i] * derivative(t, xvar(i)) - 2.0 * G_[i] * derivative(t, yvar(i));
    }
    slot = std::move(s);
  } else {
    const Jet& ls = log_sigma();
    Jet s = derivative(G_[0], yvar(0)) - ys_[0] * derivative(ls, xvar(0));
    for (int m = 1; m < n_; ++m) s += derivative(G_[m], yvar(m)) - ys_[m] * derivative(ls, xvar(m));
    slot = std::move(s);
  }
  return *slot;
}

void LocalGeometry::build_E() {
  if (!E_.empty()) return;
  require(5, "E-curvature");
  build_spray();
  E_.resize(static_cast<std::size_t>(n_) * n_);
  for (int j = 0; j < n_; ++j) {
    for (int k = j; k < n_; ++k) {
      Jet s = derivative(berwald_[idx(0, j, k)], yvar(0));
      for (int m = 1; m < n_; ++m) s += derivative(berwald_[idx(m, j, k)], yvar(m));
      E_[idx(j, k)] = 0.5 * s;
      E_[idx(k, j)] = E_[idx(j, k)];
    }
  }
  Jet tr = g_inv_[0] * E_[0];
  for (std::size_t a = 1; a < E_.size(); ++a) tr += g_inv_[a] * E_[a];
  e_ = 2.0 * F() * tr;
}

const Jet& LocalGeometry::E(int j, int k) {
  build_E();
  return E_[idx(j, k)];
}

const Jet& LocalGeometry::e_scalar() {
  build_E();
  return *e_;
}

void LocalGeometry::build_landsberg() {
  if (!L_.empty()) return;
  build_berwald_curvature();
  L_.resize(static_cast<std::size_t>(n_) * n_ * n_);
  for (int j = 0; j < n_; ++j) {
    for (int k = 0; k < n_; ++k) {
      for (int l = 0; l < n_; ++l) {
        Jet s = y_lower_[0] * B_[idx(0, j, k, l)];
        for (int m = 1; m < n_; ++m) s += y_lower_[m] * B_[idx(m, j, k, l)];
        L_[idx(j, k, l)] = -0.5 * s;
      }
    }
  }
  for (int k = 0; k < n_; ++k) {
    Jet s = g_inv_[0] * L_[idx(0, 0, k)];
    for (int i = 0; i < n_; ++i) {
      for (int l = 0; l < n_; ++l) {
        if (i == 0 && l == 0) continue;
        s += g_inv_[idx(i, l)] * L_[idx(i, l, k)];
      }
    }
    J_.push_back(std::move(s));
  }
}

const Jet& LocalGeometry::L(int j, int k, int l) {
  build_landsberg();
  return L_[idx(j, k, l)];
}

const Jet& LocalGeometry::J(int k) {
  build_landsberg();
  return J_[k];
}

void LocalGeometry::build_riemann() {
  if (!R_.empty()) return;
  require(4, "spray curvature");
  build_spray();
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      Jet s = 2.0 * derivative(G_[i], xvar(k));
      const Jet& nik = N_[idx(i, k)];
      for (int j = 0; j < n_; ++j) {
        s -= ys_[j] * derivative(nik, xvar(j));
        s += 2.0 * G_[j] * berwald_[idx(i, j, k)];
        s -= N_[idx(i, j)] * N_[idx(j, k)];
      }
      R_.push_back(std::move(s));
    }
  }
  Jet tr = R_[0];
  for (int m = 1; m < n_; ++m) tr += R_[idx(m, m)];
  ricci_ = std::move(tr);
}

const Jet& LocalGeometry::R(int i, int k) {
  build_riemann();
  return R_[idx(i, k)];
}

const Jet& LocalGeometry::ricci() {
  build_riemann();
  return *ricci_;
}

const std::vector<double>& LocalGeometry::hh_curvature(Connection c) {
  auto& out = hh_[static_cast<int>(c)];
  if (!out.empty()) return out;
  require(c == Connection::chern ? 4 : 5, "hh-curvature");
  const std::size_t n3 = static_cast<std::size_t>(n_) * n_ * n_;
  std::vector<double> lam(n3);
  // dlam[(i, j, k) * n + l] = delta_l of coefficient (i, j, k)
  std::vector<double> dlam(n3 * n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int k = 0; k < n_; ++k) {
        const Jet& a = coefficients(c, i, j, k);
        lam[idx(i, j, k)] = a.value();
        for (int l = 0; l < n_; ++l) dlam[idx(i, j, k, l)] = delta_value(a, l);
      }
    }
  }
  out.assign(n3 * n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      for (int k = 0; k < n_; ++k) {
        for (int l = 0; l < n_; ++l) {
          double v = dlam[idx(i, j, k, l)] - dlam[idx(i, j, l, k)];
          for (int m = 0; m < n_; ++m) {
            v += lam[idx(m, j, k)] * lam[idx(i, m, l)] - lam[idx(m, j, l)] * lam[idx(i, m, k)];
          }
          out[idx(i, j, k, l)] = v;
        }
      }
    }
  }
  return out;
}

}  // namespace finsler
