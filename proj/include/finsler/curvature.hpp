#pragma once

#include <optional>

#include "finsler/conventions.hpp"
#include "finsler/fundamentals.hpp"
#include "finsler/geometry.hpp"

namespace finsler {

/// S-curvature (the degree-1 quantity; divide by F for S on SM).
double s_curvature(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p,
                   SRoute route = SRoute::distortion);

struct ECurvature {
  Vec E;           // E_jk = 1/2 B^m_jkm
  double e = 0.0;  // 2F g^{jk} E_jk
};

ECurvature e_and_E(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p);
ECurvature e_from(LocalGeometry& geo);

struct Landsberg {
  Vec L;  // L_jkl = -1/2 y_m B^m_jkl
  Vec J;  // g^{jl} L_jlk
};

Landsberg landsberg(const MetricSpec& spec, const PointDir& p);
Landsberg landsberg_from(LocalGeometry& geo);

struct FlagCurvature {
  int n = 0;
  double F = 0.0;
  Vec y;
  Vec g;
  Vec Rspray;  // R^i_k
  Vec R_lower; // g_ij R^j_k
  double ricci = 0.0;
  std::optional<double> K;  // for the supplied flag

  /// K(y, V) = V R V / (F^2 h(V, V)). Throws for V parallel to y.
  double flag(const Vec& V) const;
};

FlagCurvature riemann_flag(const MetricSpec& spec, const PointDir& p,
                           const std::optional<Vec>& V = std::nullopt);
FlagCurvature flag_from(LocalGeometry& geo);

struct HHCurvature {
  Vec R_chern;      // normalized: curvature_sign * raw, (i, j, k, l)
  Vec R_berwald;
  Vec trR;          // R^m_mkl
  Vec trR_berwald;
  Vec sigma_bar;    // 2 (trR_berwald - trR)
};

HHCurvature chern_berwald_hh(const MetricSpec& spec, const PointDir& p, const Conventions& conv = {});
HHCurvature hh_from(LocalGeometry& geo, const Conventions& conv = {});

/// Frame scalars entering the first-order identities, one entry per frame
/// index alpha in [0, n-1).
struct FrameTerms {
  int n = 0;
  double S = 0.0;
  Vec S_comma;             // S_{,alpha}
  Vec tau_bar;             // tau_{|alpha}
  Vec J;                   // J_alpha
  Vec S_bar;               // S_{|alpha}
  Vec S_comma_bar_n;       // S_{,alpha|n} with Chern symbols
  Vec S_comma_bar_n_berwald;
  Vec J_bar_n;             // J_{alpha|n}
  Vec trR_n;               // (trR)_{alpha n}
  std::optional<Vec> K_comma;

  /// S_{,a} + tau_{|a} - J_a.
  double basic_equ4(int a) const { return S_comma[a] + tau_bar[a] - J[a]; }
  /// S_{|a} + S_{,a|n} - J_{a|n} - trR_{an}.
  double jacobi1(int a) const { return S_bar[a] + S_comma_bar_n[a] - J_bar_n[a] - trR_n[a]; }
  /// The same relation with the opposite sign on S_{,a|n}.
  double jacobi1_flipped(int a) const {
    return S_bar[a] - S_comma_bar_n[a] - J_bar_n[a] - trR_n[a];
  }
  /// trR_{an} + J_{a|n} + (n+1)/3 K_{,a}; needs K_comma.
  double jacobi2(int a) const;
};

/// p is first normalized to F = 1. K_{,alpha} is filled only when
/// `scalar_flag` is set (the caller certifies scalar flag curvature).
FrameTerms frame_identity_terms(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p,
                                const Conventions& conv = {}, bool scalar_flag = false);
/// geo must sit at an F-unit direction and have order >= 6.
FrameTerms frame_terms_from(LocalGeometry& geo, const Frame& frame, const Conventions& conv,
                            bool scalar_flag);

struct CurvatureBundle {
  int n = 0;
  double F = 0.0;
  double S_big = 0.0;
  double S_big_divergence = 0.0;
  double S = 0.0;
  ECurvature E;
  Landsberg L;
  FlagCurvature flag;
  HHCurvature hh;
};

CurvatureBundle curvature_bundle(const MetricSpec& spec, const VolumeDensity& vol, const PointDir& p,
                                 const Conventions& conv = {});

}  // namespace finsler
