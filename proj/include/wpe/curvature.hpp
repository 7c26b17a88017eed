#pragma once

#include "wpe/model.hpp"
#include "wpe/tensor.hpp"

namespace wpe {

// Pointwise curvature of g = dt^2 + psi^2(t) g_L in the adapted orthonormal
// frame {e_0 = d/dt, e_1, ..., e_{n-1}}. For space-form links the full
// curvature tensor has exactly two sectional components:
//   K_rad  = -psi''/psi               (radial planes)
//   K_link = (khat - psi'^2)/psi^2    (link planes, n >= 3)
// where khat = kappa_L/(n-2) is the unit link curvature.
struct CurvatureFrame {
  int n = 1;
  double t = 0.0;
  double ric_tt = 0.0, ric_LL = 0.0, scal = 0.0;
  double hessw_tt = 0.0, hessw_LL = 0.0;
  double K_rad = 0.0, K_link = 0.0;
  bool has_R = false;  // full tensor reconstructible (space-form link or n <= 2)
  double mu1 = 0.0, mu2 = 0.0;  // Hessian eigenvalues, mu1 along d/dt
  double w = 0.0, dw = 0.0;
};

CurvatureFrame warped_curvature(const WarpedModel& model, double t);

// t-derivatives of the frame quantities; needs profile third derivatives.
struct CurvatureRates {
  double dric_tt = 0.0, dric_LL = 0.0, dscal = 0.0;
  double dK_rad = 0.0, dK_link = 0.0;
};
CurvatureRates warped_curvature_rates(const WarpedModel& model, double t);

// L_a(u) = u'' + (n-1)(psi'/psi) u' + a (w'/w) u' for u = u(t).
double weighted_laplacian(double a, const Jet& u, const WarpedModel& model, double t);

// (div T)(d/dt) for T = a(t) dt^2 + b(t) psi^2 g_L (a, b frame components):
// a' + (n-1)(psi'/psi)(a - b). All other components vanish by symmetry.
double cohomog1_divergence(double a, double da, double b, const WarpedModel& model,
                           double t);

// Independent components of div T (contraction against the 4th slot) for a
// curvature-type tensor T = 2A(t) (dt^2 . h) + B(t) (h . h) with space-form
// link; h = g - dt^2. The radial family is
//   (div T)(e_0, e_k, e_k) = A' + (n-2)(psi'/psi)(A - B),
// the remaining families vanish identically.
struct Div4 {
  double radial = 0.0;
  double link = 0.0;
};
Div4 cohomog1_divergence4(double A, double dA, double B, const WarpedModel& model,
                          double t);

// Ricci blocks of the doubly warped total space g_E = g + w^2 g_F with a
// fiber F^m of Einstein constant mu.
struct TotalSpaceRicci {
  int n = 1;
  double ric_tt = 0.0, ric_LL = 0.0, ric_FF = 0.0;
  double max_einstein_residual(double lambda) const;
};
TotalSpaceRicci einstein_total_space(const WarpedModel& model, double t);

// Everything the identity checks need at one sample point (m > 1).
struct FrameScalars {
  CurvatureFrame f;
  Jet w, psi;
  double rho = 0.0, drho = 0.0;
  double p_rad = 0.0, p_link = 0.0, trP = 0.0;
  double dp_rad = 0.0, dp_link = 0.0;
  double Q_rad = 0.0, Q_link = 0.0;
  double dQ_rad = 0.0, dQ_link = 0.0;
};
FrameScalars frame_scalars(const WarpedModel& model, double t);

// Frame tensors (the metric is the identity in the adapted frame).
SymTensor2 ric_tensor(const CurvatureFrame& f);
SymTensor2 hessw_tensor(const CurvatureFrame& f);
CurvTensor4 riemann_tensor(const CurvatureFrame& f);  // requires has_R, n >= 2

// Doubly warped 3-manifold g = dr^2 + phi^2 dth1^2 + psi^2 dth2^2: frame
// curvature, Schouten eigenvalues and the two independent Cotton components
// (Codazzi deficiency of the Schouten tensor; zero iff conformally flat).
struct DoublyFrame {
  double ric_rr = 0.0, ric_11 = 0.0, ric_22 = 0.0, scal = 0.0;
  double hessw_rr = 0.0, hessw_11 = 0.0, hessw_22 = 0.0;
  double s_r = 0.0, s_1 = 0.0, s_2 = 0.0;
  double cotton_r11 = 0.0, cotton_r22 = 0.0;
  double w = 0.0;
};
DoublyFrame doubly_curvature(const DoublyWarpedModel& model, double t);

// Residual of the conformal identity for gtilde = w^{-2} g in the convention
// fixed by this library (unit sphere has R = g . g):
//   R_gtilde = w^{-2} Q - (mu/(m-1)) gtilde . gtilde.
// R_gtilde comes from the finite-difference oracle on the conformal chart.
double conformal_check(const WarpedModel& model, double t, double h = 1e-4);

}  // namespace wpe
