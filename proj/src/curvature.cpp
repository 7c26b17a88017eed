#include "wpe/curvature.hpp"

#include <cmath>

#include "wpe/oracle.hpp"

namespace wpe {

namespace {

void require_interior(const WarpedModel& model, double t, const Jet& psi) {
  if (!model.w.domain().contains(t) || (model.n() >= 2 && !model.psi.domain().contains(t)))
    throw Error(Errc::DomainError, "t outside model domain");
  if (model.n() >= 2 && psi.v <= 0.0)
    throw Error(Errc::DomainError, "psi(t) <= 0");
}

}  // namespace

CurvatureFrame warped_curvature(const WarpedModel& model, double t) {
  const int n = model.n();
  CurvatureFrame f;
  f.n = n;
  f.t = t;
  const Jet w = model.w(t);
  f.w = w.v;
  f.dw = w.d1;
  f.hessw_tt = w.d2;
  f.mu1 = f.hessw_tt;
  if (n == 1) {
    f.has_R = false;
    return f;
  }
  const Jet psi = model.psi(t);
  require_interior(model, t, psi);
  const double r = psi.d2 / psi.v;
  f.ric_tt = -(n - 1) * r;
  f.ric_LL = (model.kappa_L - (n - 2) * sqr(psi.d1)) / sqr(psi.v) - r;
  f.scal = f.ric_tt + (n - 1) * f.ric_LL;
  f.hessw_LL = w.d1 * psi.d1 / psi.v;
  f.mu2 = f.hessw_LL;
  f.K_rad = -r;
  if (n == 2) {
    f.has_R = true;
    f.K_link = 0.0;
  } else if (model.space_form_link()) {
    f.has_R = true;
    f.K_link = (model.link_sec() - sqr(psi.d1)) / sqr(psi.v);
  }
  return f;
}

CurvatureRates warped_curvature_rates(const WarpedModel& model, double t) {
  const int n = model.n();
  CurvatureRates r;
  if (n == 1) return r;
  const Jet psi = model.psi(t);
  require_interior(model, t, psi);
  if (!psi.has_d3())
    throw Error(Errc::DomainError, "psi profile lacks third derivatives");
  const double dq = (psi.d3 * psi.v - psi.d2 * psi.d1) / sqr(psi.v);  // (psi''/psi)'
  r.dric_tt = -(n - 1) * dq;
  r.dric_LL = -2.0 * (n - 2) * psi.d1 * psi.d2 / sqr(psi.v) -
              2.0 * (model.kappa_L - (n - 2) * sqr(psi.d1)) * psi.d1 / (sqr(psi.v) * psi.v) -
              dq;
  r.dscal = r.dric_tt + (n - 1) * r.dric_LL;
  r.dK_rad = -dq;
  if (n >= 3 && model.space_form_link()) {
    const double khat = model.link_sec();
    r.dK_link = -2.0 * psi.d1 * psi.d2 / sqr(psi.v) -
                2.0 * (khat - sqr(psi.d1)) * psi.d1 / (sqr(psi.v) * psi.v);
  }
  return r;
}

double weighted_laplacian(double a, const Jet& u, const WarpedModel& model, double t) {
  const Jet w = model.w(t);
  if (w.v <= 0.0) throw Error(Errc::BoundaryEvaluation, "w(t) = 0");
  double lap = u.d2;
  if (model.n() >= 2) {
    const Jet psi = model.psi(t);
    require_interior(model, t, psi);
    lap += (model.n() - 1) * (psi.d1 / psi.v) * u.d1;
  }
  lap += a * (w.d1 / w.v) * u.d1;
  return lap;
}

double cohomog1_divergence(double a, double da, double b, const WarpedModel& model,
                           double t) {
  const int n = model.n();
  if (n == 1) return da;
  const Jet psi = model.psi(t);
  require_interior(model, t, psi);
  return da + (n - 1) * (psi.d1 / psi.v) * (a - b);
}

Div4 cohomog1_divergence4(double A, double dA, double B, const WarpedModel& model,
                          double t) {
  const int n = model.n();
  if (n < 2) throw Error(Errc::DimensionTooLow, "divergence4 needs n >= 2");
  if (!model.space_form_link())
    throw Error(Errc::UnsupportedLink, "divergence4 needs a space-form link");
  const Jet psi = model.psi(t);
  require_interior(model, t, psi);
  Div4 d;
  d.radial = dA + (n - 2) * (psi.d1 / psi.v) * (A - B);
  d.link = 0.0;
  return d;
}

double TotalSpaceRicci::max_einstein_residual(double lambda) const {
  double r = std::abs(ric_tt - lambda);
  if (n >= 2) r = std::max(r, std::abs(ric_LL - lambda));
  return std::max(r, std::abs(ric_FF - lambda));
}

TotalSpaceRicci einstein_total_space(const WarpedModel& model, double t) {
  const ModelSpec& spec = model.spec;
  if (!spec.m_is_integer() || spec.m < 1.0)
    throw Error(Errc::NonIntegerM, "total space needs integer m >= 1");
  if (!spec.mu) throw Error(Errc::DomainError, "total space needs mu");
  const double mu = *spec.mu;
  if (spec.kappa_F && std::abs(*spec.kappa_F - mu) > 1e-9 * (1.0 + std::abs(mu)))
    throw Error(Errc::FiberMismatch, "fiber Einstein constant must equal mu");
  const double m = spec.m;
  const int n = spec.n;
  const Jet w = model.w(t);
  if (w.v <= 0.0) throw Error(Errc::BoundaryEvaluation, "w(t) = 0");

  TotalSpaceRicci out;
  out.n = n;
  if (n == 1) {
    out.ric_tt = -m * w.d2 / w.v;
    out.ric_FF = -w.d2 / w.v + (mu - (m - 1) * sqr(w.d1)) / sqr(w.v);
    return out;
  }
  const Jet psi = model.psi(t);
  require_interior(model, t, psi);
  out.ric_tt = -(n - 1) * psi.d2 / psi.v - m * w.d2 / w.v;
  out.ric_LL = -psi.d2 / psi.v + (model.kappa_L - (n - 2) * sqr(psi.d1)) / sqr(psi.v) -
               m * (psi.d1 / psi.v) * (w.d1 / w.v);
  out.ric_FF = -w.d2 / w.v + (mu - (m - 1) * sqr(w.d1)) / sqr(w.v) -
               (n - 1) * (w.d1 / w.v) * (psi.d1 / psi.v);
  return out;
}

FrameScalars frame_scalars(const WarpedModel& model, double t) {
  const ModelSpec& spec = model.spec;
  if (std::abs(spec.m - 1.0) < 1e-12)
    throw Error(Errc::MEqualsOne, "rho/P/Q are disabled at m = 1");
  FrameScalars s;
  s.f = warped_curvature(model, t);
  s.w = model.w(t);
  s.psi = model.n() >= 2 ? model.psi(t) : Jet{1.0, 0.0, 0.0, 0.0};
  const CurvatureRates r = warped_curvature_rates(model, t);
  const int n = spec.n;
  const double m = spec.m, lambda = spec.lambda;

  s.rho = ((n - 1) * lambda - s.f.scal) / (m - 1.0);
  s.drho = -r.dscal / (m - 1.0);
  s.p_rad = s.f.ric_tt - s.rho;
  s.p_link = s.f.ric_LL - s.rho;
  s.trP = s.p_rad + (n - 1) * s.p_link;
  s.dp_rad = r.dric_tt - s.drho;
  s.dp_link = r.dric_LL - s.drho;

  if (s.f.has_R && n >= 2) {
    s.Q_rad = s.f.K_rad + (s.f.ric_tt + s.f.ric_LL) / m - (lambda + s.rho) / m;
    s.dQ_rad = r.dK_rad + (r.dric_tt + r.dric_LL) / m - s.drho / m;
    if (n >= 3) {
      s.Q_link = s.f.K_link + 2.0 * s.f.ric_LL / m - (lambda + s.rho) / m;
      s.dQ_link = r.dK_link + 2.0 * r.dric_LL / m - s.drho / m;
    }
  }
  return s;
}

SymTensor2 ric_tensor(const CurvatureFrame& f) {
  SymTensor2 t(f.n);
  t.set(0, 0, f.ric_tt);
  for (int i = 1; i < f.n; ++i) t.set(i, i, f.ric_LL);
  return t;
}

SymTensor2 hessw_tensor(const CurvatureFrame& f) {
  SymTensor2 t(f.n);
  t.set(0, 0, f.hessw_tt);
  for (int i = 1; i < f.n; ++i) t.set(i, i, f.hessw_LL);
  return t;
}

CurvTensor4 riemann_tensor(const CurvatureFrame& f) {
  const int n = f.n;
  if (n < 2 || !f.has_R)
    throw Error(Errc::UnsupportedLink, "full curvature needs a space-form link, n >= 2");
  SymTensor2 uu(n), h(n);
  uu.set(0, 0, 1.0);
  for (int i = 1; i < n; ++i) h.set(i, i, 1.0);
  CurvTensor4 R = 2.0 * f.K_rad * kulkarni_nomizu(uu, h);
  if (n >= 3) R += f.K_link * kulkarni_nomizu(h, h);
  return R;
}

DoublyFrame doubly_curvature(const DoublyWarpedModel& model, double t) {
  const Jet phi = model.phi(t), psi = model.psi(t), w = model.w(t);
  if (phi.v <= 0.0 || psi.v <= 0.0)
    throw Error(Errc::DomainError, "phi, psi must be positive");
  DoublyFrame f;
  f.w = w.v;
  const double qphi = phi.d2 / phi.v, qpsi = psi.d2 / psi.v;
  const double cross = phi.d1 * psi.d1 / (phi.v * psi.v);
  f.ric_rr = -qphi - qpsi;
  f.ric_11 = -qphi - cross;
  f.ric_22 = -qpsi - cross;
  f.scal = f.ric_rr + f.ric_11 + f.ric_22;
  f.hessw_rr = w.d2;
  f.hessw_11 = w.d1 * phi.d1 / phi.v;
  f.hessw_22 = w.d1 * psi.d1 / psi.v;
  f.s_r = f.ric_rr - f.scal / 4.0;
  f.s_1 = f.ric_11 - f.scal / 4.0;
  f.s_2 = f.ric_22 - f.scal / 4.0;

  // rates of the Schouten eigenvalues (third derivatives from the ODE)
  if (!phi.has_d3() || !psi.has_d3())
    throw Error(Errc::DomainError, "doubly warped profiles lack third derivatives");
  const double dqphi = (phi.d3 * phi.v - phi.d2 * phi.d1) / sqr(phi.v);
  const double dqpsi = (psi.d3 * psi.v - psi.d2 * psi.d1) / sqr(psi.v);
  const double dcross = (phi.d2 * psi.d1 + phi.d1 * psi.d2) / (phi.v * psi.v) -
                        cross * (phi.d1 / phi.v + psi.d1 / psi.v);
  const double dric_rr = -dqphi - dqpsi;
  const double dric_11 = -dqphi - dcross;
  const double dric_22 = -dqpsi - dcross;
  const double dscal = dric_rr + dric_11 + dric_22;
  const double ds_r = dric_rr - dscal / 4.0;
  const double ds_1 = dric_11 - dscal / 4.0;
  const double ds_2 = dric_22 - dscal / 4.0;

  f.cotton_r11 = ds_1 + (phi.d1 / phi.v) * (f.s_1 - f.s_r);
  f.cotton_r22 = ds_2 + (psi.d1 / psi.v) * (f.s_2 - f.s_r);
  return f;
}

double conformal_check(const WarpedModel& model, double t, double h) {
  const ModelSpec& spec = model.spec;
  if (std::abs(spec.m - 1.0) < 1e-12) throw Error(Errc::MEqualsOne, "conformal check");
  if (!model.space_form_link())
    throw Error(Errc::UnsupportedLink, "conformal check needs the full curvature tensor");
  const int n = spec.n;
  if (n < 2) throw Error(Errc::DimensionTooLow, "conformal check needs n >= 2");
  const Jet w = model.w(t);
  if (w.v <= 0.0) throw Error(Errc::BoundaryEvaluation, "w(t) = 0");

  const FrameScalars s = frame_scalars(model, t);
  CurvTensor4 Q = riemann_tensor(s.f);
  Q += (2.0 / spec.m) * kulkarni_nomizu(ric_tensor(s.f), SymTensor2::identity(n));
  Q -= ((spec.lambda + s.rho) / spec.m) *
       kulkarni_nomizu(SymTensor2::identity(n), SymTensor2::identity(n));

  // closed-form side in the gtilde-orthonormal frame:
  //   w^4 R_gtilde(frame of g) = w^2 Q - (mu/(m-1)) g . g
  CurvTensor4 closed = sqr(w.v) * Q;
  closed -= (model.mu() / (spec.m - 1.0)) *
            kulkarni_nomizu(SymTensor2::identity(n), SymTensor2::identity(n));

  Chart chart = conformal_chart(model);
  OracleCurvature oc = fd_curvature_oracle(chart.metric, chart.point(t), h);

  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          res = std::max(res, std::abs(oc.R(i, j, k, l) - closed(i, j, k, l)));
  return res;
}

}  // namespace wpe
