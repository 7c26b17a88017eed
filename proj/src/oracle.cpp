#include "wpe/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "wpe/curvature.hpp"

namespace wpe {

namespace {

using Vec = std::vector<double>;

struct MetricDerivs {
  int d = 0;
  Vec g;    // [i*d + j]
  Vec gi;   // inverse
  Vec dg;   // [l*d*d + i*d + j] = del_l g_ij
  Vec d2g;  // [((l*d + m)*d + i)*d + j] = del_l del_m g_ij
};

void eval_metric(const ChartMetric& c, const Vec& x, Vec& g) {
  g.assign(static_cast<size_t>(c.dim) * c.dim, 0.0);
  c.metric(x.data(), g.data());
}

void check_regular(const Vec& g, int d) {
  Eigen::Map<const Eigen::MatrixXd> G(g.data(), d, d);
  if (std::abs(G.determinant()) < 1e-12)
    throw Error(Errc::SingularChart, "metric determinant below 1e-12 at a stencil point");
}

MetricDerivs metric_derivs(const ChartMetric& c, const Vec& x, double h) {
  const int d = c.dim;
  MetricDerivs md;
  md.d = d;
  eval_metric(c, x, md.g);
  check_regular(md.g, d);

  Eigen::Map<const Eigen::MatrixXd> G(md.g.data(), d, d);
  Eigen::MatrixXd Gi = G.inverse();
  md.gi.assign(Gi.data(), Gi.data() + d * d);

  const size_t dd = static_cast<size_t>(d) * d;
  md.dg.assign(d * dd, 0.0);
  md.d2g.assign(dd * dd, 0.0);

  std::vector<Vec> gp(d), gm(d);
  Vec xt = x;
  for (int l = 0; l < d; ++l) {
    xt[l] = x[l] + h;
    eval_metric(c, xt, gp[l]);
    check_regular(gp[l], d);
    xt[l] = x[l] - h;
    eval_metric(c, xt, gm[l]);
    check_regular(gm[l], d);
    xt[l] = x[l];
    for (size_t e = 0; e < dd; ++e) md.dg[l * dd + e] = (gp[l][e] - gm[l][e]) / (2 * h);
    for (size_t e = 0; e < dd; ++e)
      md.d2g[(static_cast<size_t>(l) * d + l) * dd + e] =
          (gp[l][e] - 2 * md.g[e] + gm[l][e]) / (h * h);
  }
  Vec gpp, gpm, gmp, gmm;
  for (int l = 0; l < d; ++l)
    for (int m2 = l + 1; m2 < d; ++m2) {
      xt[l] = x[l] + h; xt[m2] = x[m2] + h; eval_metric(c, xt, gpp);
      xt[m2] = x[m2] - h; eval_metric(c, xt, gpm);
      xt[l] = x[l] - h; xt[m2] = x[m2] + h; eval_metric(c, xt, gmp);
      xt[m2] = x[m2] - h; eval_metric(c, xt, gmm);
      xt[l] = x[l]; xt[m2] = x[m2];
      for (size_t e = 0; e < dd; ++e) {
        const double v = (gpp[e] - gpm[e] - gmp[e] + gmm[e]) / (4 * h * h);
        md.d2g[(static_cast<size_t>(l) * d + m2) * dd + e] = v;
        md.d2g[(static_cast<size_t>(m2) * d + l) * dd + e] = v;
      }
    }
  return md;
}

// Christoffel symbols [k*d*d + i*d + j] and their coordinate derivatives.
Vec christoffel(const MetricDerivs& md) {
  const int d = md.d;
  const size_t dd = static_cast<size_t>(d) * d;
  Vec G(d * dd, 0.0);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l)
          s += md.gi[k * d + l] * (md.dg[i * dd + j * d + l] + md.dg[j * dd + i * d + l] -
                                   md.dg[l * dd + i * d + j]);
        G[k * dd + i * d + j] = 0.5 * s;
      }
  return G;
}

// del_m Gamma^k_ij, [((m*d + k)*d + i)*d + j]
Vec christoffel_derivs(const MetricDerivs& md) {
  const int d = md.d;
  const size_t dd = static_cast<size_t>(d) * d;
  // del_m g^{kl} = -g^{ka} (del_m g_ab) g^{bl}
  Vec dgi(d * dd, 0.0);
  for (int m2 = 0; m2 < d; ++m2)
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b)
            s -= md.gi[k * d + a] * md.dg[m2 * dd + a * d + b] * md.gi[b * d + l];
        dgi[m2 * dd + k * d + l] = s;
      }
  Vec dG(dd * dd, 0.0);
  for (int m2 = 0; m2 < d; ++m2)
    for (int k = 0; k < d; ++k)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          double s = 0.0;
          for (int l = 0; l < d; ++l) {
            s += dgi[m2 * dd + k * d + l] *
                 (md.dg[i * dd + j * d + l] + md.dg[j * dd + i * d + l] -
                  md.dg[l * dd + i * d + j]);
            s += md.gi[k * d + l] *
                 (md.d2g[(static_cast<size_t>(m2) * d + i) * dd + j * d + l] +
                  md.d2g[(static_cast<size_t>(m2) * d + j) * dd + i * d + l] -
                  md.d2g[(static_cast<size_t>(m2) * d + l) * dd + i * d + j]);
          }
          dG[(static_cast<size_t>(m2) * d + k) * dd + i * d + j] = 0.5 * s;
        }
  return dG;
}

struct CoordCurvature {
  int d = 0;
  Vec g, gi;
  Vec R;    // R_ijkl = g_lm R^m_ijk,  R(X,Y)Z = nab_X nab_Y Z - ...
  Vec ric;  // Ric_jk = R^i_ijk
  double scal = 0.0;
  Vec hessw;  // may be empty
};

CoordCurvature coord_curvature(const ChartMetric& c, const Vec& x, double h) {
  const int d = c.dim;
  const size_t dd = static_cast<size_t>(d) * d;
  MetricDerivs md = metric_derivs(c, x, h);
  Vec G = christoffel(md);
  Vec dG = christoffel_derivs(md);

  CoordCurvature out;
  out.d = d;
  out.g = md.g;
  out.gi = md.gi;

  Vec Rup(dd * dd, 0.0);  // R^l_ijk at [((l*d + i)*d + j)*d + k]
  for (int l = 0; l < d; ++l)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          double s = dG[(static_cast<size_t>(i) * d + l) * dd + j * d + k] -
                     dG[(static_cast<size_t>(j) * d + l) * dd + i * d + k];
          for (int a = 0; a < d; ++a)
            s += G[l * dd + i * d + a] * G[a * dd + j * d + k] -
                 G[l * dd + j * d + a] * G[a * dd + i * d + k];
          Rup[(static_cast<size_t>(l) * d + i) * dd + j * d + k] = s;
        }

  out.R.assign(dd * dd, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          double s = 0.0;
          for (int m2 = 0; m2 < d; ++m2)
            s += md.g[l * d + m2] * Rup[(static_cast<size_t>(m2) * d + i) * dd + j * d + k];
          out.R[(static_cast<size_t>(i) * d + j) * dd + k * d + l] = s;
        }

  out.ric.assign(dd, 0.0);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        s += Rup[(static_cast<size_t>(i) * d + i) * dd + j * d + k];
      out.ric[j * d + k] = s;
    }
  out.scal = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) out.scal += md.gi[j * d + k] * out.ric[j * d + k];

  if (c.w) {
    Vec dw(d, 0.0), d2w(dd, 0.0);
    Vec xt = x;
    const double w0 = c.w(x.data());
    std::vector<double> wp(d), wm(d);
    for (int l = 0; l < d; ++l) {
      xt[l] = x[l] + h; wp[l] = c.w(xt.data());
      xt[l] = x[l] - h; wm[l] = c.w(xt.data());
      xt[l] = x[l];
      dw[l] = (wp[l] - wm[l]) / (2 * h);
      d2w[l * d + l] = (wp[l] - 2 * w0 + wm[l]) / (h * h);
    }
    for (int l = 0; l < d; ++l)
      for (int m2 = l + 1; m2 < d; ++m2) {
        xt[l] = x[l] + h; xt[m2] = x[m2] + h; const double a = c.w(xt.data());
        xt[m2] = x[m2] - h; const double b = c.w(xt.data());
        xt[l] = x[l] - h; xt[m2] = x[m2] + h; const double e = c.w(xt.data());
        xt[m2] = x[m2] - h; const double f = c.w(xt.data());
        xt[l] = x[l]; xt[m2] = x[m2];
        const double v = (a - b - e + f) / (4 * h * h);
        d2w[l * d + m2] = v;
        d2w[m2 * d + l] = v;
      }
    out.hessw.assign(dd, 0.0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double s = d2w[i * d + j];
        for (int k = 0; k < d; ++k) s -= G[k * dd + i * d + j] * dw[k];
        out.hessw[i * d + j] = s;
      }
  }
  return out;
}

// orthonormal frame from the exact metric: columns of E solve E^T g E = I
Eigen::MatrixXd frame_from_metric(const Vec& g, int d) {
  Eigen::Map<const Eigen::MatrixXd> G(g.data(), d, d);
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  Eigen::MatrixXd L = llt.matrixL();
  return L.transpose().inverse();
}

SymTensor2 to_frame2(const Vec& T, const Eigen::MatrixXd& E, int d) {
  SymTensor2 out(d);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += E(i, a) * E(j, b) * T[i * d + j];
      out.set(a, b, s);
    }
  return out;
}

CurvTensor4 to_frame4(const Vec& T, const Eigen::MatrixXd& E, int d) {
  const size_t dd = static_cast<size_t>(d) * d;
  // transform slot by slot
  Vec cur = T, nxt(dd * dd, 0.0);
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    const size_t stride[4] = {dd * d, dd, static_cast<size_t>(d), 1};
    for (size_t base = 0; base < dd * dd; ++base) {
      // decompose
      size_t rem = base;
      size_t idx[4];
      idx[0] = rem / (dd * d); rem %= dd * d;
      idx[1] = rem / dd; rem %= dd;
      idx[2] = rem / d;
      idx[3] = rem % d;
      const size_t a = idx[slot];
      // accumulate into all frame indices for this slot
      size_t base0 = base - a * stride[slot];
      for (int fa = 0; fa < d; ++fa)
        nxt[base0 + fa * stride[slot]] += E(static_cast<int>(a), fa) * cur[base];
    }
    std::swap(cur, nxt);
  }
  CurvTensor4 out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          out.set(i, j, k, l, cur[(static_cast<size_t>(i) * d + j) * dd + k * d + l]);
  return out;
}

}  // namespace

OracleCurvature fd_curvature_oracle(const ChartMetric& chart, const std::vector<double>& x,
                                    double h, bool richardson) {
  const int d = chart.dim;
  CoordCurvature c1 = coord_curvature(chart, x, h);
  if (richardson) {
    CoordCurvature c2 = coord_curvature(chart, x, h / 2);
    for (size_t i = 0; i < c1.R.size(); ++i) c1.R[i] = (4 * c2.R[i] - c1.R[i]) / 3;
    for (size_t i = 0; i < c1.ric.size(); ++i) c1.ric[i] = (4 * c2.ric[i] - c1.ric[i]) / 3;
    c1.scal = (4 * c2.scal - c1.scal) / 3;
    for (size_t i = 0; i < c1.hessw.size(); ++i)
      c1.hessw[i] = (4 * c2.hessw[i] - c1.hessw[i]) / 3;
  }
  Eigen::MatrixXd E = frame_from_metric(c1.g, d);

  OracleCurvature out;
  out.dim = d;
  out.ric = to_frame2(c1.ric, E, d);
  out.scal = c1.scal;
  out.R = to_frame4(c1.R, E, d);
  out.hessw = c1.hessw.empty() ? SymTensor2(d) : to_frame2(c1.hessw, E, d);
  return out;
}

std::vector<double> fd_divergence2(const ChartMetric& chart,
                                   const std::function<void(const double*, double*)>& T,
                                   const std::vector<double>& x, double h) {
  const int d = chart.dim;
  const size_t dd = static_cast<size_t>(d) * d;
  MetricDerivs md = metric_derivs(chart, x, h);
  Vec G = christoffel(md);

  Vec T0(dd);
  T(x.data(), T0.data());
  Vec dT(d * dd, 0.0);
  Vec xt = x, tp(dd), tm(dd);
  for (int l = 0; l < d; ++l) {
    xt[l] = x[l] + h; T(xt.data(), tp.data());
    xt[l] = x[l] - h; T(xt.data(), tm.data());
    xt[l] = x[l];
    for (size_t e = 0; e < dd; ++e) dT[l * dd + e] = (tp[e] - tm[e]) / (2 * h);
  }

  Vec div(d, 0.0);
  for (int j = 0; j < d; ++j) {
    double s = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double t = dT[a * dd + b * d + j];
        for (int c2 = 0; c2 < d; ++c2)
          t -= G[c2 * dd + a * d + b] * T0[c2 * d + j] +
               G[c2 * dd + a * d + j] * T0[b * d + c2];
        s += md.gi[a * d + b] * t;
      }
    div[j] = s;
  }
  Eigen::MatrixXd E = frame_from_metric(md.g, d);
  Vec out(d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int j = 0; j < d; ++j) out[a] += E(j, a) * div[j];
  return out;
}

std::vector<double> fd_divergence4(const ChartMetric& chart,
                                   const std::function<void(const double*, double*)>& T,
                                   const std::vector<double>& x, double h) {
  const int d = chart.dim;
  const size_t dd = static_cast<size_t>(d) * d;
  const size_t d4 = dd * dd;
  MetricDerivs md = metric_derivs(chart, x, h);
  Vec G = christoffel(md);

  Vec T0(d4);
  T(x.data(), T0.data());
  Vec dT(d * d4, 0.0);
  Vec xt = x, tp(d4), tm(d4);
  for (int l = 0; l < d; ++l) {
    xt[l] = x[l] + h; T(xt.data(), tp.data());
    xt[l] = x[l] - h; T(xt.data(), tm.data());
    xt[l] = x[l];
    for (size_t e = 0; e < d4; ++e) dT[l * d4 + e] = (tp[e] - tm[e]) / (2 * h);
  }

  auto at = [&](const Vec& v, int i, int j, int k, int l) {
    return v[(static_cast<size_t>(i) * d + j) * dd + k * d + l];
  };
  Vec div(dd * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double t = dT[a * d4 + (static_cast<size_t>(i) * d + j) * dd + k * d + b];
            for (int c2 = 0; c2 < d; ++c2)
              t -= G[c2 * dd + a * d + i] * at(T0, c2, j, k, b) +
                   G[c2 * dd + a * d + j] * at(T0, i, c2, k, b) +
                   G[c2 * dd + a * d + k] * at(T0, i, j, c2, b) +
                   G[c2 * dd + a * d + b] * at(T0, i, j, k, c2);
            s += md.gi[a * d + b] * t;
          }
        div[(static_cast<size_t>(i) * d + j) * d + k] = s;
      }

  Eigen::MatrixXd E = frame_from_metric(md.g, d);
  Vec out(dd * d, 0.0);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c2 = 0; c2 < d; ++c2) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
              s += E(i, a) * E(j, b) * E(k, c2) *
                   div[(static_cast<size_t>(i) * d + j) * d + k];
        out[(static_cast<size_t>(a) * d + b) * d + c2] = s;
      }
  return out;
}

double fd_cotton_residual(const ChartMetric& chart, const std::vector<double>& x,
                          double h) {
  const int d = chart.dim;
  const size_t dd = static_cast<size_t>(d) * d;
  auto schouten_field = [&](const double* xp, double* out) {
    Vec xv(xp, xp + d);
    CoordCurvature cc = coord_curvature(chart, xv, h / 4);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        out[i * d + j] =
            cc.ric[i * d + j] - cc.scal / (2.0 * (d - 1)) * cc.g[i * d + j];
  };

  MetricDerivs md = metric_derivs(chart, x, h);
  Vec G = christoffel(md);
  Vec S0(dd);
  schouten_field(x.data(), S0.data());
  Vec dS(d * dd, 0.0);
  Vec xt = x, sp(dd), sm(dd);
  for (int l = 0; l < d; ++l) {
    xt[l] = x[l] + h; schouten_field(xt.data(), sp.data());
    xt[l] = x[l] - h; schouten_field(xt.data(), sm.data());
    xt[l] = x[l];
    for (size_t e = 0; e < dd; ++e) dS[l * dd + e] = (sp[e] - sm[e]) / (2 * h);
  }

  auto covd = [&](int i, int j, int k) {
    double s = dS[i * dd + j * d + k];
    for (int c2 = 0; c2 < d; ++c2)
      s -= G[c2 * dd + i * d + j] * S0[c2 * d + k] + G[c2 * dd + i * d + k] * S0[j * d + c2];
    return s;
  };
  Eigen::MatrixXd E = frame_from_metric(md.g, d);
  double res = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c2 = 0; c2 < d; ++c2) {
        double s = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
              s += E(i, a) * E(j, b) * E(k, c2) * (covd(i, j, k) - covd(j, i, k));
        res = std::max(res, std::abs(s));
      }
  return res;
}

namespace {

// conformally flat chart factor for the space form of Einstein constant kappa
// in dimension d (kappa > 0 stereographic sphere, kappa < 0 Poincare ball)
std::function<double(const double*)> space_form_conf(double kappa, int d) {
  if (d <= 0) return [](const double*) { return 1.0; };
  if (d == 1 || std::abs(kappa) < 1e-300) {
    if (d >= 2 && std::abs(kappa) > 1e-300)
      throw Error(Errc::UnsupportedLink, "flat chart asked for nonzero kappa");
    return [](const double*) { return 1.0; };
  }
  const double a = std::sqrt((d - 1) / std::abs(kappa));
  const bool sphere = kappa > 0;
  return [a, sphere, d](const double* y) {
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += y[i] * y[i];
    return sphere ? a * 2.0 / (1.0 + r2) : a * 2.0 / (1.0 - r2);
  };
}

const double kGenericLink[6] = {0.08, -0.11, 0.05, 0.13, -0.03, 0.09};
const double kGenericFiber[6] = {0.07, -0.12, 0.06, 0.11, -0.04, 0.10};

std::vector<double> chart_point(double t, int nlink, int nfiber) {
  std::vector<double> x{t};
  for (int i = 0; i < nlink; ++i) x.push_back(kGenericLink[i % 6]);
  for (int i = 0; i < nfiber; ++i) x.push_back(kGenericFiber[i % 6]);
  return x;
}

}  // namespace

Chart cohomog1_chart(const WarpedModel& model) {
  const int n = model.n();
  if (n >= 3 && !model.space_form_link())
    throw Error(Errc::UnsupportedLink, "chart needs a space-form link");
  auto conf = space_form_conf(model.kappa_L, n - 1);
  Profile psi = model.psi, w = model.w;
  Chart ch;
  ch.metric.dim = n;
  ch.metric.metric = [n, conf, psi](const double* x, double* g) {
    std::fill(g, g + n * n, 0.0);
    g[0] = 1.0;
    if (n >= 2) {
      const double p = psi(x[0]).v;
      const double c = conf(x + 1);
      for (int i = 1; i < n; ++i) g[i * n + i] = sqr(p * c);
    }
  };
  ch.metric.w = [w](const double* x) { return w(x[0]).v; };
  ch.point = [n](double t) { return chart_point(t, n - 1, 0); };
  return ch;
}

Chart conformal_chart(const WarpedModel& model) {
  Chart base = cohomog1_chart(model);
  Profile w = model.w;
  const int n = model.n();
  Chart ch;
  ch.metric.dim = n;
  auto inner = base.metric.metric;
  ch.metric.metric = [n, inner, w](const double* x, double* g) {
    inner(x, g);
    const double s = 1.0 / sqr(w(x[0]).v);
    for (int i = 0; i < n * n; ++i) g[i] *= s;
  };
  ch.point = base.point;
  return ch;
}

Chart total_space_chart(const WarpedModel& model) {
  const ModelSpec& spec = model.spec;
  if (!spec.m_is_integer() || spec.m < 1.0)
    throw Error(Errc::NonIntegerM, "total space chart needs integer m >= 1");
  if (!spec.mu) throw Error(Errc::DomainError, "total space chart needs mu");
  const int n = spec.n;
  const int mi = static_cast<int>(std::round(spec.m));
  const int d = n + mi;
  if (mi == 1 && std::abs(*spec.mu) > 1e-12)
    throw Error(Errc::FiberMismatch, "one-dimensional fiber needs mu = 0");
  auto conf_link = space_form_conf(model.kappa_L, n - 1);
  auto conf_fiber = space_form_conf(*spec.mu, mi);
  Profile psi = model.psi, w = model.w;

  Chart ch;
  ch.metric.dim = d;
  ch.metric.metric = [n, mi, d, conf_link, conf_fiber, psi, w](const double* x, double* g) {
    std::fill(g, g + d * d, 0.0);
    g[0] = 1.0;
    if (n >= 2) {
      const double p = psi(x[0]).v;
      const double c = conf_link(x + 1);
      for (int i = 1; i < n; ++i) g[i * d + i] = sqr(p * c);
    }
    const double wv = w(x[0]).v;
    const double cf = conf_fiber(x + n);
    for (int i = n; i < d; ++i) g[i * d + i] = sqr(wv * cf);
  };
  ch.point = [n, mi](double t) { return chart_point(t, n - 1, mi); };
  return ch;
}

Chart doubly_warped_chart(const DoublyWarpedModel& model) {
  Profile phi = model.phi, psi = model.psi, w = model.w;
  Chart ch;
  ch.metric.dim = 3;
  ch.metric.metric = [phi, psi](const double* x, double* g) {
    std::fill(g, g + 9, 0.0);
    g[0] = 1.0;
    g[4] = sqr(phi(x[0]).v);
    g[8] = sqr(psi(x[0]).v);
  };
  ch.metric.w = [w](const double* x) { return w(x[0]).v; };
  ch.point = [](double t) { return std::vector<double>{t, 0.3, 0.7}; };
  return ch;
}

Chart schwarzschild_r_chart(double m) {
  if (!(m > 1.0) || std::abs(m - std::round(m)) > 1e-9)
    throw Error(Errc::NonIntegerM, "schwarzschild chart needs integer m > 1");
  const int mi = static_cast<int>(std::round(m));
  const int d = 2 + mi;
  auto conf_fiber = space_form_conf(mi - 1.0, mi);  // unit round S^m
  Chart ch;
  ch.metric.dim = d;
  ch.metric.metric = [m, mi, d, conf_fiber](const double* x, double* g) {
    std::fill(g, g + d * d, 0.0);
    const double r = x[0];
    const double V = 1.0 - std::pow(r, 1.0 - m);
    g[0] = 1.0 / V;
    g[d + 1] = V;
    const double cf = conf_fiber(x + 2);
    for (int i = 2; i < d; ++i) g[i * d + i] = sqr(r * cf);
  };
  ch.point = [mi](double r) {
    std::vector<double> x{r, 0.4};
    for (int i = 0; i < mi; ++i) x.push_back(kGenericFiber[i % 6]);
    return x;
  };
  return ch;
}

CheckReport certify_curvature(const WarpedModel& model, const std::vector<double>& ts,
                              double tol, bool parallel) {
  const int n = model.n();
  std::vector<double> devs(ts.size(), 0.0);

  auto one = [&](size_t idx) {
    const double t = ts[idx];
    double dev = 0.0;
    if (n == 1) {
      // 1-dimensional base: certify the total-space Ricci blocks instead
      Chart ch = total_space_chart(model);
      OracleCurvature oc = fd_curvature_oracle(ch.metric, ch.point(t));
      TotalSpaceRicci tr = einstein_total_space(model, t);
      dev = std::max(dev, std::abs(oc.ric(0, 0) - tr.ric_tt));
      for (int i = 1; i < ch.metric.dim; ++i)
        dev = std::max(dev, std::abs(oc.ric(i, i) - tr.ric_FF));
    } else {
      Chart ch = cohomog1_chart(model);
      OracleCurvature oc = fd_curvature_oracle(ch.metric, ch.point(t));
      CurvatureFrame f = warped_curvature(model, t);
      dev = std::max(dev, std::abs(oc.ric(0, 0) - f.ric_tt));
      for (int i = 1; i < n; ++i) dev = std::max(dev, std::abs(oc.ric(i, i) - f.ric_LL));
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) dev = std::max(dev, std::abs(oc.ric(i, j)));
      dev = std::max(dev, std::abs(oc.scal - f.scal));
      dev = std::max(dev, std::abs(oc.hessw(0, 0) - f.hessw_tt));
      for (int i = 1; i < n; ++i)
        dev = std::max(dev, std::abs(oc.hessw(i, i) - f.hessw_LL));
      if (f.has_R) {
        CurvTensor4 R = riemann_tensor(f);
        R -= oc.R;
        dev = std::max(dev, R.max_abs());
      }
    }
    devs[idx] = dev;
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(ts.size()); ++i)
      one(static_cast<size_t>(i));
  } else {
    for (size_t i = 0; i < ts.size(); ++i) one(i);
  }

  double dev = 0.0;
  for (double v : devs) dev = std::max(dev, v);
  return CheckReport::make("certify-curvature", "", dev, tol,
                           static_cast<int>(ts.size()));
}

}  // namespace wpe
