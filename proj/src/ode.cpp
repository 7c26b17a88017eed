#include "wpe/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace wpe {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::None: return "none";
    case Termination::WZero: return "w-zero";
    case Termination::PsiZero: return "psi-zero";
    case Termination::TMax: return "t-max";
    case Termination::BlowUp: return "blow-up";
    case Termination::Stationary: return "stationary";
  }
  return "none";
}

const OdeEvent* Trajectory::event(const std::string& kind) const {
  for (const auto& e : events)
    if (e.kind == kind) return &e;
  return nullptr;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9;
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247,
                 A64 = 49.0 / 176, A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192,
                 B5 = -2187.0 / 6784, B6 = 11.0 / 84;
// b - b* (error estimator weights)
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920,
                 E5 = -17253.0 / 339200, E6 = 22.0 / 525, E7 = -1.0 / 40;

struct StepWork {
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, ynew, yerr;
  explicit StepWork(int d)
      : k1(d), k2(d), k3(d), k4(d), k5(d), k6(d), k7(d), tmp(d), ynew(d), yerr(d) {}
};

// One DP5 step; fills w.ynew and w.yerr; k1 must already hold f(t, y).
void dp5_step(const OdeSystem& sys, double t, const std::vector<double>& y, double h,
              StepWork& w) {
  const int d = sys.dim;
  for (int i = 0; i < d; ++i) w.tmp[i] = y[i] + h * A21 * w.k1[i];
  sys.f(t + C2 * h, w.tmp.data(), w.k2.data());
  for (int i = 0; i < d; ++i) w.tmp[i] = y[i] + h * (A31 * w.k1[i] + A32 * w.k2[i]);
  sys.f(t + C3 * h, w.tmp.data(), w.k3.data());
  for (int i = 0; i < d; ++i)
    w.tmp[i] = y[i] + h * (A41 * w.k1[i] + A42 * w.k2[i] + A43 * w.k3[i]);
  sys.f(t + C4 * h, w.tmp.data(), w.k4.data());
  for (int i = 0; i < d; ++i)
    w.tmp[i] = y[i] + h * (A51 * w.k1[i] + A52 * w.k2[i] + A53 * w.k3[i] + A54 * w.k4[i]);
  sys.f(t + C5 * h, w.tmp.data(), w.k5.data());
  for (int i = 0; i < d; ++i)
    w.tmp[i] = y[i] + h * (A61 * w.k1[i] + A62 * w.k2[i] + A63 * w.k3[i] +
                           A64 * w.k4[i] + A65 * w.k5[i]);
  sys.f(t + h, w.tmp.data(), w.k6.data());
  for (int i = 0; i < d; ++i)
    w.ynew[i] = y[i] + h * (B1 * w.k1[i] + B3 * w.k3[i] + B4 * w.k4[i] + B5 * w.k5[i] +
                            B6 * w.k6[i]);
  sys.f(t + h, w.ynew.data(), w.k7.data());
  for (int i = 0; i < d; ++i)
    w.yerr[i] = h * (E1 * w.k1[i] + E3 * w.k3[i] + E4 * w.k4[i] + E5 * w.k5[i] +
                     E6 * w.k6[i] + E7 * w.k7[i]);
}

double error_norm(const std::vector<double>& y0, const std::vector<double>& y1,
                  const std::vector<double>& yerr, double atol, double rtol) {
  double s = 0.0;
  const size_t d = y0.size();
  for (size_t i = 0; i < d; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    s += sqr(yerr[i] / sc);
  }
  return std::sqrt(s / d);
}

double initial_step(const OdeSystem& sys, double t0, const std::vector<double>& y0,
                    const std::vector<double>& f0, double dir, double atol, double rtol,
                    double hmax) {
  const int d = sys.dim;
  double d0 = 0, d1 = 0;
  for (int i = 0; i < d; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    d0 += sqr(y0[i] / sc);
    d1 += sqr(f0[i] / sc);
  }
  d0 = std::sqrt(d0 / d);
  d1 = std::sqrt(d1 / d);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, hmax);
  std::vector<double> y1(d), f1(d);
  for (int i = 0; i < d; ++i) y1[i] = y0[i] + dir * h0 * f0[i];
  sys.f(t0 + dir * h0, y1.data(), f1.data());
  double d2 = 0;
  for (int i = 0; i < d; ++i) {
    const double sc = atol + rtol * std::abs(y0[i]);
    d2 += sqr((f1[i] - f0[i]) / sc);
  }
  d2 = std::sqrt(d2 / d) / h0;
  const double dm = std::max(d1, d2);
  double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
  return std::min({100 * h0, h1, hmax});
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

IntegrationResult integrate(const OdeSystem& sys, double t0, std::vector<double> y0,
                            double t1, const IntegratorOptions& opts,
                            const std::vector<EventSpec>& events) {
  const int d = sys.dim;
  const double dir = (t1 >= t0) ? 1.0 : -1.0;
  IntegrationResult out;
  out.t.push_back(t0);
  out.y.push_back(y0);

  StepWork work(d);
  std::vector<double> y = y0;
  double t = t0;
  sys.f(t, y.data(), work.k1.data());
  if (!all_finite(work.k1)) throw Error(Errc::DegenerateData, "rhs not finite at start");

  double h = opts.h0 > 0 ? std::min(opts.h0, opts.hmax)
                         : initial_step(sys, t, y, work.k1, dir, opts.atol, opts.rtol,
                                        opts.hmax);
  std::vector<double> gprev(events.size());
  for (size_t e = 0; e < events.size(); ++e) gprev[e] = events[e].g(t, y.data());

  double errold = 1e-4;
  const double expo = 0.17, beta = 0.04, safety = 0.9;

  for (size_t step = 0; step < opts.max_steps; ++step) {
    if (std::isfinite(t1) && dir * (t - t1) >= 0) {
      out.termination = Termination::TMax;
      return out;
    }
    double hs = dir * h;
    if (std::isfinite(t1) && dir * (t + hs - t1) > 0) hs = t1 - t;

    dp5_step(sys, t, y, hs, work);

    double err = all_finite(work.ynew) && all_finite(work.yerr)
                     ? error_norm(y, work.ynew, work.yerr, opts.atol, opts.rtol)
                     : std::numeric_limits<double>::infinity();

    if (err > 1.0) {
      if (!std::isfinite(err)) {
        h *= 0.1;
      } else {
        h = std::abs(hs) * std::max(0.2, safety * std::pow(err, -expo));
      }
      if (h < 1e-14 * std::max(1.0, std::abs(t))) {
        out.termination = Termination::BlowUp;
        out.events.push_back({"blow-up", t, y});
        return out;
      }
      continue;  // k1 still holds f(t, y)
    }

    const double tnew = t + hs;

    // event sign changes over the accepted step
    int hit = -1;
    double ghit = 0;
    for (size_t e = 0; e < events.size(); ++e) {
      const double gnew = events[e].g(tnew, work.ynew.data());
      if ((gprev[e] > 0 && gnew < 0) || (gprev[e] < 0 && gnew > 0) ||
          (gnew == 0.0 && gprev[e] != 0.0)) {
        hit = static_cast<int>(e);
        ghit = gnew;
        break;
      }
      gprev[e] = gnew;
    }

    if (hit >= 0) {
      // bisect the step length; each candidate is an honest DP5 step from (t, y)
      double slo = 0.0, shi = hs;
      double glo = gprev[hit];
      StepWork ev(d);
      ev.k1 = work.k1;
      std::vector<double> ystate = work.ynew;
      double tev = tnew;
      if (ghit != 0.0) {
        for (int it = 0; it < 100; ++it) {
          const double smid = 0.5 * (slo + shi);
          dp5_step(sys, t, y, smid, ev);
          const double gm = events[hit].g(t + smid, ev.ynew.data());
          if (gm == 0.0 || std::abs(shi - slo) < 1e-16 * std::max(1.0, std::abs(t))) {
            ystate = ev.ynew;
            tev = t + smid;
            break;
          }
          if ((glo < 0) == (gm < 0)) {
            slo = smid;
            glo = gm;
          } else {
            shi = smid;
          }
          ystate = ev.ynew;
          tev = t + smid;
        }
      }
      out.t.push_back(tev);
      out.y.push_back(ystate);
      out.events.push_back({events[hit].kind, tev, ystate});
      out.termination = (events[hit].kind == "w-zero") ? Termination::WZero
                                                       : Termination::PsiZero;
      return out;
    }

    t = tnew;
    y = work.ynew;
    out.t.push_back(t);
    out.y.push_back(y);

    for (double v : y)
      if (std::abs(v) > opts.blowup) {
        out.termination = Termination::BlowUp;
        out.events.push_back({"blow-up", t, y});
        return out;
      }

    // PI step-size controller
    const double fac =
        safety * std::pow(std::max(err, 1e-30), -expo) * std::pow(errold, beta);
    h = std::abs(hs) * std::min(5.0, std::max(0.2, fac));
    h = std::min(h, opts.hmax);
    errold = std::max(err, 1e-30);
    work.k1 = work.k7;  // FSAL
  }
  out.termination = Termination::TMax;
  return out;
}

TrajectoryInterp::TrajectoryInterp(std::shared_ptr<const Trajectory> traj, OdeSystem sys)
    : traj_(std::move(traj)), sys_(std::move(sys)) {
  f_.resize(traj_->t.size());
  for (size_t i = 0; i < traj_->t.size(); ++i) {
    f_[i].resize(sys_.dim);
    sys_.f(traj_->t[i], traj_->states[i].data(), f_[i].data());
  }
}

Interval TrajectoryInterp::domain() const { return {traj_->t.front(), traj_->t.back()}; }

std::vector<double> TrajectoryInterp::state(double t) const {
  const auto& ts = traj_->t;
  if (t < ts.front() - 1e-12 || t > ts.back() + 1e-12)
    throw Error(Errc::DomainError, "t outside trajectory range");
  size_t i = std::upper_bound(ts.begin(), ts.end(), t) - ts.begin();
  if (i == 0) i = 1;
  if (i >= ts.size()) i = ts.size() - 1;
  const size_t i0 = i - 1, i1 = i;
  const double h = ts[i1] - ts[i0];
  const double th = (t - ts[i0]) / h;

  // quintic Hermite basis and its derivative
  const double t2 = th * th, t3 = t2 * th, t4 = t3 * th, t5 = t4 * th;
  const double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h10 = th - 6 * t3 + 8 * t4 - 3 * t5;
  const double h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5);
  const double h01 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h11 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h21 = 0.5 * (t3 - 2 * t4 + t5);
  const double d00 = (-30 * t2 + 60 * t3 - 30 * t4) / h;
  const double d10 = (1 - 18 * t2 + 32 * t3 - 15 * t4);
  const double d20 = 0.5 * (2 * th - 9 * t2 + 12 * t3 - 5 * t4);
  const double d01 = (30 * t2 - 60 * t3 + 30 * t4) / h;
  const double d11 = (-12 * t2 + 28 * t3 - 15 * t4);
  const double d21 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);

  const auto& ya = traj_->states[i0];
  const auto& yb = traj_->states[i1];
  const auto& fa = f_[i0];
  const auto& fb = f_[i1];
  std::vector<double> out(sys_.dim);
  for (int p = 0; p + 1 < sys_.dim; p += 2) {
    const double x0 = ya[p], v0 = ya[p + 1], a0 = fa[p + 1];
    const double x1 = yb[p], v1 = yb[p + 1], a1 = fb[p + 1];
    out[p] = x0 * h00 + h * v0 * h10 + h * h * a0 * h20 + x1 * h01 + h * v1 * h11 +
             h * h * a1 * h21;
    out[p + 1] = x0 * d00 + v0 * d10 + h * a0 * d20 + x1 * d01 + v1 * d11 + h * a1 * d21;
  }
  return out;
}

namespace {

Trajectory merge_bidirectional(Trajectory fwd, const Trajectory& bwd) {
  Trajectory out = std::move(fwd);
  if (bwd.t.size() > 1) {
    std::vector<double> t2(bwd.t.rbegin(), bwd.t.rend() - 1);
    std::vector<std::vector<double>> s2(bwd.states.rbegin(), bwd.states.rend() - 1);
    t2.insert(t2.end(), out.t.begin(), out.t.end());
    s2.insert(s2.end(), out.states.begin(), out.states.end());
    out.t = std::move(t2);
    out.states = std::move(s2);
    for (const auto& e : bwd.events) out.events.push_back(e);
  }
  return out;
}

void log_invariants(Trajectory& traj,
                    const std::function<double(const std::vector<double>&)>& mu_of,
                    const std::function<double(const std::vector<double>&)>& c_of) {
  if (mu_of) {
    traj.mu_log.resize(traj.size());
    for (size_t i = 0; i < traj.size(); ++i) traj.mu_log[i] = mu_of(traj.states[i]);
  }
  if (c_of) {
    traj.c_log.resize(traj.size());
    for (size_t i = 0; i < traj.size(); ++i) traj.c_log[i] = c_of(traj.states[i]);
  }
}

void mark_stationary(Trajectory& traj) {
  if (traj.termination != Termination::TMax) return;
  const auto& y0 = traj.states.front();
  for (const auto& y : traj.states)
    for (size_t i = 0; i < y.size(); ++i)
      if (std::abs(y[i] - y0[i]) > 1e-11 * (1.0 + std::abs(y0[i]))) return;
  traj.termination = Termination::Stationary;
}

Trajectory run_bidirectional(const OdeSystem& sys, const ModelSpec& spec,
                             const std::string& solver, std::vector<std::string> cols,
                             double t0, const std::vector<double>& y0, SolveRange range,
                             const IntegratorOptions& opts,
                             const std::vector<EventSpec>& events) {
  Trajectory traj;
  traj.spec = spec;
  traj.solver = solver;
  traj.columns = std::move(cols);

  IntegrationResult fwd, bwd;
  bool have_fwd = range.tmax > t0, have_bwd = range.tmin < t0;
  if (have_fwd) fwd = integrate(sys, t0, y0, range.tmax, opts, events);
  if (have_bwd) bwd = integrate(sys, t0, y0, range.tmin, opts, events);

  Trajectory tf;
  tf.t = have_fwd ? fwd.t : std::vector<double>{t0};
  tf.states = have_fwd ? fwd.y : std::vector<std::vector<double>>{y0};
  tf.events = have_fwd ? fwd.events : std::vector<OdeEvent>{};
  Trajectory tb;
  tb.t = have_bwd ? bwd.t : std::vector<double>{t0};
  tb.states = have_bwd ? bwd.y : std::vector<std::vector<double>>{y0};
  tb.events = have_bwd ? bwd.events : std::vector<OdeEvent>{};

  Trajectory merged = merge_bidirectional(std::move(tf), tb);
  traj.t = std::move(merged.t);
  traj.states = std::move(merged.states);
  traj.events = std::move(merged.events);
  traj.termination = have_fwd ? fwd.termination : bwd.termination;
  mark_stationary(traj);
  return traj;
}

}  // namespace

Trajectory solve_1d(const ModelSpec& spec_in, double w0, double dw0, SolveRange range,
                    const IntegratorOptions& opts) {
  if (w0 == 0.0 && dw0 == 0.0) throw Error(Errc::DegenerateData, "(w0, w0') = (0, 0)");
  ModelSpec spec = spec_in;
  spec.n = 1;
  const double k = spec.lambda / spec.m;
  const double m = spec.m, lambda = spec.lambda;

  OdeSystem sys{2, [k](double, const double* y, double* dy) {
                  dy[0] = y[1];
                  dy[1] = -k * y[0];
                }};
  std::vector<EventSpec> ev{{"w-zero", [](double, const double* y) { return y[0]; }}};

  auto mu_of = [m, lambda, k](const std::vector<double>& y) {
    return y[0] * (-k * y[0]) + (m - 1.0) * sqr(y[1]) + lambda * sqr(y[0]);
  };
  ModelSpec vspec = spec;
  vspec.mu = mu_of({w0, dw0});
  vspec.mu_from = MuProvenance::FormulaDerived;

  Trajectory traj = run_bidirectional(sys, vspec, "1d", {"w", "dw"}, range.t0, {w0, dw0},
                                      range, opts, ev);
  log_invariants(traj, mu_of, nullptr);
  return traj;
}

namespace {

// 2 w w'' + (m-1)(w')^2 + lambda w^2 = mu, solved for w''
struct SurfaceRhs {
  double m, lambda, mu;
  void operator()(double, const double* y, double* dy) const {
    dy[0] = y[1];
    dy[1] = (mu - (m - 1.0) * sqr(y[1]) - lambda * sqr(y[0])) / (2.0 * y[0]);
  }
  double d2(const double* y) const {
    return (mu - (m - 1.0) * sqr(y[1]) - lambda * sqr(y[0])) / (2.0 * y[0]);
  }
  double d3(const double* y) const {
    const double w = y[0], dw = y[1], ddw = d2(y);
    return -dw * (m * ddw + lambda * w) / w;
  }
  double d4(const double* y) const {
    const double w = y[0], dw = y[1], ddw = d2(y), dddw = d3(y);
    return -ddw * (m * ddw + lambda * w) / w - dw * (m * dddw + lambda * dw) / w +
           sqr(dw) * (m * ddw + lambda * w) / sqr(w);
  }
};

}  // namespace

Trajectory solve_surface(const ModelSpec& spec_in, SurfaceMode mode, double w0,
                         double dw0, SolveRange range, const IntegratorOptions& opts) {
  ModelSpec spec = spec_in;
  spec.n = 2;
  if (w0 <= 0.0) throw Error(Errc::DegenerateData, "surface mode needs w(t0) > 0");
  const double m = spec.m, lambda = spec.lambda;
  const bool m_is_one = std::abs(m - 1.0) < 1e-12;

  double mu;
  if (mode == SurfaceMode::Polar) {
    dw0 = 0.0;
    mu = lambda * sqr(w0) + 2.0 * w0;  // smoothness constraint at the pole
    if (m_is_one && std::abs(mu) > 1e-12)
      throw Error(Errc::SmoothnessViolation, "m = 1 needs mu = 0: lambda w0^2 + 2 w0 = 0");
    if (spec.mu && std::abs(*spec.mu - mu) > 1e-9 * (1.0 + std::abs(mu)))
      throw Error(Errc::SmoothnessViolation,
                  "given mu contradicts the polar constraint lambda w0^2 + 2 w0");
  } else {
    if (m_is_one)
      mu = 0.0;
    else if (spec.mu)
      mu = *spec.mu;
    else
      throw Error(Errc::DegenerateData, "cartesian surface mode needs mu in the spec");
  }
  spec.mu = mu;
  if (spec.mu_from == MuProvenance::Unset)
    spec.mu_from = (mode == SurfaceMode::Polar) ? MuProvenance::FormulaDerived
                                                : MuProvenance::Given;

  SurfaceRhs rhs{m, lambda, mu};
  if (mode == SurfaceMode::Polar) {
    const double wpp0 = rhs.d2(std::vector<double>{w0, 0.0}.data());
    if (std::abs(wpp0 - 1.0) > 1e-12)
      throw Error(Errc::SmoothnessViolation, "w''(0) != 1 in polar mode");
  }

  OdeSystem sys{2, [rhs](double t, const double* y, double* dy) { rhs(t, y, dy); }};
  std::vector<EventSpec> ev{{"w-zero", [](double, const double* y) { return y[0]; }}};

  auto mu_of = [rhs, m, lambda](const std::vector<double>& y) {
    return 2.0 * y[0] * rhs.d2(y.data()) + (m - 1.0) * sqr(y[1]) + lambda * sqr(y[0]);
  };
  std::function<double(const std::vector<double>&)> c_of;
  if (m_is_one) {
    c_of = [lambda](const std::vector<double>& y) {
      return sqr(y[1]) + 0.5 * lambda * sqr(y[0]);
    };
  } else {
    c_of = [m, lambda, mu](const std::vector<double>& y) {
      return (sqr(y[1]) - mu / (m - 1.0) + lambda / (m + 1.0) * sqr(y[0])) *
             std::exp((m - 1.0) * std::log(y[0]));
    };
  }

  Trajectory traj = run_bidirectional(sys, spec, "surface", {"w", "dw"}, range.t0,
                                      {w0, dw0}, range, opts, ev);
  log_invariants(traj, mu_of, c_of);
  return traj;
}

Trajectory schwarzschild_solve(double m, double tmax, const IntegratorOptions& opts) {
  if (!(m > 1.0)) throw Error(Errc::InvalidM, "schwarzschild needs m > 1");
  ModelSpec spec;
  spec.n = 2;
  spec.m = m;
  spec.lambda = 0.0;
  spec.mu = m - 1.0;
  spec.mu_from = MuProvenance::FormulaDerived;
  SolveRange range;
  range.t0 = 0.0;
  range.tmin = 0.0;
  range.tmax = tmax;
  Trajectory traj = solve_surface(spec, SurfaceMode::Cartesian, 1.0, 0.0, range, opts);
  traj.solver = "schwarzschild";
  return traj;
}

namespace {

struct RotsymRhs {
  int n;
  double m, lambda, kappa_L;
  double psidd(const double* y) const {
    const double psi = y[0], dpsi = y[1], w = y[2], dw = y[3];
    return (kappa_L - (n - 2) * sqr(dpsi)) / psi - lambda * psi - m * (dw / w) * dpsi;
  }
  double wdd(const double* y) const {
    return (y[2] / m) * (-(n - 1) * psidd(y) / y[0] - lambda);
  }
  void operator()(double, const double* y, double* dy) const {
    dy[0] = y[1];
    dy[1] = psidd(y);
    dy[2] = y[3];
    dy[3] = wdd(y);
  }
  double psiddd(const double* y) const {
    const double psi = y[0], dpsi = y[1], w = y[2], dw = y[3];
    const double ddpsi = psidd(y), ddw = wdd(y);
    const double dG_dpsi = ((n - 2) * sqr(dpsi) - kappa_L) / sqr(psi) - lambda;
    const double dG_ddpsi = -2.0 * (n - 2) * dpsi / psi - m * dw / w;
    const double dG_dw = m * dw * dpsi / sqr(w);
    const double dG_ddw = -m * dpsi / w;
    return dG_dpsi * dpsi + dG_ddpsi * ddpsi + dG_dw * dw + dG_ddw * ddw;
  }
  double wddd(const double* y) const {
    const double psi = y[0], dpsi = y[1], w = y[2], dw = y[3];
    const double ddpsi = psidd(y), dddpsi = psiddd(y);
    return (dw / m) * (-(n - 1) * ddpsi / psi - lambda) +
           (w / m) * (-(n - 1) * (dddpsi * psi - ddpsi * dpsi) / sqr(psi));
  }
};

}  // namespace

Trajectory solve_rotsym(const ModelSpec& spec_in, double kappa_L, const RotsymInit& init,
                        SolveRange range, const IntegratorOptions& opts) {
  ModelSpec spec = spec_in;
  if (spec.n < 2) throw Error(Errc::InvalidDimension, "rotsym needs n >= 2");
  const int n = spec.n;
  const double m = spec.m, lambda = spec.lambda;
  RotsymRhs rhs{n, m, lambda, kappa_L};

  double t0 = range.t0;
  std::vector<double> y0;
  if (init.pole) {
    if (init.w0 <= 0.0) throw Error(Errc::DegenerateData, "pole start needs w(0) > 0");
    if (std::abs(kappa_L - (n - 2)) > 1e-12)
      throw Error(Errc::DomainError, "smooth pole needs the unit round link, kappa_L = n-2");
    // series start:  psi = t + a3 t^3 + a5 t^5,  w = w0 + b2 t^2 + b4 t^4
    const double w0 = init.w0;
    const double b2 = (init.mu - lambda * sqr(w0)) / (2.0 * n * w0);
    const double a3 = -(2.0 * m * b2 / w0 + lambda) / (6.0 * (n - 1));
    // linear system for (b4, a5) from the t^2 coefficients of both equations
    const double r1 = 2.0 * sqr(b2) / w0 + (6.0 * w0 * (n - 1) / m) * sqr(a3);
    const double r2 =
        2.0 * sqr(b2) / w0 - 4.0 * a3 * b2 + (3.0 * n * w0 / m) * sqr(a3);
    // 12 b4 + (20 w0 (n-1)/m) a5 = r1 ;  4 b4 + (10 n w0/m) a5 = r2
    const double A11 = 12.0, A12 = 20.0 * w0 * (n - 1) / m;
    const double A21 = 4.0, A22 = 10.0 * n * w0 / m;
    const double det = A11 * A22 - A12 * A21;
    const double b4 = (r1 * A22 - A12 * r2) / det;
    const double a5 = (A11 * r2 - r1 * A21) / det;

    const double scale = std::max({1.0, std::sqrt(std::abs(lambda)),
                                   std::sqrt(std::abs(b2) / w0)});
    const double delta = 1e-2 / scale;
    t0 = range.t0 + delta;
    const double d2 = sqr(delta);
    y0 = {delta + a3 * delta * d2 + a5 * delta * sqr(d2),
          1.0 + 3.0 * a3 * d2 + 5.0 * a5 * sqr(d2),
          init.w0 + b2 * d2 + b4 * sqr(d2),
          2.0 * b2 * delta + 4.0 * b4 * d2 * delta};
    range.tmin = t0;  // pole runs are one-sided
  } else {
    if (init.psi0 <= 0.0)
      throw Error(Errc::PoleSingularity, "psi(t0) <= 0: use pole data for series start");
    if (init.w0 <= 0.0) throw Error(Errc::DegenerateData, "w(t0) must be positive");
    y0 = {init.psi0, init.dpsi0, init.w0, init.dw0};
  }

  OdeSystem sys{4, [rhs](double t, const double* y, double* dy) { rhs(t, y, dy); }};
  std::vector<EventSpec> ev{
      {"w-zero", [](double, const double* y) { return y[2]; }},
      {"psi-zero", [](double, const double* y) { return y[0]; }},
  };

  auto mu_of = [rhs, n, m, lambda](const std::vector<double>& y) {
    const double lap = rhs.wdd(y.data()) + (n - 1) * (y[1] / y[0]) * y[3];
    return y[2] * lap + (m - 1.0) * sqr(y[3]) + lambda * sqr(y[2]);
  };
  spec.mu = init.pole ? init.mu : mu_of(y0);
  spec.mu_from = init.pole ? MuProvenance::Given : MuProvenance::FormulaDerived;

  Trajectory traj = run_bidirectional(sys, spec, "rotsym", {"psi", "dpsi", "w", "dw"},
                                      t0, y0, range, opts, ev);
  log_invariants(traj, mu_of, nullptr);
  return traj;
}

namespace {

struct DoublyRhs {
  double m, lambda;
  // state: (phi, dphi, psi, dpsi, w, dw)
  double phidd(const double* y) const {
    return -m * (y[5] / y[4]) * y[1] - y[1] * y[3] / y[2] - lambda * y[0];
  }
  double psidd(const double* y) const {
    return -m * (y[5] / y[4]) * y[3] - y[1] * y[3] / y[0] - lambda * y[2];
  }
  double wdd(const double* y) const {
    return (y[4] / m) * (-phidd(y) / y[0] - psidd(y) / y[2] - lambda);
  }
  void operator()(double, const double* y, double* dy) const {
    dy[0] = y[1];
    dy[1] = phidd(y);
    dy[2] = y[3];
    dy[3] = psidd(y);
    dy[4] = y[5];
    dy[5] = wdd(y);
  }
  double phiddd(const double* y) const {
    const double phi = y[0], dphi = y[1], psi = y[2], dpsi = y[3], w = y[4], dw = y[5];
    const double ddphi = phidd(y), ddpsi = psidd(y), ddw = wdd(y);
    return -m * ((ddw * w - sqr(dw)) / sqr(w)) * dphi - m * (dw / w) * ddphi -
           (ddphi * dpsi + dphi * ddpsi) / psi + dphi * sqr(dpsi) / sqr(psi) -
           lambda * dphi;
  }
  double psiddd(const double* y) const {
    const double phi = y[0], dphi = y[1], psi = y[2], dpsi = y[3], w = y[4], dw = y[5];
    const double ddphi = phidd(y), ddpsi = psidd(y), ddw = wdd(y);
    return -m * ((ddw * w - sqr(dw)) / sqr(w)) * dpsi - m * (dw / w) * ddpsi -
           (ddpsi * dphi + dpsi * ddphi) / phi + dpsi * sqr(dphi) / sqr(phi) -
           lambda * dpsi;
  }
  double wddd(const double* y) const {
    const double phi = y[0], dphi = y[1], psi = y[2], dpsi = y[3], w = y[4], dw = y[5];
    const double ddphi = phidd(y), ddpsi = psidd(y);
    const double dddphi = phiddd(y), dddpsi = psiddd(y);
    return (dw / m) * (-ddphi / phi - ddpsi / psi - lambda) +
           (w / m) * (-(dddphi * phi - ddphi * dphi) / sqr(phi) -
                      (dddpsi * psi - ddpsi * dpsi) / sqr(psi));
  }
};

}  // namespace

Trajectory solve_doubly_warped_3d(const ModelSpec& spec_in, double phi0, double dphi0,
                                  double psi0, double dpsi0, double w0, SolveRange range,
                                  const IntegratorOptions& opts) {
  ModelSpec spec = spec_in;
  spec.n = 3;
  if (phi0 <= 0.0 || psi0 <= 0.0 || w0 <= 0.0)
    throw Error(Errc::DegenerateData, "phi, psi, w must start positive");
  const double m = spec.m, lambda = spec.lambda;
  DoublyRhs rhs{m, lambda};

  std::vector<double> y0{phi0, dphi0, psi0, dpsi0, w0, 0.0};
  OdeSystem sys{6, [rhs](double t, const double* y, double* dy) { rhs(t, y, dy); }};
  std::vector<EventSpec> ev{
      {"w-zero", [](double, const double* y) { return y[4]; }},
      {"phi-zero", [](double, const double* y) { return y[0]; }},
      {"psi-zero", [](double, const double* y) { return y[2]; }},
  };

  auto mu_of = [rhs, m, lambda](const std::vector<double>& y) {
    const double lap = rhs.wdd(y.data()) + (y[1] / y[0] + y[3] / y[2]) * y[5];
    return y[4] * lap + (m - 1.0) * sqr(y[5]) + lambda * sqr(y[4]);
  };
  spec.mu = mu_of(y0);
  spec.mu_from = MuProvenance::FormulaDerived;

  Trajectory traj = run_bidirectional(
      sys, spec, "doubly", {"phi", "dphi", "psi", "dpsi", "w", "dw"}, range.t0, y0,
      range, opts, ev);
  log_invariants(traj, mu_of, nullptr);
  return traj;
}

Trajectory phase_plane_flow(int n, double m, double x0, double y0, double tspan,
                            bool backward, const IntegratorOptions& opts) {
  ModelSpec spec;
  spec.n = n;
  spec.m = m;
  OdeSystem sys{2, [n, m](double, const double* y, double* dy) {
                  const double x = y[0], yy = y[1];
                  dy[0] = -(n - 1) * x * x - m * x * yy;
                  dy[1] = -yy * yy + ((n - 1) / m) * (m * x * yy + (n - 2) * x * x);
                }};
  SolveRange range;
  range.t0 = 0.0;
  if (backward) {
    range.tmin = -tspan;
    range.tmax = 0.0;
  } else {
    range.tmin = 0.0;
    range.tmax = tspan;
  }
  Trajectory traj =
      run_bidirectional(sys, spec, "phase", {"x", "y"}, 0.0, {x0, y0}, range, opts, {});
  return traj;
}

ShootResult shoot(const std::function<double(double)>& objective, double lo, double hi,
                  double tol, int max_iter) {
  double flo = objective(lo), fhi = objective(hi);
  if (std::abs(flo) <= tol) return {lo, flo, 0};
  if (std::abs(fhi) <= tol) return {hi, fhi, 0};
  if ((flo < 0) == (fhi < 0))
    throw Error(Errc::NoBracket, "objective does not change sign over [lo, hi]");

  double a = lo, b = hi, fa = flo, fb = fhi;
  for (int it = 1; it <= max_iter; ++it) {
    // secant candidate, safeguarded by the bracket
    double c = b - fb * (b - a) / (fb - fa);
    const double mid = 0.5 * (a + b);
    if (!(c > std::min(a, b) && c < std::max(a, b))) c = mid;
    // alternate toward bisection when secant stalls
    if (it % 3 == 0) c = mid;
    const double fc = objective(c);
    if (std::abs(fc) <= tol) return {c, fc, it};
    if ((fa < 0) != (fc < 0)) {
      b = c;
      fb = fc;
    } else {
      a = c;
      fa = fc;
    }
    if (std::abs(b - a) < 1e-15 * std::max(1.0, std::abs(a) + std::abs(b))) {
      if (std::abs(fc) <= tol) return {c, fc, it};
      break;
    }
  }
  throw Error(Errc::MaxIterations, "shoot did not reach the target tolerance");
}

namespace {

std::shared_ptr<TrajectoryInterp> make_interp(const Trajectory& traj, OdeSystem sys) {
  auto copy = std::make_shared<Trajectory>(traj);
  return std::make_shared<TrajectoryInterp>(copy, std::move(sys));
}

}  // namespace

WarpedModel model_from_rotsym(const Trajectory& traj, double kappa_L, SpaceKind kind) {
  const ModelSpec& spec = traj.spec;
  RotsymRhs rhs{spec.n, spec.m, spec.lambda, kappa_L};
  auto interp = make_interp(
      traj, {4, [rhs](double t, const double* y, double* dy) { rhs(t, y, dy); }});
  Interval dom{traj.t.front(), traj.t.back()};

  WarpedModel model;
  model.spec = spec;
  model.link_kind = kind;
  model.kappa_L = kappa_L;
  model.psi = Profile(Profile::Kind::Sampled, dom, [interp, rhs](double t) {
    auto s = interp->state(t);
    return Jet{s[0], s[1], rhs.psidd(s.data()), rhs.psiddd(s.data())};
  });
  model.w = Profile(Profile::Kind::Sampled, dom, [interp, rhs](double t) {
    auto s = interp->state(t);
    return Jet{s[2], s[3], rhs.wdd(s.data()), rhs.wddd(s.data())};
  });
  return model;
}

WarpedModel model_from_surface(const Trajectory& traj) {
  const ModelSpec& spec = traj.spec;
  SurfaceRhs rhs{spec.m, spec.lambda, spec.mu.value_or(0.0)};
  auto interp = make_interp(
      traj, {2, [rhs](double t, const double* y, double* dy) { rhs(t, y, dy); }});
  Interval dom{traj.t.front(), traj.t.back()};

  WarpedModel model;
  model.spec = spec;
  model.link_kind = SpaceKind::Flat;  // one-dimensional link
  model.kappa_L = 0.0;
  model.psi = Profile(Profile::Kind::Sampled, dom, [interp, rhs](double t) {
    auto s = interp->state(t);
    return Jet{s[1], rhs.d2(s.data()), rhs.d3(s.data()), rhs.d4(s.data())};
  });
  model.w = Profile(Profile::Kind::Sampled, dom, [interp, rhs](double t) {
    auto s = interp->state(t);
    return Jet{s[0], s[1], rhs.d2(s.data()), rhs.d3(s.data())};
  });
  return model;
}

WarpedModel model_from_1d(const Trajectory& traj) {
  const ModelSpec& spec = traj.spec;
  const double k = spec.lambda / spec.m;
  OdeSystem sys{2, [k](double, const double* y, double* dy) {
                  dy[0] = y[1];
                  dy[1] = -k * y[0];
                }};
  auto interp = make_interp(traj, sys);
  Interval dom{traj.t.front(), traj.t.back()};

  WarpedModel model;
  model.spec = spec;
  model.link_kind = SpaceKind::Flat;
  model.kappa_L = 0.0;
  model.psi = Profile::constant(1.0, dom);
  model.w = Profile(Profile::Kind::Sampled, dom, [interp, k](double t) {
    auto s = interp->state(t);
    return Jet{s[0], s[1], -k * s[0], -k * s[1]};
  });
  return model;
}

DoublyWarpedModel model_from_doubly(const Trajectory& traj) {
  const ModelSpec& spec = traj.spec;
  DoublyRhs rhs{spec.m, spec.lambda};
  auto interp = make_interp(
      traj, {6, [rhs](double t, const double* y, double* dy) { rhs(t, y, dy); }});
  Interval dom{traj.t.front(), traj.t.back()};

  DoublyWarpedModel model;
  model.spec = spec;
  model.phi = Profile(Profile::Kind::Sampled, dom, [interp, rhs](double t) {
    auto s = interp->state(t);
    return Jet{s[0], s[1], rhs.phidd(s.data()), rhs.phiddd(s.data())};
  });
  model.psi = Profile(Profile::Kind::Sampled, dom, [interp, rhs](double t) {
    auto s = interp->state(t);
    return Jet{s[2], s[3], rhs.psidd(s.data()), rhs.psiddd(s.data())};
  });
  model.w = Profile(Profile::Kind::Sampled, dom, [interp, rhs](double t) {
    auto s = interp->state(t);
    return Jet{s[4], s[5], rhs.wdd(s.data()), rhs.wddd(s.data())};
  });
  return model;
}

}  // namespace wpe
