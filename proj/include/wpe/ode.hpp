#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wpe/model.hpp"
#include "wpe/types.hpp"

namespace wpe {

enum class Termination { None, WZero, PsiZero, TMax, BlowUp, Stationary };
const char* termination_name(Termination t);

struct OdeSystem {
  int dim = 0;
  std::function<void(double t, const double* y, double* dy)> f;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double hmax = 0.05;   // also bounds dense-interpolation error
  double h0 = 0.0;      // 0 = automatic
  double blowup = 1e12;
  size_t max_steps = 2'000'000;
};

struct OdeEvent {
  std::string kind;  // "w-zero", "psi-zero", "phi-zero", "blow-up"
  double t = 0.0;
  std::vector<double> state;
};

struct EventSpec {
  std::string kind;
  std::function<double(double t, const double* y)> g;  // event at sign change of g
};

struct Trajectory {
  ModelSpec spec;
  std::string solver;
  std::vector<std::string> columns;  // state column names
  std::vector<double> t;
  std::vector<std::vector<double>> states;
  std::vector<double> mu_log;  // per-sample mu estimate (empty if n/a)
  std::vector<double> c_log;   // per-sample first-integral constant (empty if n/a)
  Termination termination = Termination::None;
  std::vector<OdeEvent> events;

  size_t size() const { return t.size(); }
  Interval trange() const { return {t.front(), t.back()}; }
  const OdeEvent* event(const std::string& kind) const;
};

struct IntegrationResult {
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  Termination termination = Termination::TMax;
  std::vector<OdeEvent> events;
};

// Embedded Dormand-Prince 5(4) with PI step-size control. Integrates from t0
// toward t1 (either direction); stops at the first event sign change, refined
// by bisection with re-stepping so the event state lies on the numerical
// solution. Components exceeding opts.blowup terminate the run cleanly.
IntegrationResult integrate(const OdeSystem& sys, double t0, std::vector<double> y0,
                            double t1, const IntegratorOptions& opts,
                            const std::vector<EventSpec>& events = {});

// Dense evaluation of a trajectory. State components are interpreted as
// (x, x') pairs; x is interpolated by a quintic Hermite built from
// (x, x', x'' = rhs) at the surrounding nodes and x' by its derivative.
class TrajectoryInterp {
public:
  TrajectoryInterp(std::shared_ptr<const Trajectory> traj, OdeSystem sys);
  std::vector<double> state(double t) const;
  Interval domain() const;

private:
  std::shared_ptr<const Trajectory> traj_;
  OdeSystem sys_;
  std::vector<std::vector<double>> f_;  // rhs at nodes
};

struct SolveRange {
  double t0 = 0.0;
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
};

// w'' = -(lambda/m) w on a 1-dimensional base; events at w = 0.
Trajectory solve_1d(const ModelSpec& spec, double w0, double dw0, SolveRange range,
                    const IntegratorOptions& opts = {});

// Surface reduction 2 w w'' + (m-1)(w')^2 + lambda w^2 = mu.
// Cartesian mode takes (w0 > 0, dw0) and mu from the spec. Polar mode takes
// w0 > 0, enforces w'(0) = 0, determines mu = lambda w0^2 + 2 w0 and asserts
// w''(0) = 1. The first integral constant
//   C = ((w')^2 - mu/(m-1) + lambda/(m+1) w^2) w^{m-1}
// is logged and monitored (m = 1 logs (w')^2 + (lambda/2) w^2 instead).
enum class SurfaceMode { Cartesian, Polar };
Trajectory solve_surface(const ModelSpec& spec, SurfaceMode mode, double w0, double dw0,
                         SolveRange range, const IntegratorOptions& opts = {});

// Unique nonnegative-slope solution of (w')^2 = 1 - w^{1-m}, w(0) = 1.
Trajectory schwarzschild_solve(double m, double tmax, const IntegratorOptions& opts = {});

// Rotationally symmetric reduction for g = dt^2 + psi^2 g_L:
//   psi'' = (kappa_L - (n-2) psi'^2)/psi - lambda psi - m (w'/w) psi'
//   w''   = (w/m) ( -(n-1) psi''/psi - lambda )
// Pole data means psi = 0, psi' = 1, w' = 0; the start is then produced by a
// series expansion parametrized by (w0, mu).
struct RotsymInit {
  bool pole = false;
  double psi0 = 1.0, dpsi0 = 0.0;
  double w0 = 1.0, dw0 = 0.0;
  double mu = 0.0;  // pole mode only
};
Trajectory solve_rotsym(const ModelSpec& spec, double kappa_L, const RotsymInit& init,
                        SolveRange range, const IntegratorOptions& opts = {});

// Doubly warped 3-manifold dr^2 + phi^2 dtheta1^2 + psi^2 dtheta2^2 with
// w'(0) = 0.
Trajectory solve_doubly_warped_3d(const ModelSpec& spec, double phi0, double dphi0,
                                  double psi0, double dpsi0, double w0, SolveRange range,
                                  const IntegratorOptions& opts = {});

// Planar flow x' = -(n-1)x^2 - m x y,  y' = -y^2 + ((n-1)/m)(m x y + (n-2)x^2).
Trajectory phase_plane_flow(int n, double m, double x0, double y0, double tspan,
                            bool backward, const IntegratorOptions& opts = {});

// Bisection/secant refinement of a scalar parameter until objective(p) = 0
// within tol. objective(lo) and objective(hi) must bracket a sign change.
struct ShootResult {
  double param = 0.0;
  double objective = 0.0;
  int iterations = 0;
};
ShootResult shoot(const std::function<double(double)>& objective, double lo, double hi,
                  double tol = 1e-8, int max_iter = 200);

// Models backed by trajectories (profiles carry analytic d2/d3 from the ODE).
WarpedModel model_from_rotsym(const Trajectory& traj, double kappa_L,
                              SpaceKind link_kind = SpaceKind::Sphere);
WarpedModel model_from_surface(const Trajectory& traj);  // psi = w'
DoublyWarpedModel model_from_doubly(const Trajectory& traj);
WarpedModel model_from_1d(const Trajectory& traj);

}  // namespace wpe
