#pragma once

#include <functional>
#include <vector>

#include "wpe/model.hpp"
#include "wpe/tensor.hpp"

namespace wpe {

// Metric (and optionally w) as smooth evaluators on an explicit coordinate
// chart. Components row-major dim x dim.
struct ChartMetric {
  int dim = 0;
  std::function<void(const double* x, double* g)> metric;
  std::function<double(const double* x)> w;  // may be empty
};

// A chart together with a canonical evaluation point builder: point(t) places
// the radial coordinate at t and the remaining coordinates at fixed generic
// values away from chart degeneracies.
struct Chart {
  ChartMetric metric;
  std::function<std::vector<double>(double t)> point;
};

// Curvature from centered finite differences of the metric components
// (Christoffel symbols from first derivatives, curvature from second), one
// Richardson extrapolation in h. Output components in an orthonormal frame
// built from the exact metric at the point. Convention: the unit round
// sphere has R = g . g and Ric(X,Y) = sum_i R(X, e_i, e_i, Y) = (n-1) g.
struct OracleCurvature {
  int dim = 0;
  SymTensor2 ric;
  double scal = 0.0;
  CurvTensor4 R;
  SymTensor2 hessw;  // zero when the chart has no w
};
OracleCurvature fd_curvature_oracle(const ChartMetric& chart, const std::vector<double>& x,
                                    double h = 1e-4, bool richardson = true);

// Covariant divergence of a symmetric 2-tensor field (coordinate evaluator),
// returned in frame components: (div T)_a = g^{bc} (nabla_b T)_{c j} E^j_a.
std::vector<double> fd_divergence2(const ChartMetric& chart,
                                   const std::function<void(const double*, double*)>& T,
                                   const std::vector<double>& x, double h = 1e-4);

// Covariant divergence of a (0,4) tensor field contracting the 4th slot,
// frame components flattened as [i*dim*dim + j*dim + k].
std::vector<double> fd_divergence4(const ChartMetric& chart,
                                   const std::function<void(const double*, double*)>& T,
                                   const std::vector<double>& x, double h = 1e-4);

// Max frame component of the Codazzi deficiency of the Schouten tensor,
// (nabla_i S)_jk - (nabla_j S)_ik, with S itself assembled from oracle
// curvature at stencil points (nested differences).
double fd_cotton_residual(const ChartMetric& chart, const std::vector<double>& x,
                          double h = 1e-3);

// Charts. Link/fiber space forms are realized in conformally flat charts
// (stereographic sphere, Cartesian plane, Poincare ball).
Chart cohomog1_chart(const WarpedModel& model);
Chart conformal_chart(const WarpedModel& model);        // gtilde = w^{-2} g
Chart total_space_chart(const WarpedModel& model);      // g + w^2 g_F, integer m
Chart doubly_warped_chart(const DoublyWarpedModel& model);
Chart schwarzschild_r_chart(double m);  // (1-r^{1-m})^{-1} dr^2 + (1-r^{1-m}) du^2 + r^2 g_{S^m}

// Certification sweep: warped_curvature against the oracle at the given
// sample parameters; max componentwise deviation. Parallelized over samples.
CheckReport certify_curvature(const WarpedModel& model, const std::vector<double>& ts,
                              double tol, bool parallel = true);

}  // namespace wpe
