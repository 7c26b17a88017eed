#include "wpe/tensor.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace wpe {

SymTensor2 SymTensor2::identity(int n) {
  SymTensor2 g(n);
  for (int i = 0; i < n; ++i) g.set(i, i, 1.0);
  return g;
}

SymTensor2 SymTensor2::diagonal(const std::vector<double>& d) {
  SymTensor2 t(static_cast<int>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) t.set(static_cast<int>(i), static_cast<int>(i), d[i]);
  return t;
}

double SymTensor2::trace() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += (*this)(i, i);
  return s;
}

double SymTensor2::norm2() const {
  double s = 0.0;
  for (double x : a_) s += x * x;
  return s;
}

double SymTensor2::max_abs() const {
  double s = 0.0;
  for (double x : a_) s = std::max(s, std::abs(x));
  return s;
}

std::vector<double> SymTensor2::apply(const std::vector<double>& v) const {
  std::vector<double> out(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

SymTensor2& SymTensor2::operator+=(const SymTensor2& o) {
  if (o.n_ != n_) throw Error(Errc::DimensionMismatch, "SymTensor2 +=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}
SymTensor2& SymTensor2::operator-=(const SymTensor2& o) {
  if (o.n_ != n_) throw Error(Errc::DimensionMismatch, "SymTensor2 -=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}
SymTensor2& SymTensor2::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

double CurvTensor4::max_abs() const {
  double s = 0.0;
  for (double x : a_) s = std::max(s, std::abs(x));
  return s;
}

double CurvTensor4::symmetry_residual() const {
  double r = 0.0;
  const auto& T = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) {
          r = std::max(r, std::abs(T(i, j, k, l) + T(j, i, k, l)));
          r = std::max(r, std::abs(T(i, j, k, l) + T(i, j, l, k)));
          r = std::max(r, std::abs(T(i, j, k, l) - T(k, l, i, j)));
          r = std::max(r, std::abs(T(i, j, k, l) + T(j, k, i, l) + T(k, i, j, l)));
        }
  return r;
}

CurvTensor4& CurvTensor4::operator+=(const CurvTensor4& o) {
  if (o.n_ != n_) throw Error(Errc::DimensionMismatch, "CurvTensor4 +=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}
CurvTensor4& CurvTensor4::operator-=(const CurvTensor4& o) {
  if (o.n_ != n_) throw Error(Errc::DimensionMismatch, "CurvTensor4 -=");
  for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}
CurvTensor4& CurvTensor4::operator*=(double s) {
  for (double& x : a_) x *= s;
  return *this;
}

CurvTensor4 kulkarni_nomizu(const SymTensor2& s, const SymTensor2& r) {
  const int n = s.dim();
  if (r.dim() != n) throw Error(Errc::DimensionMismatch, "kulkarni_nomizu");
  CurvTensor4 T(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = 0.5 * (r(i, l) * s(j, k) + r(j, k) * s(i, l) -
                                  r(i, k) * s(j, l) - r(j, l) * s(i, k));
          T.set(i, j, k, l, v);
        }
  return T;
}

SymTensor2 ricci_contraction(const CurvTensor4& T, const SymTensor2& g) {
  const int n = T.dim();
  if (g.dim() != n) throw Error(Errc::DimensionMismatch, "ricci_contraction");
  SymTensor2 out(n);
  for (int x = 0; x < n; ++x)
    for (int y = x; y < n; ++y) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += 0.5 * (T(x, i, i, y) + T(y, i, i, x));
      out.set(x, y, s);
    }
  return out;
}

PTensor p_tensor(const SymTensor2& ric, double scal, const ModelSpec& spec) {
  if (std::abs(spec.m - 1.0) < 1e-12)
    throw Error(Errc::MEqualsOne, "rho has an (m-1) denominator");
  const int n = ric.dim();
  const double rho = ((n - 1) * spec.lambda - scal) / (spec.m - 1.0);
  SymTensor2 P = ric - rho * SymTensor2::identity(n);
  return {rho, std::move(P)};
}

CurvTensor4 q_tensor(const CurvTensor4& R, const SymTensor2& ric, const SymTensor2& g,
                     double rho, const ModelSpec& spec) {
  const int n = R.dim();
  if (ric.dim() != n || g.dim() != n) throw Error(Errc::DimensionMismatch, "q_tensor");
  const double m = spec.m;
  CurvTensor4 Q = R;
  Q += (2.0 / m) * kulkarni_nomizu(ric, g);
  Q -= ((spec.lambda + rho) / m) * kulkarni_nomizu(g, g);
  return Q;
}

WeylSchouten weyl_schouten(const CurvTensor4& R, const SymTensor2& ric, double scal,
                           const SymTensor2& g) {
  const int n = R.dim();
  if (n < 3) throw Error(Errc::DimensionTooLow, "Weyl/Schouten need n >= 3");
  WeylSchouten out{CurvTensor4(n), SymTensor2(n), n == 3};
  out.W = R;
  out.W -= (2.0 / (n - 2)) * kulkarni_nomizu(ric, g);
  out.W += (scal / static_cast<double>((n - 1) * (n - 2))) * kulkarni_nomizu(g, g);
  out.S = ric - (scal / (2.0 * (n - 1))) * SymTensor2::identity(n);
  return out;
}

SymEigen sym_eigen(const SymTensor2& T, double gap_rel) {
  const int n = T.dim();
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = T(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);

  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = es.eigenvalues()(i);
    out.vectors[i].resize(n);
    for (int j = 0; j < n; ++j) out.vectors[i][j] = es.eigenvectors()(j, i);
  }

  double radius = 0.0;
  for (double v : out.values) radius = std::max(radius, std::abs(v));
  const double gap = gap_rel * radius + 1e-300;

  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || out.values[i] - out.values[i - 1] > gap) {
      EigenCluster c;
      c.multiplicity = i - start;
      c.spread = out.values[i - 1] - out.values[start];
      double sum = 0.0;
      for (int k = start; k < i; ++k) sum += out.values[k];
      c.value = sum / c.multiplicity;
      out.clusters.push_back(c);
      start = i;
    }
  }
  return out;
}

}  // namespace wpe
