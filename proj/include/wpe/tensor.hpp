#pragma once

#include <vector>

#include "wpe/model.hpp"
#include "wpe/types.hpp"

namespace wpe {

// Symmetric bilinear form on an n-dimensional inner-product space,
// components in an orthonormal frame (so the metric is the identity).
class SymTensor2 {
public:
  SymTensor2() = default;
  explicit SymTensor2(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}
  static SymTensor2 identity(int n);
  static SymTensor2 diagonal(const std::vector<double>& d);

  int dim() const { return n_; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  void set(int i, int j, double v) {
    a_[static_cast<size_t>(i) * n_ + j] = v;
    a_[static_cast<size_t>(j) * n_ + i] = v;
  }

  double trace() const;
  double norm2() const;  // sum of squares of components
  double max_abs() const;
  std::vector<double> apply(const std::vector<double>& v) const;  // T(v, .)

  SymTensor2& operator+=(const SymTensor2& o);
  SymTensor2& operator-=(const SymTensor2& o);
  SymTensor2& operator*=(double s);
  friend SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
  friend SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
  friend SymTensor2 operator*(double s, SymTensor2 a) { return a *= s; }

private:
  int n_ = 0;
  std::vector<double> a_;
};

// Algebraic curvature tensor: components T(e_i, e_j, e_k, e_l) in an
// orthonormal frame. Constructors enforce nothing; Kulkarni-Nomizu products
// and linear combinations of them carry the symmetries by construction.
class CurvTensor4 {
public:
  CurvTensor4() = default;
  explicit CurvTensor4(int n)
      : n_(n), a_(static_cast<size_t>(n) * n * n * n, 0.0) {}

  int dim() const { return n_; }
  double operator()(int i, int j, int k, int l) const { return a_[idx(i, j, k, l)]; }
  void set(int i, int j, int k, int l, double v) { a_[idx(i, j, k, l)] = v; }

  double max_abs() const;
  // max violation of (1,2)/(3,4) antisymmetry, pair symmetry, first Bianchi
  double symmetry_residual() const;

  CurvTensor4& operator+=(const CurvTensor4& o);
  CurvTensor4& operator-=(const CurvTensor4& o);
  CurvTensor4& operator*=(double s);
  friend CurvTensor4 operator+(CurvTensor4 a, const CurvTensor4& b) { return a += b; }
  friend CurvTensor4 operator-(CurvTensor4 a, const CurvTensor4& b) { return a -= b; }
  friend CurvTensor4 operator*(double s, CurvTensor4 a) { return a *= s; }

private:
  size_t idx(int i, int j, int k, int l) const {
    return ((static_cast<size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_ = 0;
  std::vector<double> a_;
};

// (s . r)(X,Y,Z,W) = 1/2 ( r(X,W)s(Y,Z) + r(Y,Z)s(X,W) - r(X,Z)s(Y,W) - r(Y,W)s(X,Z) ).
// Note the 1/2 weight; some references omit it.
CurvTensor4 kulkarni_nomizu(const SymTensor2& s, const SymTensor2& r);

// X,Y -> sum_i T(X, e_i, e_i, Y); output symmetrized.
SymTensor2 ricci_contraction(const CurvTensor4& T, const SymTensor2& g);

// rho = ((n-1) lambda - scal)/(m-1),  P = Ric - rho g.  Throws MEqualsOne.
struct PTensor {
  double rho;
  SymTensor2 P;
};
PTensor p_tensor(const SymTensor2& ric, double scal, const ModelSpec& spec);

// Q = R + (2/m) Ric . g - ((lambda+rho)/m) g . g
CurvTensor4 q_tensor(const CurvTensor4& R, const SymTensor2& ric, const SymTensor2& g,
                     double rho, const ModelSpec& spec);

// Weyl and Schouten parts:
//   R = W + (2/(n-2)) Ric . g - (scal/((n-1)(n-2))) g . g
//   S = Ric - scal/(2(n-1)) g
// n = 3 returns the same formula's W (which must vanish for honest curvature
// tensors); flagged through `w_should_vanish`. Throws DimensionTooLow for n < 3.
struct WeylSchouten {
  CurvTensor4 W;
  SymTensor2 S;
  bool w_should_vanish;
};
WeylSchouten weyl_schouten(const CurvTensor4& R, const SymTensor2& ric, double scal,
                           const SymTensor2& g);

// Eigenvalues sorted ascending with multiplicity clustering. Clusters split at
// relative gaps larger than gap_rel * spectral radius.
struct EigenCluster {
  double value;       // cluster mean
  int multiplicity;
  double spread;      // max - min inside the cluster
};
struct SymEigen {
  std::vector<double> values;               // ascending
  std::vector<std::vector<double>> vectors; // vectors[k] belongs to values[k]
  std::vector<EigenCluster> clusters;
};
SymEigen sym_eigen(const SymTensor2& T, double gap_rel = 1e-6);

}  // namespace wpe
