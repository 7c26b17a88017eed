#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wpe/types.hpp"

namespace wpe {

enum class SpaceKind { Sphere, Flat, Hyperbolic, AbstractEinstein };
enum class MuProvenance { Unset, Given, BoundaryDerived, FormulaDerived };
enum class OriginType { Pole, Boundary, InteriorLevelSet };

const char* space_kind_name(SpaceKind k);
SpaceKind space_kind_from_name(const std::string& s);

// Parameter tuple (n, m, lambda) plus fiber data. Immutable after validation.
struct ModelSpec {
  int n = 2;          // base dimension, >= 1
  double m = 2.0;     // fiber-dimension parameter, > 0
  double lambda = 0.0;
  std::optional<double> mu;
  MuProvenance mu_from = MuProvenance::Unset;
  SpaceKind fiber_kind = SpaceKind::Sphere;
  std::optional<double> kappa_F;  // fiber Einstein constant, never inferred
  bool boundary = false;          // a w = 0 locus is part of the model
  std::optional<double> boundary_grad;  // |w'| at the boundary, when known
  bool m1_aux = false;  // m = 1: the auxiliary condition  Delta w = -lambda w  is active
  bool validated = false;

  bool m_is_integer(double tol = 1e-9) const {
    return std::abs(m - std::round(m)) <= tol;
  }
};

// validate_spec fills mu in when derivable and rejects inconsistent data.
// Throws Error{InvalidDimension, InvalidM, InconsistentMu}.
ModelSpec validate_spec(ModelSpec spec);

// Scalar function of one variable with derivatives, closed-form or sampled.
class Profile {
public:
  enum class Kind { ClosedForm, Sampled };

  Profile() = default;
  Profile(Kind kind, Interval domain, std::function<Jet(double)> eval)
      : kind_(kind), domain_(domain), eval_(std::move(eval)) {}

  Jet operator()(double t) const { return eval_(t); }
  Jet at(double t) const {
    if (!domain_.contains(t)) throw Error(Errc::DomainError, "t outside profile domain");
    return eval_(t);
  }

  Kind kind() const { return kind_; }
  const Interval& domain() const { return domain_; }
  bool valid() const { return static_cast<bool>(eval_); }

  // Common closed forms. k > 0 where a square root is taken.
  static Profile constant(double c, Interval dom = {-1e300, 1e300});
  static Profile linear(double slope, Interval dom);          // slope * t
  static Profile cosine(double C, double k, Interval dom);    // C cos(sqrt(k) t)
  static Profile sine_over_root(double k, Interval dom);      // sin(sqrt(k) t)/sqrt(k)
  static Profile sinh_scaled(double C, double c, Interval dom);   // C sinh(c t)
  static Profile cosh_scaled(double C, double c, Interval dom);   // C cosh(c t)
  static Profile cosh_over(double c, Interval dom);               // cosh(c t)/c
  static Profile sinh_over(double c, Interval dom);               // sinh(c t)/c
  static Profile exponential(double C, double c, Interval dom);   // C e^{c t}

  // value shifted by  eps * t^2  (negative-control perturbation)
  Profile perturbed(double eps) const;

private:
  Kind kind_ = Kind::ClosedForm;
  Interval domain_{};
  std::function<Jet(double)> eval_;
};

// Cohomogeneity-one model  g = dt^2 + psi^2(t) g_L,  w = w(t).
// For n = 1 there is no link; psi is ignored and should be the constant 1.
struct WarpedModel {
  ModelSpec spec;
  Profile psi;
  Profile w;
  SpaceKind link_kind = SpaceKind::Sphere;
  double kappa_L = 0.0;  // link Einstein constant (dimension n-1)
  OriginType origin = OriginType::InteriorLevelSet;

  double mu() const { return spec.mu.value_or(0.0); }
  int n() const { return spec.n; }
  double m() const { return spec.m; }
  double lambda() const { return spec.lambda; }
  bool space_form_link() const {
    return spec.n <= 2 || link_kind != SpaceKind::AbstractEinstein;
  }
  // unit-normalized link sectional curvature (n >= 3 space forms)
  double link_sec() const { return spec.n >= 3 ? kappa_L / (spec.n - 2) : 0.0; }
};

// Doubly warped 3-manifold  g = dr^2 + phi^2 dtheta1^2 + psi^2 dtheta2^2.
struct DoublyWarpedModel {
  ModelSpec spec;  // n = 3
  Profile phi;
  Profile psi;
  Profile w;
};

// Result of one named identity check.
struct CheckReport {
  std::string name;
  std::string target;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  int samples = 0;
  std::string notes;

  static CheckReport make(std::string name, std::string target, double residual,
                          double tolerance, int samples, std::string notes = "") {
    CheckReport r;
    r.name = std::move(name);
    r.target = std::move(target);
    r.residual = residual;
    r.tolerance = tolerance;
    r.passed = residual <= tolerance;
    r.samples = samples;
    r.notes = std::move(notes);
    return r;
  }
};

// JSON round trip for specs; field names are part of the CLI contract:
// {n, m, lambda, mu, fiber:{kind, kappa}}
std::string spec_to_json(const ModelSpec& spec);
ModelSpec spec_from_json(const std::string& text);

}  // namespace wpe
