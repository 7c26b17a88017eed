#include "wpe/model.hpp"

#include <cmath>

#include "json.hpp"

namespace wpe {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::InvalidM: return "InvalidM";
    case Errc::InconsistentMu: return "InconsistentMu";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionTooLow: return "DimensionTooLow";
    case Errc::MEqualsOne: return "MEqualsOne";
    case Errc::DomainError: return "DomainError";
    case Errc::BoundaryEvaluation: return "BoundaryEvaluation";
    case Errc::SingularChart: return "SingularChart";
    case Errc::UnsupportedLink: return "UnsupportedLink";
    case Errc::NonIntegerM: return "NonIntegerM";
    case Errc::FiberMismatch: return "FiberMismatch";
    case Errc::DegenerateData: return "DegenerateData";
    case Errc::SmoothnessViolation: return "SmoothnessViolation";
    case Errc::PoleSingularity: return "PoleSingularity";
    case Errc::BlowUp: return "BlowUp";
    case Errc::NoBracket: return "NoBracket";
    case Errc::MaxIterations: return "MaxIterations";
    case Errc::NonCompactEntry: return "NonCompactEntry";
    case Errc::EmptyCell: return "EmptyCell";
    case Errc::UnknownId: return "UnknownId";
    case Errc::IoError: return "IoError";
  }
  return "Error";
}

const char* space_kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Sphere: return "sphere";
    case SpaceKind::Flat: return "flat";
    case SpaceKind::Hyperbolic: return "hyperbolic";
    case SpaceKind::AbstractEinstein: return "abstract-einstein";
  }
  return "sphere";
}

SpaceKind space_kind_from_name(const std::string& s) {
  if (s == "sphere") return SpaceKind::Sphere;
  if (s == "flat") return SpaceKind::Flat;
  if (s == "hyperbolic") return SpaceKind::Hyperbolic;
  if (s == "abstract-einstein") return SpaceKind::AbstractEinstein;
  throw Error(Errc::DomainError, "unknown fiber kind '" + s + "'");
}

ModelSpec validate_spec(ModelSpec spec) {
  if (spec.validated) return spec;
  if (spec.n < 1) throw Error(Errc::InvalidDimension, "n must be >= 1");
  if (!(spec.m > 0.0)) throw Error(Errc::InvalidM, "m must be > 0");

  const bool m_is_one = std::abs(spec.m - 1.0) < 1e-12;
  if (m_is_one) {
    spec.m1_aux = true;  // Delta w = -lambda w is part of the data when m = 1
    if (spec.mu && std::abs(*spec.mu) > 1e-12)
      throw Error(Errc::InconsistentMu, "m = 1 forces mu = 0");
    spec.mu = 0.0;
    if (spec.mu_from == MuProvenance::Unset) spec.mu_from = MuProvenance::FormulaDerived;
  }

  if (spec.boundary && spec.boundary_grad) {
    // mu = (m-1)|grad w|^2 on the boundary
    const double mu_b = (spec.m - 1.0) * sqr(*spec.boundary_grad);
    if (spec.mu && std::abs(*spec.mu - mu_b) > 1e-9 * (1.0 + std::abs(mu_b)))
      throw Error(Errc::InconsistentMu, "given mu contradicts boundary-derived value");
    if (!spec.mu) {
      spec.mu = mu_b;
      spec.mu_from = MuProvenance::BoundaryDerived;
    }
  }

  if (spec.m > 1.0 && spec.boundary && spec.mu && *spec.mu <= 0.0)
    throw Error(Errc::InconsistentMu, "m > 1 with boundary requires mu > 0");

  if (spec.mu && spec.mu_from == MuProvenance::Unset) spec.mu_from = MuProvenance::Given;
  spec.validated = true;
  return spec;
}

namespace {

Profile make_closed(Interval dom, std::function<Jet(double)> f) {
  return Profile(Profile::Kind::ClosedForm, dom, std::move(f));
}

}  // namespace

Profile Profile::constant(double c, Interval dom) {
  return make_closed(dom, [c](double) { return Jet{c, 0.0, 0.0, 0.0}; });
}

Profile Profile::linear(double slope, Interval dom) {
  return make_closed(dom, [slope](double t) { return Jet{slope * t, slope, 0.0, 0.0}; });
}

Profile Profile::cosine(double C, double k, Interval dom) {
  const double c = std::sqrt(k);
  return make_closed(dom, [C, c](double t) {
    const double s = std::sin(c * t), co = std::cos(c * t);
    return Jet{C * co, -C * c * s, -C * c * c * co, C * c * c * c * s};
  });
}

Profile Profile::sine_over_root(double k, Interval dom) {
  const double c = std::sqrt(k);
  return make_closed(dom, [c](double t) {
    const double s = std::sin(c * t), co = std::cos(c * t);
    return Jet{s / c, co, -c * s, -c * c * co};
  });
}

Profile Profile::sinh_scaled(double C, double c, Interval dom) {
  return make_closed(dom, [C, c](double t) {
    const double s = std::sinh(c * t), co = std::cosh(c * t);
    return Jet{C * s, C * c * co, C * c * c * s, C * c * c * c * co};
  });
}

Profile Profile::cosh_scaled(double C, double c, Interval dom) {
  return make_closed(dom, [C, c](double t) {
    const double s = std::sinh(c * t), co = std::cosh(c * t);
    return Jet{C * co, C * c * s, C * c * c * co, C * c * c * c * s};
  });
}

Profile Profile::cosh_over(double c, Interval dom) { return cosh_scaled(1.0 / c, c, dom); }
Profile Profile::sinh_over(double c, Interval dom) { return sinh_scaled(1.0 / c, c, dom); }

Profile Profile::exponential(double C, double c, Interval dom) {
  return make_closed(dom, [C, c](double t) {
    const double e = C * std::exp(c * t);
    return Jet{e, c * e, c * c * e, c * c * c * e};
  });
}

Profile Profile::perturbed(double eps) const {
  auto base = eval_;
  return Profile(kind_, domain_, [base, eps](double t) {
    Jet j = base(t);
    j.v += eps * t * t;
    j.d1 += 2.0 * eps * t;
    j.d2 += 2.0 * eps;
    return j;
  });
}

std::string spec_to_json(const ModelSpec& spec) {
  nlohmann::ordered_json j;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["lambda"] = spec.lambda;
  if (spec.mu)
    j["mu"] = *spec.mu;
  else
    j["mu"] = nullptr;
  j["fiber"] = nlohmann::ordered_json::object();
  j["fiber"]["kind"] = space_kind_name(spec.fiber_kind);
  if (spec.kappa_F)
    j["fiber"]["kappa"] = *spec.kappa_F;
  else
    j["fiber"]["kappa"] = nullptr;
  return j.dump();
}

ModelSpec spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw Error(Errc::IoError, std::string("bad spec json: ") + e.what());
  }
  ModelSpec spec;
  spec.n = j.at("n").get<int>();
  spec.m = j.at("m").get<double>();
  spec.lambda = j.at("lambda").get<double>();
  if (j.contains("mu") && !j["mu"].is_null()) spec.mu = j["mu"].get<double>();
  if (j.contains("fiber")) {
    const auto& f = j["fiber"];
    if (f.contains("kind")) spec.fiber_kind = space_kind_from_name(f["kind"].get<std::string>());
    if (f.contains("kappa") && !f["kappa"].is_null()) spec.kappa_F = f["kappa"].get<double>();
  }
  return spec;
}

}  // namespace wpe
