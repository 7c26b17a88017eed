#include "wpe/catalog.hpp"

#include <cmath>

#include "wpe/ode.hpp"

namespace wpe {

Sign sign_of(double x) { return x > 0 ? Sign::Pos : (x < 0 ? Sign::Neg : Sign::Zero); }

const char* sign_tag(Sign s) {
  switch (s) {
    case Sign::Pos: return "pos";
    case Sign::Zero: return "zero";
    case Sign::Neg: return "neg";
  }
  return "zero";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelSpec base_spec(int n, double m, double lambda, double mu) {
  ModelSpec s;
  s.n = n;
  s.m = m;
  s.lambda = lambda;
  s.mu = mu;
  s.mu_from = MuProvenance::FormulaDerived;
  return validate_spec(s);
}

}  // namespace

CatalogEntry table1(Sign ls, Sign ms_, double m, double C, double lambda_mag) {
  if ((ls == Sign::Pos && ms_ != Sign::Pos) || (ls == Sign::Zero && ms_ == Sign::Neg))
    throw Error(Errc::EmptyCell, "no one-dimensional family in this (lambda, mu) cell");
  if (!(m > 0)) throw Error(Errc::InvalidM, "m must be > 0");
  const bool m1 = std::abs(m - 1.0) < 1e-12;
  if (m1 && ms_ != Sign::Zero)
    throw Error(Errc::EmptyCell, "m = 1 forces mu = 0");

  const double k = (ls == Sign::Zero) ? 0.0 : (lambda_mag > 0 ? lambda_mag / m : 1.0) *
                                                  (ls == Sign::Pos ? 1.0 : -1.0);
  const double lambda = m * k;
  const double c = std::sqrt(std::abs(k));

  CatalogEntry e;
  e.id = std::string("table1-") + sign_tag(ls) + "-" + sign_tag(ms_);
  e.provenance = "one-dimensional family, cell (" + std::string(sign_tag(ls)) + ", " +
                 sign_tag(ms_) + ")";
  double mu = 0.0;
  Profile w;
  Interval dom;

  if (ls == Sign::Pos) {  // mu > 0: w = C cos(sqrt(k) t) on [-pi/2c, pi/2c]
    if (C <= 0) C = 1.0 / c;  // mu = (m-1) C^2 k = m-1
    dom = {-M_PI / (2 * c), M_PI / (2 * c)};
    w = Profile::cosine(C, k, dom);
    mu = (m - 1.0) * C * C * k;
    e.compact = true;
    e.expected["t_boundary"] = M_PI / (2 * c);
  } else if (ls == Sign::Zero) {
    if (ms_ == Sign::Pos) {  // w = C t on [0, inf)
      if (C <= 0) C = 1.0;
      dom = {0.0, kInf};
      w = Profile::linear(C, dom);
      mu = (m - 1.0) * C * C;
    } else {  // trivial: w = C on R
      if (C <= 0) C = 1.0;
      dom = {-kInf, kInf};
      w = Profile::constant(C, dom);
      mu = 0.0;
    }
  } else {  // lambda < 0
    if (ms_ == Sign::Pos) {  // w = C sinh(ct) on [0, inf)
      if (C <= 0) C = 1.0 / c;
      dom = {0.0, kInf};
      w = Profile::sinh_scaled(C, c, dom);
      mu = (m - 1.0) * C * C * c * c;
    } else if (ms_ == Sign::Zero) {  // w = C e^{ct} on R
      if (C <= 0) C = 1.0;
      dom = {-kInf, kInf};
      w = Profile::exponential(C, c, dom);
      mu = 0.0;
    } else {  // w = C cosh(ct) on R
      if (C <= 0) C = 1.0 / c;
      dom = {-kInf, kInf};
      w = Profile::cosh_scaled(C, c, dom);
      mu = -(m - 1.0) * C * C * c * c;
    }
  }

  e.model.spec = base_spec(1, m, lambda, mu);
  if (e.compact) {
    e.model.spec.boundary = true;
    e.model.spec.boundary_grad = C * c;
  } else if (ls != Sign::Pos && ms_ == Sign::Pos) {
    e.model.spec.boundary = true;  // w = 0 at t = 0
    e.model.spec.boundary_grad = (ls == Sign::Zero) ? C : C * c;
  }
  e.model.w = w;
  e.model.psi = Profile::constant(1.0, dom);
  e.model.origin = e.model.spec.boundary ? OriginType::Boundary : OriginType::InteriorLevelSet;
  e.expected["mu"] = mu;
  e.expected["C"] = C;
  e.expected["k"] = k;
  if (dom.bounded())
    e.sample_window = dom;
  else
    e.sample_window = {std::isfinite(dom.lo) ? dom.lo : -3.0, std::isfinite(dom.hi) ? dom.hi : 3.0};
  return e;
}

CatalogEntry table2(Sign ls, Sign ms_, int n, double m, double C, double lambda_mag) {
  if (n < 2) throw Error(Errc::InvalidDimension, "table2 needs n >= 2");
  if (!(m >= 1.0)) throw Error(Errc::InvalidM, "table2 needs m >= 1");
  if ((ls == Sign::Pos && ms_ != Sign::Pos) || (ls == Sign::Zero && ms_ != Sign::Pos))
    throw Error(Errc::EmptyCell, "no rho-Einstein family in this (lambda, mu) cell");
  const bool m1 = std::abs(m - 1.0) < 1e-12;
  if (m1 && ms_ != Sign::Pos)
    throw Error(Errc::EmptyCell, "m = 1 entries carry mu = 0; only the disk-type cells remain");

  const double kbar = (ls == Sign::Zero)
                          ? 0.0
                          : (lambda_mag > 0 ? lambda_mag / (m + n - 1) : 1.0) *
                                (ls == Sign::Pos ? 1.0 : -1.0);
  const double lambda = (m + n - 1) * kbar;
  const double rho = (n - 1) * kbar;
  const double c = std::sqrt(std::abs(kbar));

  CatalogEntry e;
  e.id = std::string("table2-") + sign_tag(ls) + "-" + sign_tag(ms_);
  e.provenance = "rho-Einstein family, cell (" + std::string(sign_tag(ls)) + ", " +
                 sign_tag(ms_) + ")";

  Profile w, psi;
  Interval dom;
  double mu = 0.0;
  SpaceKind link = SpaceKind::Sphere;
  double kappa_L = 0.0;
  OriginType origin = OriginType::InteriorLevelSet;
  bool boundary = false;

  if (ls == Sign::Pos) {
    // disk: g = dt^2 + (sin^2(ct)/kbar) g_{S^{n-1}},  w = C cos(ct)
    if (C <= 0) C = 1.0 / c;
    dom = {0.0, M_PI / (2 * c)};
    psi = Profile::sine_over_root(kbar, dom);
    w = Profile::cosine(C, kbar, dom);
    mu = m1 ? 0.0 : (m - 1.0) * C * C * kbar;
    link = SpaceKind::Sphere;
    kappa_L = n - 2;
    origin = OriginType::Pole;
    boundary = !m1;
    e.compact = true;
    e.expected["t_boundary"] = M_PI / (2 * c);
  } else if (ls == Sign::Zero) {
    // [0, inf) x F: g = dt^2 + g_F (F Ricci flat), w = C t
    if (C <= 0) C = 1.0;
    dom = {0.0, kInf};
    psi = Profile::constant(1.0, dom);
    w = Profile::linear(C, dom);
    mu = (m - 1.0) * C * C;
    link = SpaceKind::Flat;
    kappa_L = 0.0;
    origin = OriginType::Boundary;
    boundary = !m1;
  } else if (ms_ == Sign::Pos) {
    // [0, inf) x N: g = dt^2 + (cosh^2(ct)/(-kbar)) g_N,  w = C sinh(ct)
    if (C <= 0) C = 1.0 / c;
    dom = {0.0, kInf};
    psi = Profile::cosh_over(c, dom);
    w = Profile::sinh_scaled(C, c, dom);
    mu = m1 ? 0.0 : (m - 1.0) * C * C * c * c;
    link = SpaceKind::Hyperbolic;
    kappa_L = -(n - 2);
    origin = OriginType::Boundary;
    boundary = !m1;
  } else if (ms_ == Sign::Zero) {
    // R x F: g = dt^2 + e^{2ct} g_F,  w = C e^{ct}
    if (C <= 0) C = 1.0;
    dom = {-kInf, kInf};
    psi = Profile::exponential(1.0, c, dom);
    w = Profile::exponential(C, c, dom);
    mu = 0.0;
    link = SpaceKind::Flat;
    kappa_L = 0.0;
  } else {
    // hyperbolic space: g = dt^2 + (sinh^2(ct)/(-kbar)) g_{S^{n-1}},  w = C cosh(ct)
    if (C <= 0) C = 1.0 / c;
    dom = {0.0, kInf};
    psi = Profile::sinh_over(c, dom);
    w = Profile::cosh_scaled(C, c, dom);
    mu = -(m - 1.0) * C * C * c * c;
    link = SpaceKind::Sphere;
    kappa_L = n - 2;
    origin = OriginType::Pole;
  }

  e.model.spec = base_spec(n, m, lambda, mu);
  e.model.spec.boundary = boundary;
  if (boundary) e.model.spec.boundary_grad = (ls == Sign::Zero) ? C : C * c;
  e.model.w = w;
  e.model.psi = psi;
  e.model.link_kind = link;
  e.model.kappa_L = kappa_L;
  e.model.origin = origin;
  e.expected["mu"] = mu;
  e.expected["rho"] = rho;
  e.expected["kbar"] = kbar;
  e.expected["C"] = C;
  if (dom.bounded())
    e.sample_window = dom;
  else
    e.sample_window = {std::isfinite(dom.lo) ? dom.lo : -2.0,
                       std::isfinite(dom.hi) ? dom.hi : 2.0};
  return e;
}

CatalogEntry schwarzschild_entry(double m, double tmax) {
  if (!(m > 1.0)) throw Error(Errc::InvalidM, "schwarzschild needs m > 1");
  IntegratorOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  Trajectory traj = schwarzschild_solve(m, tmax, opts);

  CatalogEntry e;
  e.id = "schwarzschild-m" + std::to_string(static_cast<int>(std::round(m)));
  if (std::abs(m - std::round(m)) > 1e-9) e.id = "schwarzschild-m*";
  e.provenance = "generalized Schwarzschild surface, (w')^2 = 1 - w^{1-m}";
  e.model = model_from_surface(traj);
  e.model.origin = OriginType::Pole;
  e.expected["mu"] = m - 1.0;
  e.expected["C"] = -1.0;  // (w')^2 = 1 + C w^{1-m}
  e.compact = false;
  // keep away from the psi = w' = 0 axis at t = 0
  e.sample_window = {0.3, tmax - 0.1};
  return e;
}

CatalogEntry trivial_entry(double lambda, int n, double m) {
  CatalogEntry e;
  Profile psi, w;
  Interval dom;
  SpaceKind link = SpaceKind::Sphere;
  double kappa_L = 0.0;
  if (lambda > 0) {
    // round sphere of Einstein constant lambda: sec = lambda/(n-1)
    const double k = lambda / (n - 1);
    const double c = std::sqrt(k);
    dom = {0.0, M_PI / c};
    psi = Profile::sine_over_root(k, dom);
    kappa_L = n - 2;
    e.compact = true;
  } else if (lambda == 0) {
    dom = {0.0, kInf};
    psi = Profile::linear(1.0, dom);
    kappa_L = n - 2;
  } else {
    const double c = std::sqrt(-lambda / (n - 1));
    dom = {0.0, kInf};
    psi = Profile::sinh_over(c, dom);
    kappa_L = n - 2;
  }
  w = Profile::constant(1.0, dom);
  e.id = "trivial-l" + std::to_string(static_cast<int>(std::round(lambda)));
  e.provenance = "trivial solution: constant w over a lambda-Einstein base";
  e.model.spec = base_spec(n, m, lambda, lambda);  // mu = lambda w^2 = lambda
  e.model.psi = psi;
  e.model.w = w;
  e.model.link_kind = link;
  e.model.kappa_L = kappa_L;
  e.model.origin = OriginType::Pole;
  e.expected["mu"] = lambda;
  if (e.compact) {
    const double c = std::sqrt(lambda / (n - 1));
    e.sample_window = {0.0, M_PI / c};
  } else {
    e.sample_window = {0.0, 2.0};
  }
  return e;
}

GaussianFamily gaussian_limit_family(double lambda, int n, const std::vector<double>& ms,
                                     double window) {
  if (lambda == 0.0) throw Error(Errc::DomainError, "gaussian family needs lambda != 0");
  GaussianFamily fam;
  fam.lambda = lambda;
  fam.n = n;
  fam.ms = ms;
  fam.window = window;
  for (double m : ms) {
    CatalogEntry e = lambda > 0 ? table2(Sign::Pos, Sign::Pos, n, m, 1.0, std::abs(lambda))
                                : table2(Sign::Neg, Sign::Neg, n, m, 1.0, std::abs(lambda));
    e.id = "gaussian-m" + std::to_string(static_cast<long long>(std::llround(m)));
    fam.entries.push_back(e);

    // sup over |t| <= window of |w^m - e^{-lambda t^2 / 2}| (w is even in t)
    double sup = 0.0;
    const int N = 400;
    for (int i = 0; i <= N; ++i) {
      const double t = window * i / N;
      const Jet w = e.model.w(t);
      const double wm = std::exp(m * std::log(w.v));
      sup = std::max(sup, std::abs(wm - std::exp(-0.5 * lambda * t * t)));
    }
    fam.sup_dist.push_back(sup);
  }
  return fam;
}

namespace {

const std::vector<std::string>& default_ids() {
  static const std::vector<std::string> ids = {
      "table1-pos-pos", "table1-zero-pos", "table1-neg-pos", "table1-zero-zero",
      "table1-neg-zero", "table1-neg-neg", "table2-pos-pos", "table2-zero-pos",
      "table2-neg-pos", "table2-neg-zero", "table2-neg-neg", "schwarzschild-m2",
      "schwarzschild-m3", "trivial-l0", "trivial-l1", "trivial-l2", "trivial-l-2",
      "gaussian-family"};
  return ids;
}

}  // namespace

std::vector<std::string> catalog_ids() { return default_ids(); }

bool catalog_has(const std::string& id) {
  for (const auto& s : default_ids())
    if (s == id) return true;
  return false;
}

CatalogEntry catalog_get(const std::string& id) {
  auto parse_signs = [&](const std::string& rest) -> std::pair<Sign, Sign> {
    const auto dash = rest.find('-');
    if (dash == std::string::npos) throw Error(Errc::UnknownId, id);
    auto from_tag = [&](const std::string& t) {
      if (t == "pos") return Sign::Pos;
      if (t == "zero") return Sign::Zero;
      if (t == "neg") return Sign::Neg;
      throw Error(Errc::UnknownId, id);
    };
    return {from_tag(rest.substr(0, dash)), from_tag(rest.substr(dash + 1))};
  };

  if (id.rfind("table1-", 0) == 0) {
    auto [ls, ms_] = parse_signs(id.substr(7));
    return table1(ls, ms_, 3.0);
  }
  if (id.rfind("table2-", 0) == 0) {
    auto [ls, ms_] = parse_signs(id.substr(7));
    return table2(ls, ms_, 3, 2.0);
  }
  if (id == "schwarzschild-m2") return schwarzschild_entry(2.0);
  if (id == "schwarzschild-m3") return schwarzschild_entry(3.0);
  if (id == "trivial-l0") return trivial_entry(0.0, 3, 2.0);
  if (id == "trivial-l1") return trivial_entry(1.0, 2, 2.0);
  if (id == "trivial-l2") return trivial_entry(2.0, 3, 2.0);
  if (id == "trivial-l-2") return trivial_entry(-2.0, 3, 2.0);
  throw Error(Errc::UnknownId, id);
}

double parameter_of_w(const CatalogEntry& entry, double r) {
  const Profile& w = entry.model.w;
  double lo = entry.sample_window.lo, hi = entry.sample_window.hi;
  double flo = w(lo).v - r, fhi = w(hi).v - r;
  if ((flo < 0) == (fhi < 0))
    throw Error(Errc::DomainError, "w does not attain this value on the sample window");
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = w(mid).v - r;
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace wpe
