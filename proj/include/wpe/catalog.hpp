#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wpe/model.hpp"

namespace wpe {

enum class Sign { Neg = -1, Zero = 0, Pos = 1 };
Sign sign_of(double x);
const char* sign_tag(Sign s);  // "pos" / "zero" / "neg"

struct CatalogEntry {
  std::string id;
  std::string provenance;  // where the family comes from
  WarpedModel model;
  std::map<std::string, double> expected;  // mu, rho, kbar, C, t0, t1, ...
  bool compact = false;      // finite domain bounded by w = 0 / poles
  Interval sample_window{};  // where checks place sample points
};

// One-dimensional families, w'' = -(lambda/m) w. C = 0 selects the
// mu-normalized constant (|mu| = m-1 when mu != 0, C = 1 otherwise);
// lambda_mag = 0 selects |k| = |lambda|/m = 1. Unpopulated (sign, sign)
// cells throw EmptyCell.
CatalogEntry table1(Sign lambda_sign, Sign mu_sign, double m, double C = 0.0,
                    double lambda_mag = 0.0);

// rho-Einstein families over an n-dimensional base with kbar = lambda/(m+n-1);
// lambda_mag = 0 selects |kbar| = 1.
CatalogEntry table2(Sign lambda_sign, Sign mu_sign, int n, double m, double C = 0.0,
                    double lambda_mag = 0.0);

// (w')^2 = 1 - w^{1-m} rotational surface, psi = w'.
CatalogEntry schwarzschild_entry(double m, double tmax = 6.0);

// constant w = 1 over a lambda-Einstein space form base
CatalogEntry trivial_entry(double lambda, int n, double m);

struct GaussianFamily {
  double lambda = 1.0;
  int n = 3;
  std::vector<double> ms;
  std::vector<CatalogEntry> entries;
  std::vector<double> sup_dist;  // sup over |t| <= window of |w^m - e^{-lambda t^2/2}|
  double window = 1.0;
};
GaussianFamily gaussian_limit_family(double lambda, int n, const std::vector<double>& ms,
                                     double window = 1.0);

// the default regression corpus
std::vector<std::string> catalog_ids();
bool catalog_has(const std::string& id);
CatalogEntry catalog_get(const std::string& id);  // throws UnknownId

// parameter t with w(t) = r on a monotone-w entry (Schwarzschild)
double parameter_of_w(const CatalogEntry& entry, double r);

}  // namespace wpe
