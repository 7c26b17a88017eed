#include "wpe/quadrature.hpp"

#include <cmath>

namespace wpe {

namespace {

// QUADPACK G7K15 nodes and weights
const double XGK[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                       0.741531185599394, 0.586087235467691, 0.405845151377397,
                       0.207784955007898, 0.0};
const double WGK[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                       0.140653259715525, 0.169004726639267, 0.190350578064785,
                       0.204432940075298, 0.209482141084728};
const double WG[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                      0.417959183673469};

struct Gk {
  double value;
  double error;
};

Gk gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  const double fc = f(c);
  double kron = WGK[7] * fc;
  double gauss = WG[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double fp = f(c + hw * XGK[i]);
    const double fm = f(c - hw * XGK[i]);
    kron += WGK[i] * (fp + fm);
    if (i % 2 == 1) gauss += WG[i / 2] * (fp + fm);
  }
  kron *= hw;
  gauss *= hw;
  return {kron, std::abs(kron - gauss)};
}

double adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                int depth) {
  const Gk r = gk15(f, a, b);
  if (r.error <= tol || depth >= 52) return r.value;
  const double c = 0.5 * (a + b);
  return adaptive(f, a, c, 0.5 * tol, depth + 1) + adaptive(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol, bool left_singular, bool right_singular) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_gk(f, b, a, tol, right_singular, left_singular);

  if (!left_singular && !right_singular) return adaptive(f, a, b, tol, 0);

  const double c = 0.5 * (a + b);
  double total = 0.0;
  if (left_singular) {
    // t = a + s^2, dt = 2 s ds
    const double smax = std::sqrt(c - a);
    total += adaptive([&](double s) { return 2.0 * s * f(a + s * s); }, 0.0, smax,
                      0.5 * tol, 0);
  } else {
    total += adaptive(f, a, c, 0.5 * tol, 0);
  }
  if (right_singular) {
    // t = b - s^2
    const double smax = std::sqrt(b - c);
    total += adaptive([&](double s) { return 2.0 * s * f(b - s * s); }, 0.0, smax,
                      0.5 * tol, 0);
  } else {
    total += adaptive(f, c, b, 0.5 * tol, 0);
  }
  return total;
}

}  // namespace wpe
