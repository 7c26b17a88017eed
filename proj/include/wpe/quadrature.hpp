#pragma once

#include <functional>

namespace wpe {

// Adaptive Gauss-Kronrod (G7, K15) on [a, b] to absolute tolerance tol.
// A singular flag applies the substitution t = end -/+ s^2 on the half nearest
// that endpoint, which regularizes integrable endpoint behavior like w^{m-2}
// with non-integer m at a w = 0 boundary.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12, bool left_singular = false,
                    bool right_singular = false);

}  // namespace wpe
