#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wpe {

enum class Errc {
  InvalidDimension,
  InvalidM,
  InconsistentMu,
  DimensionMismatch,
  DimensionTooLow,
  MEqualsOne,
  DomainError,
  BoundaryEvaluation,
  SingularChart,
  UnsupportedLink,
  NonIntegerM,
  FiberMismatch,
  DegenerateData,
  SmoothnessViolation,
  PoleSingularity,
  BlowUp,
  NoBracket,
  MaxIterations,
  NonCompactEntry,
  EmptyCell,
  UnknownId,
  IoError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

// Value of a scalar function of t together with its first derivatives.
// d3 is NaN when a profile cannot supply third derivatives.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = std::numeric_limits<double>::quiet_NaN();

  bool has_d3() const { return std::isfinite(d3); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // +inf allowed

  bool contains(double t) const { return t >= lo && t <= hi; }
  bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
  double length() const { return hi - lo; }
};

inline double sqr(double x) { return x * x; }

}  // namespace wpe
