#ifndef POWDIV_QUADRATIC_HPP
#define POWDIV_QUADRATIC_HPP

#include <string>

#include "powdiv/numerics.hpp"

namespace powdiv {

/**
 * Polynomial a*x^2 + b*x + c restricted to a compact domain.
 *
 * Extrema over the domain are computed exactly from the endpoints and the
 * vertex, so sup-norm quantities need no grid.
 */
struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  Domain domain{};

  double operator()(double x) const { return (a * x + b) * x + c; }
  double derivative(double x) const { return 2.0 * a * x + b; }

  double min_value() const;
  double max_value() const;
  double max_abs() const;
  /// Largest |q'| over the domain.
  double max_abs_slope() const;

  /// Integral of x^k q(x) over the domain, k >= 0.
  double moment(int k) const;
  double mass() const { return moment(0); }
  /// Integral of q from domain.lower to x.
  double primitive(double x) const;

  /// Text tag such as "quadratic(4;-5.2;2.26666666667)[0;1]", free of commas.
  std::string describe() const;
};

Quadratic operator-(const Quadratic& lhs, const Quadratic& rhs);
Quadratic operator+(const Quadratic& lhs, const Quadratic& rhs);
Quadratic operator*(double s, const Quadratic& q);

/// A probability density of the smooth class: a quadratic expected to be
/// floored and of unit mass. Membership is audited by check_membership.
using DensityCandidate = Quadratic;

/// Uniform density on the domain.
DensityCandidate uniform_density(const Domain& domain = {});

}  // namespace powdiv

#endif
