#include "powdiv/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace powdiv {

namespace {

// Candidate abscissae for extrema: endpoints plus an interior vertex.
template <typename Reduce>
double extremum(const Quadratic& q, Reduce reduce) {
  double best = reduce(q(q.domain.lower), q(q.domain.upper));
  if (q.a != 0.0) {
    const double vertex = -q.b / (2.0 * q.a);
    if (vertex > q.domain.lower && vertex < q.domain.upper) best = reduce(best, q(vertex));
  }
  return best;
}

double power_sum_diff(double lo, double hi, int k) {
  // (hi^k - lo^k) / k
  return (std::pow(hi, k) - std::pow(lo, k)) / k;
}

void require_same_domain(const Quadratic& lhs, const Quadratic& rhs) {
  if (!(lhs.domain == rhs.domain))
    throw std::invalid_argument("quadratics live on different domains");
}

}  // namespace

double Quadratic::min_value() const {
  return extremum(*this, [](double x, double y) { return std::min(x, y); });
}

double Quadratic::max_value() const {
  return extremum(*this, [](double x, double y) { return std::max(x, y); });
}

double Quadratic::max_abs() const { return std::max(std::abs(min_value()), std::abs(max_value())); }

double Quadratic::max_abs_slope() const {
  return std::max(std::abs(derivative(domain.lower)), std::abs(derivative(domain.upper)));
}

double Quadratic::moment(int k) const {
  if (k < 0) throw std::invalid_argument("moment order must be >= 0");
  const double lo = domain.lower, hi = domain.upper;
  return a * power_sum_diff(lo, hi, k + 3) + b * power_sum_diff(lo, hi, k + 2) +
         c * power_sum_diff(lo, hi, k + 1);
}

double Quadratic::primitive(double x) const {
  const double lo = domain.lower;
  return a * (x * x * x - lo * lo * lo) / 3.0 + b * (x * x - lo * lo) / 2.0 + c * (x - lo);
}

std::string Quadratic::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "quadratic(%.12g;%.12g;%.12g)[%.12g;%.12g]", a, b, c,
                domain.lower, domain.upper);
  return buf;
}

Quadratic operator-(const Quadratic& lhs, const Quadratic& rhs) {
  require_same_domain(lhs, rhs);
  return {lhs.a - rhs.a, lhs.b - rhs.b, lhs.c - rhs.c, lhs.domain};
}

Quadratic operator+(const Quadratic& lhs, const Quadratic& rhs) {
  require_same_domain(lhs, rhs);
  return {lhs.a + rhs.a, lhs.b + rhs.b, lhs.c + rhs.c, lhs.domain};
}

Quadratic operator*(double s, const Quadratic& q) { return {s * q.a, s * q.b, s * q.c, q.domain}; }

DensityCandidate uniform_density(const Domain& domain) {
  return {0.0, 0.0, 1.0 / domain.width(), domain};
}

}  // namespace powdiv
