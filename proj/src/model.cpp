#include "powdiv/model.hpp"

#include <algorithm>
#include <cmath>

namespace powdiv {

namespace {

struct DomainMoments {
  double m0, m1, m2, m3;
};

DomainMoments domain_moments(const Domain& d) {
  auto m = [&](int k) { return (std::pow(d.upper, k + 1) - std::pow(d.lower, k + 1)) / (k + 1); };
  return {m(0), m(1), m(2), m(3)};
}

// Solves [m1 m0; m2 m1] [b; c] = [r1; r2].
std::pair<double, double> solve_bc(const DomainMoments& m, double r1, double r2) {
  const double det = m.m1 * m.m1 - m.m0 * m.m2;
  return {(r1 * m.m1 - m.m0 * r2) / det, (m.m1 * r2 - m.m2 * r1) / det};
}

}  // namespace

double MomentModel::g_sup() const {
  return std::max({std::abs(domain.lower - theta_space.lo), std::abs(domain.lower - theta_space.hi),
                   std::abs(domain.upper - theta_space.lo), std::abs(domain.upper - theta_space.hi)});
}

bool ConstraintReport::admitted(double tol) const {
  return e1_ok && e2_ok && floor_ok && std::abs(moment_residual) <= tol &&
         std::abs(normalization_residual) <= tol;
}

std::pair<double, double> coeffs_from_constraints(double a, double mu, const Domain& domain) {
  const auto m = domain_moments(domain);
  return solve_bc(m, 1.0 - a * m.m2, mu - a * m.m3);
}

DensityCandidate constrained_density(double a, double mu, const Domain& domain) {
  const auto [b, c] = coeffs_from_constraints(a, mu, domain);
  return {a, b, c, domain};
}

Interval feasible_a_interval(double mu, const MomentModel& model) {
  const Domain& k = model.domain;
  const double gamma = model.class_config.floor_gamma;
  auto slack = [&](double a) { return constrained_density(a, mu, k).min_value() - gamma; };

  // Far enough out in either direction the density must dip below the floor,
  // because the a-direction integrates to zero against 1 and x.
  double w = 16.0 / std::pow(k.width(), 3);
  for (int i = 0; i < 60 && (slack(-w) >= 0.0 || slack(w) >= 0.0); ++i) w *= 2.0;

  const auto peak = minimize_1d([&](double a) { return -slack(a); }, -w, w);
  if (-peak.value < 0.0)
    throw InfeasibleError("no floored density with mean " + std::to_string(mu) +
                          " (best floor slack " + std::to_string(-peak.value) + ")");

  const double tol = 1e-12;
  const double lo = find_root_increasing(slack, -w, peak.argmin, tol);
  const double hi = find_root_increasing([&](double a) { return -slack(a); }, peak.argmin, w, tol);
  return {lo, hi};
}

ConstraintReport check_membership(const DensityCandidate& q, double theta,
                                  const MomentModel& model, const DivergenceConfig& cfg) {
  ConstraintReport r;
  const auto& cls = model.class_config;

  r.max_abs = q.max_abs();
  r.e1_ok = r.max_abs <= cls.bound;

  r.min_value = q.min_value();
  r.floor_ok = cls.floor_gamma > 0.0 && r.min_value >= cls.floor_gamma - kFloorTolerance;

  const int n = std::max(cls.lipschitz_grid, 2);
  const double lo = q.domain.lower;
  const double h = q.domain.width() / (n - 1);
  double prev = pow_alpha(std::max(q(lo), 0.0), cfg.alpha());
  for (int i = 1; i < n; ++i) {
    const double x = i == n - 1 ? q.domain.upper : lo + i * h;
    const double cur = pow_alpha(std::max(q(x), 0.0), cfg.alpha());
    r.lipschitz_estimate = std::max(r.lipschitz_estimate, std::abs(cur - prev) / h);
    prev = cur;
  }
  r.e2_ok = r.lipschitz_estimate <= cls.lipschitz_M;

  const double mass = q.mass();
  r.normalization_residual = mass - 1.0;
  r.moment_residual = q.moment(1) - theta * mass;
  return r;
}

double separation_witness(const DensityCandidate& q, const DensityCandidate& q2) {
  return (q - q2).max_abs();
}

DensityCandidate QuadraticMomentFamily::member(double a, double theta) const {
  return constrained_density(a, theta, model_.domain);
}

Quadratic QuadraticMomentFamily::direction(double /*theta*/) const {
  const auto m = domain_moments(model_.domain);
  const auto [db, dc] = solve_bc(m, -m.m2, -m.m3);
  return {1.0, db, dc, model_.domain};
}

Interval QuadraticMomentFamily::feasible_interval(double theta) const {
  return feasible_a_interval(theta, model_);
}

}  // namespace powdiv
