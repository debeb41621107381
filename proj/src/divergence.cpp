#include "powdiv/divergence.hpp"

#include <algorithm>
#include <string>

namespace powdiv {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::domain_error("alpha must lie in (0, 1], got " + std::to_string(alpha));
}

void require_domain(const DensityCandidate& q, const DivergenceConfig& cfg) {
  if (!(q.domain == cfg.domain()))
    throw std::invalid_argument("density domain differs from the quadrature domain");
}

}  // namespace

DivergenceConfig::DivergenceConfig(double alpha, QuadratureRule rule)
    : alpha_(alpha), rule_(std::move(rule)) {
  require_alpha(alpha);
}

DivergenceConfig::DivergenceConfig(double alpha, const Domain& domain, int quadrature_order)
    : DivergenceConfig(alpha, gauss_quadrature(quadrature_order, domain)) {}

double phi_integrand(double q_val, double p_val, double alpha) {
  require_alpha(alpha);
  const double qa = pow_alpha(q_val, alpha);
  const double pa = pow_alpha(p_val, alpha);
  const double value = q_val * qa - (1.0 + 1.0 / alpha) * qa * p_val + p_val * pa / alpha;
  // Nonnegative in exact arithmetic; clip rounding residue around q = p.
  return std::max(value, 0.0);
}

double d0(const DensityCandidate& q, const DivergenceConfig& cfg) {
  require_domain(q, cfg);
  const double alpha = cfg.alpha();
  return cfg.quadrature().integrate([&](double x) {
    const double v = q(x);
    return v * pow_alpha(v, alpha);
  });
}

double d1(const DensityCandidate& p, const DivergenceConfig& cfg) {
  require_domain(p, cfg);
  const double alpha = cfg.alpha();
  return cfg.quadrature().integrate([&](double x) {
    const double v = p(x);
    return v * pow_alpha(v, alpha);
  }) / alpha;
}

double rho_expectation(const DensityCandidate& q, const MeasureView& p,
                       const DivergenceConfig& cfg) {
  require_domain(q, cfg);
  const double alpha = cfg.alpha();
  const double coef = -(1.0 + 1.0 / alpha);
  if (p.is_density()) {
    const auto& dens = p.density();
    require_domain(dens, cfg);
    return coef * cfg.quadrature().integrate([&](double x) { return pow_alpha(q(x), alpha) * dens(x); });
  }

  const auto& pts = p.sample().points;
  if (pts.empty()) throw std::invalid_argument("empty empirical measure");
  const Domain& k = cfg.domain();
  double sum = 0.0;
  for (double x : pts) {
    if (!k.contains(x))
      throw std::domain_error("sample point " + std::to_string(x) + " lies outside the support");
    sum += pow_alpha(q(x), alpha);
  }
  return coef * sum / static_cast<double>(pts.size());
}

DivergenceValue r_alpha(const DensityCandidate& q, const MeasureView& p,
                        const DivergenceConfig& cfg) {
  DivergenceValue out;
  out.d0 = d0(q, cfg);
  out.rho_mean = rho_expectation(q, p, cfg);
  out.r_alpha = out.d0 + out.rho_mean;
  if (p.is_density()) {
    out.d1 = d1(p.density(), cfg);
    out.d_alpha = d_alpha(q, p.density(), cfg);
  }
  return out;
}

double d_alpha(const DensityCandidate& q, const DensityCandidate& p, const DivergenceConfig& cfg) {
  require_domain(q, cfg);
  require_domain(p, cfg);
  const double alpha = cfg.alpha();
  return cfg.quadrature().integrate([&](double x) { return phi_integrand(q(x), p(x), alpha); });
}

}  // namespace powdiv
