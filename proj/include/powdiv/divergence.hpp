#ifndef POWDIV_DIVERGENCE_HPP
#define POWDIV_DIVERGENCE_HPP

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <variant>

#include "powdiv/empirical.hpp"
#include "powdiv/numerics.hpp"
#include "powdiv/quadratic.hpp"

namespace powdiv {

/**
 * Exponent of the density power divergence plus the quadrature rule shared
 * by every integral over K. Keeping one rule per run makes the algebraic
 * identities between the pieces hold to rounding error.
 */
class DivergenceConfig {
 public:
  /// Throws std::domain_error unless 0 < alpha <= 1.
  DivergenceConfig(double alpha, QuadratureRule rule);
  DivergenceConfig(double alpha, const Domain& domain,
                   int quadrature_order = kDefaultQuadratureOrder);

  double alpha() const { return alpha_; }
  const QuadratureRule& quadrature() const { return rule_; }
  const Domain& domain() const { return rule_.domain(); }

 private:
  double alpha_;
  QuadratureRule rule_;
};

/// Pieces of D_alpha(Q, P) = D0(Q) + D1(P) + E_P[rho_q]. d1 and d_alpha are
/// filled only when P has a density.
struct DivergenceValue {
  std::optional<double> d_alpha;
  double r_alpha = 0.0;
  double d0 = 0.0;
  std::optional<double> d1;
  double rho_mean = 0.0;
};

/// Either an absolutely continuous P (density on K) or an empirical P_n.
class MeasureView {
 public:
  MeasureView(const DensityCandidate& density) : ref_(std::cref(density)) {}
  MeasureView(const EmpiricalMeasure& sample) : ref_(std::cref(sample)) {}

  bool is_density() const { return ref_.index() == 0; }
  const DensityCandidate& density() const { return std::get<0>(ref_).get(); }
  const EmpiricalMeasure& sample() const { return std::get<1>(ref_).get(); }

 private:
  std::variant<std::reference_wrapper<const DensityCandidate>,
               std::reference_wrapper<const EmpiricalMeasure>>
      ref_;
};

/// u^alpha with the continuous extension 0^alpha = 0. Throws on u < 0.
inline double pow_alpha(double u, double alpha) {
  if (u < 0.0 || std::isnan(u)) throw std::domain_error("negative density value");
  if (u == 0.0) return 0.0;
  if (alpha == 1.0) return u;
  if (alpha == 0.5) return std::sqrt(u);
  return std::pow(u, alpha);
}

/// Pointwise integrand q^(a+1) - (1 + 1/a) q^a p + (1/a) p^(a+1).
double phi_integrand(double q_val, double p_val, double alpha);

/// D0(Q) = int q^(alpha+1).
double d0(const DensityCandidate& q, const DivergenceConfig& cfg);

/// D1(P) = (1/alpha) int p^(alpha+1).
double d1(const DensityCandidate& p, const DivergenceConfig& cfg);

/**
 * int rho_q dP = -(1 + 1/alpha) int q^alpha dP. For an empirical P the
 * average runs in index order. Throws std::domain_error for a sample point
 * outside K.
 */
double rho_expectation(const DensityCandidate& q, const MeasureView& p,
                       const DivergenceConfig& cfg);

/// R_alpha(Q, P) = D0(Q) + int rho_q dP.
DivergenceValue r_alpha(const DensityCandidate& q, const MeasureView& p,
                        const DivergenceConfig& cfg);

/// D_alpha(Q, P) by direct quadrature of phi_integrand.
double d_alpha(const DensityCandidate& q, const DensityCandidate& p, const DivergenceConfig& cfg);

}  // namespace powdiv

#endif
