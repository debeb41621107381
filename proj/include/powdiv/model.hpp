#ifndef POWDIV_MODEL_HPP
#define POWDIV_MODEL_HPP

#include <stdexcept>
#include <string>
#include <utility>

#include "powdiv/divergence.hpp"
#include "powdiv/numerics.hpp"
#include "powdiv/quadratic.hpp"

namespace powdiv {

/// Raised when no member of the smooth class satisfies the constraints at theta.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bounds describing the smooth class E: uniform bound, Lipschitz constant
/// of q^alpha and the positivity floor.
struct SmoothClassConfig {
  double bound = 100.0;
  double lipschitz_M = 1e4;
  double floor_gamma = 1e-6;
  /// Grid size for the divided-difference Lipschitz witness.
  int lipschitz_grid = 2048;
};

inline constexpr double kResidualTolerance = 1e-8;
inline constexpr double kFloorTolerance = 1e-9;

/**
 * Moment-constrained model int (x - theta) dQ(x) = 0 over theta in a closed
 * interval, intersected with the floored quadratic class on K.
 */
struct MomentModel {
  Domain domain{};
  Interval theta_space{0.25, 0.6};
  SmoothClassConfig class_config{};

  /// g(x, theta) = x - theta.
  static double g(double x, double theta) { return x - theta; }
  /// sup over theta and x in K of |g|.
  double g_sup() const;
};

struct ConstraintReport {
  bool e1_ok = false;
  double max_abs = 0.0;
  bool e2_ok = false;
  double lipschitz_estimate = 0.0;
  bool floor_ok = false;
  double min_value = 0.0;
  double moment_residual = 0.0;
  double normalization_residual = 0.0;

  bool admitted(double tol = kResidualTolerance) const;
};

/**
 * The (b, c) completing a*x^2 + b*x + c to a unit-mass density with mean mu
 * on the domain. The 2x2 system is always nonsingular.
 */
std::pair<double, double> coeffs_from_constraints(double a, double mu, const Domain& domain);

/// Density built from coeffs_from_constraints.
DensityCandidate constrained_density(double a, double mu, const Domain& domain);

/**
 * Maximal interval of `a` for which the constrained density stays above the
 * floor gamma on K. min_x q is concave in `a`, so the set is an interval.
 * Throws InfeasibleError when it is empty.
 */
Interval feasible_a_interval(double mu, const MomentModel& model);

ConstraintReport check_membership(const DensityCandidate& q, double theta,
                                  const MomentModel& model, const DivergenceConfig& cfg);

/// sup over K of |q - q2|, exact for quadratics.
double separation_witness(const DensityCandidate& q, const DensityCandidate& q2);

/**
 * One-parameter description of M_theta intersected with E.
 *
 * The estimator only sees this interface: at fixed theta the members are
 * indexed by a scalar, move affinely in it, and live on a feasible interval.
 */
class DensityFamily {
 public:
  virtual ~DensityFamily() = default;

  virtual const Domain& domain() const = 0;
  virtual Interval theta_space() const = 0;
  virtual DensityCandidate member(double param, double theta) const = 0;
  /// Derivative of member(param, theta) with respect to param.
  virtual Quadratic direction(double theta) const = 0;
  virtual Interval feasible_interval(double theta) const = 0;
};

class QuadraticMomentFamily final : public DensityFamily {
 public:
  explicit QuadraticMomentFamily(MomentModel model) : model_(std::move(model)) {}

  const Domain& domain() const override { return model_.domain; }
  Interval theta_space() const override { return model_.theta_space; }
  DensityCandidate member(double a, double theta) const override;
  Quadratic direction(double theta) const override;
  Interval feasible_interval(double theta) const override;

  const MomentModel& model() const { return model_; }

 private:
  MomentModel model_;
};

}  // namespace powdiv

#endif
