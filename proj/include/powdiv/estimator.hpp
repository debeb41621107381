#ifndef POWDIV_ESTIMATOR_HPP
#define POWDIV_ESTIMATOR_HPP

#include <chrono>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "powdiv/divergence.hpp"
#include "powdiv/model.hpp"
#include "powdiv/numerics.hpp"

namespace powdiv {

class TimeoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Projection of P (empirical or population) on M_theta within E.
struct InnerSolution {
  double theta = 0.0;
  DensityCandidate density{};
  double objective = 0.0;
  double a_star = 0.0;
  Interval feasible_interval{};
  /// a_star sits on an end of the feasible interval.
  bool on_boundary = false;
};

struct InnerOptions {
  MinimizeOptions minimize{};
  /// Finish with a bisection on the analytic slope of the criterion. The
  /// criterion is flat to rounding within ~1e-7 of its minimizer, which a
  /// value-only search cannot resolve.
  bool polish = true;
};

/**
 * R_alpha(q_a, P) as a function of the free family parameter at fixed
 * theta, together with its derivative in that parameter.
 */
class InnerCriterion {
 public:
  InnerCriterion(const DensityFamily& family, double theta, MeasureView measure,
                 const DivergenceConfig& cfg);

  double value(double param) const;
  double slope(double param) const;
  DensityCandidate density(double param) const { return family_.member(param, theta_); }

 private:
  double expect(const std::function<double(double)>& f) const;

  const DensityFamily& family_;
  double theta_;
  MeasureView measure_;
  const DivergenceConfig& cfg_;
  Quadratic direction_;
};

/// Minimizes the criterion over a bracket inside the feasible interval.
InnerSolution inner_minimize(double theta, MeasureView measure, const DensityFamily& family,
                             const DivergenceConfig& cfg, const InnerOptions& options = {},
                             std::optional<Interval> bracket = std::nullopt);

/// Q_n(theta): arg inf over M_theta within E of R_alpha(Q, P_n).
InnerSolution inner_minimize_empirical(double theta, const EmpiricalMeasure& sample,
                                       const MomentModel& model, const DivergenceConfig& cfg,
                                       const InnerOptions& options = {});

/// Q*_theta: arg inf over M_theta within E of R_alpha(Q, P0).
InnerSolution inner_minimize_population(double theta, const DensityCandidate& p0,
                                        const MomentModel& model, const DivergenceConfig& cfg,
                                        const InnerOptions& options = {});

struct OuterGridConfig {
  int points = 41;
  bool refine = true;
  MinimizeOptions refine_options{16, kMinimizerTolerance};
  InnerOptions inner{};
  /// Abandon the estimation with TimeoutError once past this instant.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class ProfileStatus { interior, boundary, infeasible };

const char* to_string(ProfileStatus s);

struct ProfilePoint {
  double theta = 0.0;
  double objective = 0.0;
  double a_star = 0.0;
  ProfileStatus status = ProfileStatus::infeasible;
};

struct ConfigEcho {
  double alpha = 0.0;
  int quad_order = 0;
  double gamma = 0.0;
  Interval theta_space{};
  int grid_points = 0;
  bool refine = true;
};

struct EstimationResult {
  double theta_hat = 0.0;
  InnerSolution inner{};
  std::vector<ProfilePoint> profile;
  /// Sample size, 0 for a population input.
  std::size_t n = 0;
  ConfigEcho config_echo{};
};

/**
 * theta_hat = arg min over theta of the inner optimum.
 *
 * Solves the inner problem on a uniform theta grid, then refines with
 * minimize_1d between the neighbours of the best grid point. Grid ties
 * within 1e-12 (relative) go to the smaller theta. Throws InfeasibleError
 * if every grid point is infeasible.
 */
EstimationResult outer_minimize(MeasureView measure, const MomentModel& model,
                                const DivergenceConfig& cfg, const OuterGridConfig& grid = {});

/// sup over K of |q1 - q2|, exact for quadratics.
double sup_distance(const DensityCandidate& q1, const DensityCandidate& q2);

/**
 * Largest sup_distance(q*_theta, q*_theta') / |theta - theta'| over adjacent
 * grid pairs. Grids with fewer than two points give 0.
 */
double m4_lipschitz_probe(const MomentModel& model, const DensityCandidate& p0,
                          const DivergenceConfig& cfg, std::span<const double> theta_grid);

/// Profile table: `theta,objective,a_star,status` with 12 significant digits.
void write_profile_csv(std::ostream& out, const EstimationResult& result);

/// Human-readable key: value summary.
void write_summary(std::ostream& out, const EstimationResult& result,
                   std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace powdiv

#endif
