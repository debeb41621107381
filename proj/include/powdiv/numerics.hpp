#ifndef POWDIV_NUMERICS_HPP
#define POWDIV_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace powdiv {

/// Compact support K = [lower, upper].
struct Domain {
  double lower = 0.0;
  double upper = 1.0;

  Domain() = default;
  Domain(double lo, double hi);

  double width() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }
  bool operator==(const Domain&) const = default;
};

/// Closed interval of reals, used for parameter ranges and brackets.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/**
 * Gauss-Legendre rule mapped onto a domain.
 *
 * Nodes are strictly interior, weights are positive and sum to the domain
 * width. An order-k rule integrates polynomials of degree <= 2k-1 exactly.
 */
class QuadratureRule {
 public:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights, int order,
                 Domain domain);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  int order() const { return order_; }
  const Domain& domain() const { return domain_; }

  template <typename F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
  int order_;
  Domain domain_;
};

inline constexpr int kDefaultQuadratureOrder = 32;

/// Throws std::invalid_argument when order < 2.
QuadratureRule gauss_quadrature(int order, const Domain& domain);

inline constexpr double kRootTolerance = 1e-10;
inline constexpr double kMinimizerTolerance = 1e-8;

/**
 * Bisection root of a nondecreasing function with f(lo) <= 0 <= f(hi).
 *
 * Stops once |f(x)| <= tol or the bracket is narrower than tol. Throws
 * std::invalid_argument if the bracket has no sign change.
 */
double find_root_increasing(const std::function<double(double)>& f, double lo, double hi,
                            double tol = kRootTolerance);

struct Minimizer1DResult {
  double argmin = 0.0;
  double value = 0.0;
  int iterations = 0;
  Interval bracket;
};

struct MinimizeOptions {
  int grid_cells = 64;
  double tol = kMinimizerTolerance;
};

/**
 * Derivative-free minimization on [lo, hi].
 *
 * A uniform scan over `grid_cells` cells locates the best grid point, then
 * golden-section search refines inside its two neighbouring cells. The scan
 * keeps the search away from a wrong basin when f is not unimodal; ties on
 * the grid go to the smaller abscissa.
 */
Minimizer1DResult minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                              const MinimizeOptions& options = {});

}  // namespace powdiv

#endif
