#include "powdiv/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace powdiv {

Domain::Domain(double lo, double hi) : lower(lo), upper(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("domain requires finite bounds with lower < upper");
}

QuadratureRule::QuadratureRule(std::vector<double> nodes, std::vector<double> weights,
                               int order, Domain domain)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), order_(order), domain_(domain) {
  if (nodes_.size() != weights_.size())
    throw std::invalid_argument("quadrature nodes and weights differ in length");
}

QuadratureRule gauss_quadrature(int order, const Domain& domain) {
  if (order < 2)
    throw std::invalid_argument("quadrature order must be >= 2, got " + std::to_string(order));

  const auto n = static_cast<unsigned>(order);
  std::vector<double> nodes(n), weights(n);
  const double half = 0.5 * domain.width();
  const double mid = 0.5 * (domain.lower + domain.upper);

  // Roots are symmetric; solve for the positive half with Newton on P_n.
  for (unsigned i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, x);
      const double pm1 = std::legendre(n - 1, x);
      dp = n * (x * p - pm1) / (x * x - 1.0);
      const double step = p / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double p = std::legendre(n, x);
    const double pm1 = std::legendre(n - 1, x);
    dp = n * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);

    nodes[i] = mid - half * x;
    nodes[n - 1 - i] = mid + half * x;
    weights[i] = half * w;
    weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) nodes[n / 2] = mid;

  return QuadratureRule(std::move(nodes), std::move(weights), order, domain);
}

double find_root_increasing(const std::function<double(double)>& f, double lo, double hi,
                            double tol) {
  if (!(lo <= hi)) throw std::invalid_argument("root bracket requires lo <= hi");
  const double flo = f(lo);
  if (flo > 0.0) throw std::invalid_argument("root bracket: f(lo) > 0");
  if (flo == 0.0) return lo;
  const double fhi = f(hi);
  if (fhi < 0.0) throw std::invalid_argument("root bracket: f(hi) < 0");
  if (fhi == 0.0) return hi;

  double mid = 0.5 * (lo + hi);
  while (hi - lo > tol) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // no representable midpoint left
    const double fm = f(mid);
    if (std::abs(fm) <= tol) return mid;
    if (fm < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

constexpr double kInvPhi = 0.6180339887498948482;  // 1/golden ratio

struct Probe {
  double x;
  double fx;
};

}  // namespace

Minimizer1DResult minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                              const MinimizeOptions& options) {
  if (!(lo < hi)) throw std::invalid_argument("minimize_1d requires lo < hi");
  if (options.grid_cells < 2) throw std::invalid_argument("minimize_1d needs >= 2 grid cells");

  const int cells = options.grid_cells;
  const double step = (hi - lo) / cells;
  auto grid_x = [&](int i) { return i == cells ? hi : lo + i * step; };

  int best = 0;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<double> grid_f(cells + 1);
  for (int i = 0; i <= cells; ++i) {
    grid_f[i] = f(grid_x(i));
    if (grid_f[i] < best_f) {
      best_f = grid_f[i];
      best = i;
    }
  }

  Minimizer1DResult result;
  result.iterations = cells + 1;
  if (!std::isfinite(best_f)) {
    // Nothing finite on the grid: report the first grid point.
    result.argmin = lo;
    result.value = grid_f[0];
    result.bracket = {lo, grid_x(1)};
    return result;
  }

  const Interval cell_bracket{grid_x(std::max(best - 1, 0)), grid_x(std::min(best + 1, cells))};
  double a = cell_bracket.lo;
  double b = cell_bracket.hi;
  Probe c{b - kInvPhi * (b - a), 0.0};
  Probe d{a + kInvPhi * (b - a), 0.0};
  c.fx = f(c.x);
  d.fx = f(d.x);
  int iterations = 2;
  while (b - a > options.tol) {
    if (c.fx <= d.fx) {
      b = d.x;
      d = c;
      c.x = b - kInvPhi * (b - a);
      c.fx = f(c.x);
    } else {
      a = c.x;
      c = d;
      d.x = a + kInvPhi * (b - a);
      d.fx = f(d.x);
    }
    ++iterations;
    if (iterations > 10000) break;
  }

  // Close the bracket: the reported point must beat both of its ends.
  const Probe ends[2] = {{a, f(a)}, {b, f(b)}};
  iterations += 2;
  Probe golden = c.fx <= d.fx ? c : d;
  for (const auto& e : ends)
    if (e.fx < golden.fx) golden = e;

  result.iterations += iterations;
  if (golden.fx <= best_f) {
    result.argmin = golden.x;
    result.value = golden.fx;
    result.bracket = {a, b};
  } else {
    result.argmin = grid_x(best);
    result.value = best_f;
    result.bracket = cell_bracket;
  }
  return result;
}

}  // namespace powdiv
