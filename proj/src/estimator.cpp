#include "powdiv/estimator.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace powdiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double polish_minimizer(const InnerCriterion& crit, Interval bracket, double start, double start_value,
                        double tol) {
  double w = std::max(1e3 * tol, 1e-6 * (1.0 + std::abs(start)));
  double root = start;
  bool found = false;
  for (int i = 0; i < 40 && !found; ++i, w *= 8.0) {
    const double l = std::max(bracket.lo, start - w);
    const double r = std::min(bracket.hi, start + w);
    const double sl = crit.slope(l);
    const double sr = crit.slope(r);
    if (sl <= 0.0 && sr >= 0.0) {
      root = find_root_increasing([&](double a) { return crit.slope(a); }, l, r, 1e-14);
      found = true;
    } else if (sl > 0.0 && l == bracket.lo) {
      root = bracket.lo;
      found = true;
    } else if (sr < 0.0 && r == bracket.hi) {
      root = bracket.hi;
      found = true;
    }
  }
  if (!found) return start;
  // Only trust the slope root if it is at least as good as the search result.
  const double v = crit.value(root);
  return v <= start_value + 1e-12 * (1.0 + std::abs(start_value)) ? root : start;
}

}  // namespace

InnerCriterion::InnerCriterion(const DensityFamily& family, double theta, MeasureView measure,
                               const DivergenceConfig& cfg)
    : family_(family),
      theta_(theta),
      measure_(measure),
      cfg_(cfg),
      direction_(family.direction(theta)) {
  if (!(family.domain() == cfg.domain()))
    throw std::invalid_argument("model domain differs from the quadrature domain");
}

double InnerCriterion::value(double param) const {
  const auto q = density(param);
  return d0(q, cfg_) + rho_expectation(q, measure_, cfg_);
}

double InnerCriterion::expect(const std::function<double(double)>& f) const {
  if (measure_.is_density()) {
    const auto& p = measure_.density();
    return cfg_.quadrature().integrate([&](double x) { return f(x) * p(x); });
  }
  const auto& pts = measure_.sample().points;
  double sum = 0.0;
  for (double x : pts) sum += f(x);
  return sum / static_cast<double>(pts.size());
}

double InnerCriterion::slope(double param) const {
  const auto q = density(param);
  const double alpha = cfg_.alpha();
  const auto& h = direction_;
  const double own = cfg_.quadrature().integrate([&](double x) { return pow_alpha(q(x), alpha) * h(x); });
  const double data = expect([&](double x) {
    const double v = q(x);
    return pow_alpha(v, alpha) / v * h(x);
  });
  return (alpha + 1.0) * (own - data);
}

InnerSolution inner_minimize(double theta, MeasureView measure, const DensityFamily& family,
                             const DivergenceConfig& cfg, const InnerOptions& options,
                             std::optional<Interval> bracket) {
  InnerSolution out;
  out.theta = theta;
  out.feasible_interval = family.feasible_interval(theta);

  Interval br = out.feasible_interval;
  if (bracket) {
    br.lo = std::max(br.lo, bracket->lo);
    br.hi = std::min(br.hi, bracket->hi);
    if (br.lo > br.hi) throw std::invalid_argument("bracket misses the feasible interval");
  }

  InnerCriterion crit(family, theta, measure, cfg);
  double a = br.lo;
  double value = 0.0;
  if (br.width() > 0.0) {
    const auto res = minimize_1d([&](double p) { return crit.value(p); }, br.lo, br.hi, options.minimize);
    a = res.argmin;
    value = res.value;
    if (options.polish) {
      a = polish_minimizer(crit, br, a, value, options.minimize.tol);
      value = crit.value(a);
    }
  } else {
    value = crit.value(a);
  }

  out.a_star = a;
  out.density = crit.density(a);
  out.objective = value;
  const double edge = 10.0 * options.minimize.tol;
  out.on_boundary = a - out.feasible_interval.lo <= edge || out.feasible_interval.hi - a <= edge;
  return out;
}

InnerSolution inner_minimize_empirical(double theta, const EmpiricalMeasure& sample,
                                       const MomentModel& model, const DivergenceConfig& cfg,
                                       const InnerOptions& options) {
  return inner_minimize(theta, sample, QuadraticMomentFamily(model), cfg, options);
}

InnerSolution inner_minimize_population(double theta, const DensityCandidate& p0,
                                        const MomentModel& model, const DivergenceConfig& cfg,
                                        const InnerOptions& options) {
  return inner_minimize(theta, p0, QuadraticMomentFamily(model), cfg, options);
}

const char* to_string(ProfileStatus s) {
  switch (s) {
    case ProfileStatus::interior: return "interior";
    case ProfileStatus::boundary: return "boundary";
    case ProfileStatus::infeasible: return "infeasible";
  }
  return "?";
}

EstimationResult outer_minimize(MeasureView measure, const MomentModel& model,
                                const DivergenceConfig& cfg, const OuterGridConfig& grid) {
  if (grid.points < 8) throw std::invalid_argument("outer grid needs at least 8 points");
  const Interval space = model.theta_space;
  if (!(space.lo < space.hi)) throw std::invalid_argument("empty parameter interval");

  const QuadraticMomentFamily family(model);
  auto solve = [&](double theta) -> std::optional<InnerSolution> {
    if (grid.deadline && std::chrono::steady_clock::now() > *grid.deadline)
      throw TimeoutError("estimation exceeded its time budget");
    try {
      return inner_minimize(theta, measure, family, cfg, grid.inner);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
  };

  EstimationResult result;
  result.n = measure.is_density() ? 0 : measure.sample().size();
  result.config_echo = {cfg.alpha(), cfg.quadrature().order(), model.class_config.floor_gamma,
                        space, grid.points, grid.refine};

  const int n = grid.points;
  auto theta_at = [&](int i) { return i == n - 1 ? space.hi : space.lo + i * (space.hi - space.lo) / (n - 1); };

  int best = -1;
  std::optional<InnerSolution> best_solution;
  result.profile.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double theta = theta_at(i);
    const auto sol = solve(theta);
    ProfilePoint pt{theta, kInf, std::numeric_limits<double>::quiet_NaN(), ProfileStatus::infeasible};
    if (sol) {
      pt.objective = sol->objective;
      pt.a_star = sol->a_star;
      pt.status = sol->on_boundary ? ProfileStatus::boundary : ProfileStatus::interior;
      const double tie = 1e-12 * (1.0 + std::abs(pt.objective));
      if (best < 0 || pt.objective < best_solution->objective - tie) {
        best = i;
        best_solution = sol;
      }
    }
    result.profile.push_back(pt);
  }
  if (best < 0) throw InfeasibleError("no feasible parameter on the outer grid");

  InnerSolution chosen = *best_solution;
  if (grid.refine) {
    const double lo = theta_at(std::max(best - 1, 0));
    const double hi = theta_at(std::min(best + 1, n - 1));
    const auto refined = minimize_1d(
        [&](double theta) {
          const auto sol = solve(theta);
          return sol ? sol->objective : kInf;
        },
        lo, hi, grid.refine_options);
    if (refined.value < chosen.objective) {
      if (auto sol = solve(refined.argmin)) chosen = *sol;
    }
  }

  result.theta_hat = chosen.theta;
  result.inner = chosen;
  return result;
}

double sup_distance(const DensityCandidate& q1, const DensityCandidate& q2) {
  return (q1 - q2).max_abs();
}

double m4_lipschitz_probe(const MomentModel& model, const DensityCandidate& p0,
                          const DivergenceConfig& cfg, std::span<const double> theta_grid) {
  if (theta_grid.size() < 2) return 0.0;
  const QuadraticMomentFamily family(model);
  std::vector<DensityCandidate> projections;
  projections.reserve(theta_grid.size());
  for (double theta : theta_grid)
    projections.push_back(inner_minimize(theta, p0, family, cfg).density);

  double worst = 0.0;
  for (std::size_t i = 1; i < theta_grid.size(); ++i) {
    const double step = std::abs(theta_grid[i] - theta_grid[i - 1]);
    if (step == 0.0) continue;
    worst = std::max(worst, sup_distance(projections[i], projections[i - 1]) / step);
  }
  return worst;
}

void write_profile_csv(std::ostream& out, const EstimationResult& result) {
  out << "theta,objective,a_star,status\n";
  for (const auto& p : result.profile)
    fmt::print(out, "{:.12g},{:.12g},{:.12g},{}\n", p.theta, p.objective, p.a_star, to_string(p.status));
}

void write_summary(std::ostream& out, const EstimationResult& r, std::optional<std::uint64_t> seed) {
  const auto& q = r.inner.density;
  fmt::print(out, "theta_hat: {:.12g}\n", r.theta_hat);
  fmt::print(out, "a_hat: {:.12g}\n", r.inner.a_star);
  fmt::print(out, "b_hat: {:.12g}\n", q.b);
  fmt::print(out, "c_hat: {:.12g}\n", q.c);
  fmt::print(out, "objective: {:.12g}\n", r.inner.objective);
  fmt::print(out, "on_boundary: {}\n", r.inner.on_boundary);
  if (r.n == 0)
    fmt::print(out, "n: population\n");
  else
    fmt::print(out, "n: {}\n", r.n);
  if (seed) fmt::print(out, "seed: {}\n", *seed);
  const auto& c = r.config_echo;
  fmt::print(out, "alpha: {:.12g}\n", c.alpha);
  fmt::print(out, "quad_order: {}\n", c.quad_order);
  fmt::print(out, "gamma: {:.12g}\n", c.gamma);
  fmt::print(out, "theta_space: [{:.12g}, {:.12g}]\n", c.theta_space.lo, c.theta_space.hi);
  fmt::print(out, "grid_points: {}\n", c.grid_points);
  fmt::print(out, "refine: {}\n", c.refine);
}

}  // namespace powdiv
