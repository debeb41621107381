#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "powdiv/estimator.hpp"
#include "powdiv/sampling.hpp"

using namespace powdiv;

namespace {

const Domain kUnit{0.0, 1.0};

DensityCandidate p0() { return constrained_density(4.0, 0.4, kUnit); }

// Exhaustive scan of the criterion over equispaced a-values in [lo, hi].
double brute_argmin(const InnerCriterion& crit, Interval iv, int points) {
  double best = 1e300, arg = iv.lo;
  for (int i = 0; i < points; ++i) {
    const double a = iv.lo + i * iv.width() / (points - 1);
    const double v = crit.value(a);
    if (v < best) best = v, arg = a;
  }
  return arg;
}

}  // namespace

TEST_CASE("population projection of a model member is itself") {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  const auto sol = inner_minimize_population(0.4, p0(), model, cfg);
  CHECK(std::abs(sol.a_star - 4.0) < 1e-4);
  CHECK(sol.objective == doctest::Approx(-d1(p0(), cfg)).epsilon(1e-12));
  CHECK_FALSE(sol.on_boundary);
  CHECK(check_membership(sol.density, 0.4, model, cfg).admitted());
}

TEST_CASE("population projection away from theta0") {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  QuadraticMomentFamily fam(model);
  const auto s4 = inner_minimize_population(0.4, p0(), model, cfg);
  const auto s5 = inner_minimize_population(0.5, p0(), model, cfg);
  CHECK(s5.objective > s4.objective);

  // Brute-force oracle over the feasible a-interval at both thetas.
  for (double theta : {0.4, 0.5}) {
    InnerCriterion crit(fam, theta, p0(), cfg);
    const auto iv = fam.feasible_interval(theta);
    const double arg = brute_argmin(crit, iv, 20001);
    const auto sol = inner_minimize_population(theta, p0(), model, cfg);
    CHECK(std::abs(sol.a_star - arg) <= iv.width() / 20000);
  }
  CHECK(check_membership(s5.density, 0.5, model, cfg).admitted());
}

TEST_CASE("arg min of R_alpha equals arg min of D_alpha on population inputs") {
  const MomentModel model;
  QuadraticMomentFamily fam(model);
  for (double alpha : {0.3, 0.5, 1.0}) {
    const DivergenceConfig cfg(alpha, kUnit);
    for (double theta : {0.3, 0.45, 0.55}) {
      const auto sol = inner_minimize_population(theta, p0(), model, cfg);
      const auto iv = fam.feasible_interval(theta);
      const auto by_d = minimize_1d([&](double a) { return d_alpha(fam.member(a, theta), p0(), cfg); }, iv.lo, iv.hi);
      CHECK(std::abs(sol.a_star - by_d.argmin) < 1e-5);
      CHECK(d_alpha(sol.density, p0(), cfg) == doctest::Approx(sol.objective + d1(p0(), cfg)).epsilon(1e-10));
    }
  }
}

TEST_CASE("empirical inner solutions") {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);

  SUBCASE("large sample lands near the generating coefficient") {
    const auto s = sample(p0(), 50'000, 11);
    const auto sol = inner_minimize_empirical(0.4, s, model, cfg);
    CHECK(std::abs(sol.a_star - 4.0) < 0.3);
  }
  SUBCASE("tiny sample is still well posed") {
    const auto s = sample(p0(), 10, 3);
    const auto sol = inner_minimize_empirical(0.5, s, model, cfg);
    CHECK(std::isfinite(sol.objective));
    CHECK(sol.feasible_interval.contains(sol.a_star));
    CHECK(check_membership(sol.density, 0.5, model, cfg).admitted());
  }
  SUBCASE("matches an exhaustive scan") {
    QuadraticMomentFamily fam(model);
    const auto s = sample(p0(), 1000, 21);
    for (double theta : {0.3, 0.4, 0.52}) {
      InnerCriterion crit(fam, theta, s, cfg);
      const auto iv = fam.feasible_interval(theta);
      const double arg = brute_argmin(crit, iv, 10001);
      const auto sol = inner_minimize_empirical(theta, s, model, cfg);
      CHECK(std::abs(sol.a_star - arg) <= iv.width() / 10000);
      CHECK(sol.objective <= crit.value(arg) + 1e-14);
    }
  }
  SUBCASE("plug-in projection never loses to the population projection") {
    const auto s = sample(p0(), 300, 8);
    for (double theta = 0.3; theta <= 0.55; theta += 0.05) {
      const auto qn = inner_minimize_empirical(theta, s, model, cfg);
      const auto qstar = inner_minimize_population(theta, p0(), model, cfg);
      CHECK(qn.objective <= r_alpha(qstar.density, s, cfg).r_alpha + 1e-12);
    }
  }
  SUBCASE("boundary solutions are flagged") {
    EmpiricalMeasure ends;
    ends.points = {0.0, 1.0, 0.0, 1.0};
    const auto sol = inner_minimize_empirical(0.5, ends, model, cfg);
    CHECK(sol.on_boundary);
    CHECK(sol.a_star == doctest::Approx(sol.feasible_interval.hi));
  }
}

TEST_CASE("slope is the derivative of the criterion") {
  const MomentModel model;
  QuadraticMomentFamily fam(model);
  const auto s = sample(p0(), 200, 4);
  const auto pop = p0();
  for (double alpha : {0.2, 0.5, 1.0}) {
    const DivergenceConfig cfg(alpha, kUnit);
    for (const MeasureView view : {MeasureView(s), MeasureView(pop)}) {
      InnerCriterion crit(fam, 0.42, view, cfg);
      for (double a : {1.0, 3.0, 6.0}) {
        const double h = 1e-5;
        const double fd = (crit.value(a + h) - crit.value(a - h)) / (2 * h);
        CHECK(crit.slope(a) == doctest::Approx(fd).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("restarts from perturbed brackets agree") {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  QuadraticMomentFamily fam(model);
  const auto s = sample(p0(), 400, 17);
  for (double theta : {0.3, 0.4, 0.5}) {
    const auto iv = fam.feasible_interval(theta);
    const auto ref = inner_minimize(theta, s, fam, cfg);
    for (int k = 1; k <= 4; ++k) {
      InnerOptions opt;
      opt.minimize.grid_cells = 64 + 7 * k;
      const Interval br{iv.lo + 0.01 * k * iv.width() * (ref.a_star > iv.lo + 0.1 * iv.width()),
                        iv.hi - 0.01 * k * iv.width() * (ref.a_star < iv.hi - 0.1 * iv.width())};
      const auto sol = inner_minimize(theta, s, fam, cfg, opt, br);
      CHECK(std::abs(sol.a_star - ref.a_star) <= 10 * kMinimizerTolerance);
    }
  }
}

TEST_CASE("outer minimization") {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);

  SUBCASE("population input recovers theta0 and a") {
    const auto r = outer_minimize(p0(), model, cfg);
    CHECK(std::abs(r.theta_hat - 0.4) < 1e-4);
    CHECK(std::abs(r.inner.a_star - 4.0) < 1e-3);
    CHECK(r.n == 0);
    CHECK(r.profile.size() == 41);
    for (const auto& pt : r.profile) CHECK(r.inner.objective <= pt.objective + 1e-12);
  }
  SUBCASE("tiny sample is total") {
    const auto s = sample(p0(), 10, 1);
    const auto r = outer_minimize(s, model, cfg);
    CHECK(model.theta_space.contains(r.theta_hat));
    CHECK(r.profile.size() == 41);
    CHECK(r.n == 10);
    CHECK(r.config_echo.grid_points == 41);
    CHECK(r.config_echo.alpha == 0.5);
  }
  SUBCASE("grid without refinement returns a grid point") {
    OuterGridConfig g;
    g.points = 36;  // step 0.01, so 0.4 is on the grid
    g.refine = false;
    const auto r = outer_minimize(p0(), model, cfg, g);
    CHECK(r.theta_hat == doctest::Approx(0.4).epsilon(1e-12));
  }
  SUBCASE("infeasible grid points are marked, all-infeasible throws") {
    MomentModel wide = model;
    wide.theta_space = {0.0, 1.0};
    const auto r = outer_minimize(p0(), wide, cfg);
    CHECK(r.profile.front().status == ProfileStatus::infeasible);
    CHECK(r.profile.back().status == ProfileStatus::infeasible);
    CHECK(std::abs(r.theta_hat - 0.4) < 1e-4);

    MomentModel hopeless = model;
    hopeless.theta_space = {0.9, 0.95};
    CHECK_THROWS_AS(outer_minimize(p0(), hopeless, cfg), InfeasibleError);
  }
  SUBCASE("bad grid") {
    OuterGridConfig g;
    g.points = 5;
    CHECK_THROWS_AS(outer_minimize(p0(), model, cfg, g), std::invalid_argument);
  }
  SUBCASE("expired deadline times out") {
    OuterGridConfig g;
    g.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
    CHECK_THROWS_AS(outer_minimize(p0(), model, cfg, g), TimeoutError);
  }
}

TEST_CASE("sup_distance") {
  CHECK(sup_distance(p0(), p0()) == 0.0);
  const Quadratic shift{4.0, -5.2, 34.0 / 15.0 + 0.25, kUnit};
  CHECK(sup_distance(shift, p0()) == doctest::Approx(0.25).epsilon(1e-13));
  const Quadratic bump{-1.0, 1.0, 0.0, kUnit};  // max 1/4 at x = 1/2
  CHECK(sup_distance(bump, Quadratic{0, 0, 0, kUnit}) == doctest::Approx(0.25));
}

TEST_CASE("m4 Lipschitz probe") {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  const std::vector<double> single{0.4};
  CHECK(m4_lipschitz_probe(model, p0(), cfg, single) == 0.0);
  const std::vector<double> repeated{0.4, 0.4, 0.4};
  CHECK(m4_lipschitz_probe(model, p0(), cfg, repeated) == 0.0);

  std::vector<double> coarse, fine;
  for (int i = 0; i <= 10; ++i) coarse.push_back(0.35 + 0.01 * i);
  for (int i = 0; i <= 20; ++i) fine.push_back(0.35 + 0.005 * i);
  const double r1 = m4_lipschitz_probe(model, p0(), cfg, coarse);
  const double r2 = m4_lipschitz_probe(model, p0(), cfg, fine);
  CHECK(r1 > 0.0);
  CHECK(std::abs(r1 - r2) <= 0.2 * std::max(r1, r2));
}

TEST_CASE("profile csv and summary") {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  const auto s = sample(p0(), 100, 5);
  const auto r = outer_minimize(s, model, cfg);

  std::ostringstream csv;
  write_profile_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "theta,objective,a_star,status");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 41);

  std::ostringstream summary;
  write_summary(summary, r, 5);
  CHECK(summary.str().find("theta_hat: ") == 0);
  CHECK(summary.str().find("n: 100\n") != std::string::npos);
  CHECK(summary.str().find("seed: 5\n") != std::string::npos);
  CHECK(summary.str().find("alpha: 0.5\n") != std::string::npos);
}
