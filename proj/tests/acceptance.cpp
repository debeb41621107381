// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include <fmt/ranges.h>

#include "powdiv/estimator.hpp"
#include "powdiv/harness.hpp"
#include "powdiv/sampling.hpp"

using namespace powdiv;
namespace fs = std::filesystem;

namespace {

// Tolerances, pinned.
constexpr double kDivTol = 1e-10;
constexpr double kPopThetaTol = 1e-4;
constexpr double kPopATol = 1e-3;
constexpr int kBruteGrid = 100'000;
constexpr double kMuMedianAt50k = 0.02;
constexpr double kSupMedianAt10k = 0.05;
constexpr double kRestartTol = 10 * kMinimizerTolerance;
constexpr double kIdentMargin = 1e-6;
constexpr double kM4RelTol = 0.2;

const Domain kUnit{0.0, 1.0};

DensityCandidate p0() { return constrained_density(4.0, 0.4, kUnit); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome c1_divergence() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MomentModel model;
  double worst_neg = 0.0, worst_self = 0.0, worst_decomp = 0.0, worst_l2 = 0.0;
  for (double alpha : {0.1, 0.25, 0.5, 0.75, 1.0}) {
    const DivergenceConfig cfg(alpha, kUnit);
    for (int i = 0; i < 1000; ++i) {
      auto draw = [&] {
        const double mu = model.theta_space.lo + u(rng) * model.theta_space.width();
        const auto iv = feasible_a_interval(mu, model);
        return constrained_density(iv.lo + u(rng) * iv.width(), mu, kUnit);
      };
      const auto q = draw(), p = draw();
      const double d = d_alpha(q, p, cfg);
      worst_neg = std::min(worst_neg, d);
      worst_self = std::max(worst_self, std::abs(d_alpha(q, q, cfg)));
      worst_decomp = std::max(worst_decomp, std::abs(d - (d0(q, cfg) + d1(p, cfg) + rho_expectation(q, p, cfg))));
      if (alpha == 1.0) {
        const double l2 = cfg.quadrature().integrate([&](double x) { return (q(x) - p(x)) * (q(x) - p(x)); });
        worst_l2 = std::max(worst_l2, std::abs(d - l2));
      }
    }
  }
  const bool ok = worst_neg >= -kDivTol && worst_self < kDivTol && worst_decomp < kDivTol && worst_l2 < kDivTol;
  return {ok, fmt::format("min D = {:.3g}, max D(q,q) = {:.3g}, decomposition err = {:.3g}, L2 err = {:.3g}",
                          worst_neg, worst_self, worst_decomp, worst_l2)};
}

Outcome c2_population() {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  const auto r = outer_minimize(p0(), model, cfg);
  const double et = std::abs(r.theta_hat - 0.4), ea = std::abs(r.inner.a_star - 4.0);
  return {et < kPopThetaTol && ea < kPopATol,
          fmt::format("theta_hat = {:.10g}, a_hat = {:.10g}", r.theta_hat, r.inner.a_star)};
}

Outcome c3_inner_vs_brute() {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  QuadraticMomentFamily fam(model);
  double worst_steps = 0.0;
  for (double theta : {0.35, 0.40, 0.45}) {
    for (int s = 0; s < 5; ++s) {
      const auto data = sample(p0(), 2000, derive_seed(300, s));
      InnerCriterion crit(fam, theta, data, cfg);
      const auto iv = fam.feasible_interval(theta);
      const double step = iv.width() / kBruteGrid;
      double best = 1e300, arg = iv.lo;
      for (int i = 0; i <= kBruteGrid; ++i) {
        const double a = iv.lo + i * step;
        const double v = crit.value(a);
        if (v < best) best = v, arg = a;
      }
      const auto sol = inner_minimize_empirical(theta, data, model, cfg);
      worst_steps = std::max(worst_steps, std::abs(sol.a_star - arg) / step);
    }
  }
  return {worst_steps <= 1.0, fmt::format("worst |a* - brute| = {:.3g} grid steps", worst_steps)};
}

Outcome c4_consistency() {
  ExperimentConfig cfg;
  cfg.n_ladder = {100, 1000, 10000, 50000};
  cfg.replications = 20;
  cfg.base_seed = 400;
  const auto rows = run_sweep(cfg);
  std::vector<double> med_mu, med_a;
  bool all_ok = true;
  for (std::size_t k = 0; k < cfg.n_ladder.size(); ++k) {
    std::vector<double> em, ea;
    for (const auto& r : rows)
      if (r.n == cfg.n_ladder[k]) {
        all_ok &= r.status == "ok";
        em.push_back(r.abs_err_mu);
        ea.push_back(r.abs_err_a);
      }
    med_mu.push_back(median(em));
    med_a.push_back(median(ea));
  }
  const bool mono = std::is_sorted(med_mu.rbegin(), med_mu.rend()) && std::is_sorted(med_a.rbegin(), med_a.rend());
  return {all_ok && mono && med_mu.back() < kMuMedianAt50k,
          fmt::format("median |mu_hat - 0.4| = [{:.4g}], median |a_hat - 4| = [{:.4g}]", fmt::join(med_mu, ", "), fmt::join(med_a, ", "))};
}

Outcome c5_projection_consistency() {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  const auto star = inner_minimize_population(0.4, p0(), model, cfg);
  std::vector<double> meds;
  for (long long n : {100LL, 1000LL, 10000LL}) {
    std::vector<double> d;
    for (int s = 0; s < 20; ++s) {
      const auto data = sample(p0(), n, derive_seed(500, s));
      d.push_back(sup_distance(inner_minimize_empirical(0.4, data, model, cfg).density, star.density));
    }
    meds.push_back(median(d));
  }
  const bool ok = std::is_sorted(meds.rbegin(), meds.rend()) && meds.back() < kSupMedianAt10k;
  return {ok, fmt::format("median sup|q_n - q*| = [{:.4g}]", fmt::join(meds, ", "))};
}

Outcome c6_restarts() {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  QuadraticMomentFamily fam(model);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double theta = model.theta_space.lo + u(rng) * model.theta_space.width();
    const auto data = sample(p0(), 500, derive_seed(600, i));
    const auto iv = fam.feasible_interval(theta);
    const auto ref = inner_minimize(theta, data, fam, cfg);
    for (int k = 0; k < 5; ++k) {
      InnerOptions opt;
      opt.minimize.grid_cells = 32 + static_cast<int>(u(rng) * 96);
      // Shrink the bracket by up to 20% on each side without cutting off the reference solution.
      const double lo = std::min(iv.lo + 0.2 * u(rng) * iv.width(), ref.a_star);
      const double hi = std::max(iv.hi - 0.2 * u(rng) * iv.width(), ref.a_star);
      const auto sol = inner_minimize(theta, data, fam, cfg, opt, Interval{lo, hi});
      worst = std::max(worst, std::abs(sol.a_star - ref.a_star));
    }
  }
  return {worst <= kRestartTol, fmt::format("max |a* spread| = {:.3g}", worst)};
}

Outcome c7_identifiability() {
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  const double at_truth = inner_minimize_population(0.4, p0(), model, cfg).objective;
  double margin = 1e300, where = 0.0;
  for (int i = 0; 0.25 + 0.01 * i <= 0.6 + 1e-12; ++i) {
    const double theta = 0.25 + 0.01 * i;
    if (std::abs(theta - 0.4) < 0.05 - 1e-12) continue;
    const double gap = inner_minimize_population(theta, p0(), model, cfg).objective - at_truth;
    if (gap < margin) margin = gap, where = theta;
  }
  return {margin > kIdentMargin, fmt::format("min profile margin = {:.4g} at theta = {:.2f}", margin, where)};
}

Outcome c8_reproducibility() {
  const auto base = fs::temp_directory_path() / "powdiv_acceptance";
  fs::remove_all(base);
  ExperimentConfig cfg;
  cfg.output_dir = base / "run1";
  const auto a = run_experiment(cfg);
  cfg.output_dir = base / "run2";
  const auto b = run_experiment(cfg);
  const bool same = slurp(a.sweep_csv) == slurp(b.sweep_csv);
  const bool charts = fs::exists(a.mu_chart) && fs::exists(a.a_chart) && slurp(a.mu_chart) == slurp(b.mu_chart) &&
                      slurp(a.a_chart) == slurp(b.a_chart);
  const bool rows = a.rows.size() == 9 && std::all_of(a.rows.begin(), a.rows.end(), [](auto& r) { return r.status == "ok"; });
  return {same && charts && rows, fmt::format("sweep identical: {}, charts identical: {}, 9 ok rows: {}", same, charts, rows)};
}

Outcome c9_audit() {
  const auto audit = audit_model(ModelDescription{});
  bool ok = true;
  std::string detail;
  for (const auto& c : audit.checks) {
    if (c.name == "E1" || c.name == "E2" || c.name == "floor" || c.name == "feasibility" || c.name == "M4") {
      ok &= c.ok;
      detail += fmt::format("{}={} ", c.name, c.ok ? "ok" : "FAIL");
    }
  }
  // Independent M4 probe: Lipschitz ratios at two grid steps should agree.
  const MomentModel model;
  const DivergenceConfig cfg(0.5, kUnit);
  std::vector<double> coarse, fine;
  for (int i = 0; i <= 35; ++i) coarse.push_back(0.25 + 0.01 * i);
  for (int i = 0; i <= 70; ++i) fine.push_back(0.25 + 0.005 * i);
  const double r1 = m4_lipschitz_probe(model, p0(), cfg, coarse);
  const double r2 = m4_lipschitz_probe(model, p0(), cfg, fine);
  const bool m4 = r1 > 0.0 && std::abs(r1 - r2) <= kM4RelTol * std::max(r1, r2);
  return {ok && m4 && audit.ok(), detail + fmt::format("M4 ratio {:.4g} vs {:.4g}, ", r1, r2) +
                                      (audit.ok() ? "(all audit checks pass)" : "(some audit check failed)")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"C1 divergence properties", c1_divergence},
      {"C2 population recovery", c2_population},
      {"C3 inner solve vs exhaustive scan", c3_inner_vs_brute},
      {"C4 estimator consistency", c4_consistency},
      {"C5 projection consistency", c5_projection_consistency},
      {"C6 restart stability", c6_restarts},
      {"C7 identifiability margin", c7_identifiability},
      {"C8 sweep reproducibility", c8_reproducibility},
      {"C9 model audit", c9_audit},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fmt::print("{} {}: {} [{:.1f}s]\n", o.pass ? "PASS" : "FAIL", name, o.detail, secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
