// Command-line front end for minimum power-divergence estimation in the
// moment-constrained quadratic model.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "powdiv/estimator.hpp"
#include "powdiv/harness.hpp"
#include "powdiv/model_file.hpp"
#include "powdiv/sampling.hpp"

namespace {

using namespace powdiv;

// Flags shared by estimate and project; unset flags leave the model file (or defaults) alone.
struct ModelFlags {
  std::string model_file;
  std::optional<double> alpha, theta_min, theta_max, gamma, true_a, true_mu;
  std::optional<int> quad_order;

  void attach(CLI::App* app) {
    app->add_option("--model", model_file, "Model description file")->check(CLI::ExistingFile);
    app->add_option("--alpha", alpha, "Divergence exponent in (0, 1]");
    app->add_option("--theta-min", theta_min, "Lower end of the parameter interval");
    app->add_option("--theta-max", theta_max, "Upper end of the parameter interval");
    app->add_option("--gamma", gamma, "Positivity floor of the density class");
    app->add_option("--quad-order", quad_order, "Gauss-Legendre order");
    app->add_option("--true-a", true_a, "Quadratic coefficient of the generating density");
    app->add_option("--true-mu", true_mu, "Mean of the generating density");
  }

  ModelDescription resolve() const {
    ModelDescription d = model_file.empty() ? ModelDescription{} : load_model_description(model_file);
    if (alpha) d.alpha = *alpha;
    if (theta_min) d.model.theta_space.lo = *theta_min;
    if (theta_max) d.model.theta_space.hi = *theta_max;
    if (gamma) d.model.class_config.floor_gamma = *gamma;
    if (quad_order) d.quad_order = *quad_order;
    if (true_a) d.p0_a = *true_a;
    if (true_mu) d.p0_mu = *true_mu;
    if (!(d.model.class_config.floor_gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    return d;
  }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum density power divergence estimation under a moment constraint"};
  app.require_subcommand(1);

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate theta and the fitted density");
  ModelFlags est_flags;
  est_flags.attach(estimate);
  long long est_n = 1000;
  std::uint64_t est_seed = 1;
  int est_grid = 41;
  std::string est_out = ".";
  std::string est_sample_file;
  bool est_population = false;
  estimate->add_option("--n", est_n, "Sample size when generating data")->check(CLI::PositiveNumber);
  estimate->add_option("--seed", est_seed, "Seed for generated data");
  estimate->add_option("--grid", est_grid, "Outer grid points")->check(CLI::Range(8, 100000));
  estimate->add_option("--out", est_out, "Output directory for profile.csv and summary.txt");
  estimate->add_option("--sample-file", est_sample_file, "Single-column sample CSV");
  estimate->add_flag("--population", est_population, "Use the generating density itself instead of a sample");
  std::string est_save_sample;
  estimate->add_option("--save-sample", est_save_sample, "Write the generated sample to this CSV");

  // project
  auto* project = app.add_subcommand("project", "Project the generating density on M_theta");
  ModelFlags proj_flags;
  proj_flags.attach(project);
  double proj_theta = 0.4;
  project->add_option("--theta", proj_theta, "Constraint parameter")->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Replicated sweep over sample sizes");
  ExperimentConfig exp;
  std::vector<long long> exp_ladder;
  std::string exp_out = "experiment";
  std::optional<double> budget;
  experiment->add_option("--n", exp_ladder, "Sample sizes (repeatable); defaults to the 10..100000 ladder");
  experiment->add_option("--reps", exp.replications, "Replications per sample size")->check(CLI::PositiveNumber);
  experiment->add_option("--seed", exp.base_seed, "Base seed");
  experiment->add_option("--alpha", exp.alpha, "Divergence exponent in (0, 1]");
  experiment->add_option("--theta-min", exp.theta_space.lo, "Lower end of the parameter interval");
  experiment->add_option("--theta-max", exp.theta_space.hi, "Upper end of the parameter interval");
  experiment->add_option("--grid", exp.grid_points, "Outer grid points")->check(CLI::Range(8, 100000));
  experiment->add_option("--gamma", exp.gamma, "Positivity floor");
  experiment->add_option("--quad-order", exp.quad_order, "Gauss-Legendre order");
  experiment->add_option("--true-a", exp.true_a, "Quadratic coefficient of the generating density");
  experiment->add_option("--true-mu", exp.true_mu, "Mean of the generating density");
  experiment->add_option("--time-budget-ms", budget, "Per-estimation time budget");
  experiment->add_option("--threads", exp.workers, "Worker threads (0 = all cores)");
  experiment->add_option("--out", exp_out, "Output directory");

  // check-model
  auto* check = app.add_subcommand("check-model", "Audit the model conditions on a description file");
  std::string check_file;
  check->add_option("model", check_file, "Model description file")->required()->check(CLI::ExistingFile);

  // plot
  auto* plot = app.add_subcommand("plot", "Redraw the charts from a sweep CSV");
  std::string plot_in, plot_out = ".";
  double plot_mu = 0.4, plot_a = 4.0;
  plot->add_option("--in", plot_in, "sweep.csv produced by experiment")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out, "Output directory");
  plot->add_option("--true-mu", plot_mu, "Reference mean");
  plot->add_option("--true-a", plot_a, "Reference coefficient");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*estimate) {
      const auto desc = est_flags.resolve();
      const auto cfg = desc.divergence_config();
      OuterGridConfig grid;
      grid.points = est_grid;

      std::optional<EmpiricalMeasure> data;
      EstimationResult result;
      std::optional<std::uint64_t> seed;
      if (est_population) {
        const auto p0 = desc.reference_density();
        result = outer_minimize(p0, desc.model, cfg, grid);
      } else {
        if (!est_sample_file.empty()) {
          data = load_sample_csv(est_sample_file);
        } else {
          data = sample(desc.reference_density(), est_n, est_seed);
          if (!est_save_sample.empty()) {
            std::ostringstream csv;
            write_sample_csv(csv, *data);
            write_text(est_save_sample, csv.str());
          }
        }
        seed = data->seed;
        result = outer_minimize(*data, desc.model, cfg, grid);
      }

      std::ostringstream summary;
      write_summary(summary, result, seed);
      std::cout << summary.str();
      const std::filesystem::path dir(est_out);
      std::filesystem::create_directories(dir);
      std::ostringstream profile;
      write_profile_csv(profile, result);
      write_text(dir / "profile.csv", profile.str());
      write_text(dir / "summary.txt", summary.str());
      return 0;
    }

    if (*project) {
      const auto desc = proj_flags.resolve();
      const auto cfg = desc.divergence_config();
      const auto sol = inner_minimize_population(proj_theta, desc.reference_density(), desc.model, cfg);
      const auto dv = r_alpha(sol.density, desc.reference_density(), cfg);
      fmt::print("theta: {:.12g}\n", sol.theta);
      fmt::print("a_star: {:.12g}\nb: {:.12g}\nc: {:.12g}\n", sol.a_star, sol.density.b, sol.density.c);
      fmt::print("r_alpha: {:.12g}\nd_alpha: {:.12g}\n", sol.objective, dv.d_alpha.value_or(0.0));
      fmt::print("feasible_a: [{:.12g}, {:.12g}]\non_boundary: {}\n", sol.feasible_interval.lo,
                 sol.feasible_interval.hi, sol.on_boundary);
      return 0;
    }

    if (*experiment) {
      if (!exp_ladder.empty()) exp.n_ladder = exp_ladder;
      exp.time_budget_ms = budget;
      exp.output_dir = exp_out;
      const auto outputs = run_experiment(exp);
      std::size_t failed = 0;
      for (const auto& r : outputs.rows) failed += r.status != "ok";
      fmt::print("rows: {} ({} failed)\nsweep: {}\ntimings: {}\ncharts: {} {}\n", outputs.rows.size(), failed,
                 outputs.sweep_csv.string(), outputs.timings_csv.string(), outputs.mu_chart.string(),
                 outputs.a_chart.string());
      return 0;
    }

    if (*check) {
      const auto desc = load_model_description(check_file);
      const auto audit = audit_model(desc);
      write_audit(std::cout, audit);
      return audit.ok() ? 0 : 1;
    }

    if (*plot) {
      const auto [mu_path, a_path] = plot_sweep_csv(plot_in, plot_out, plot_mu, plot_a);
      fmt::print("charts: {} {}\n", mu_path.string(), a_path.string());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
