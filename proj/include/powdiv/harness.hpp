#ifndef POWDIV_HARNESS_HPP
#define POWDIV_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "powdiv/model_file.hpp"
#include "powdiv/numerics.hpp"

namespace powdiv {

struct ExperimentConfig {
  std::vector<long long> n_ladder{10, 50, 100, 500, 1000, 5000, 10000, 50000, 100000};
  int replications = 1;
  std::uint64_t base_seed = 1;
  double alpha = 0.5;
  double true_a = 4.0;
  double true_mu = 0.4;
  Interval theta_space{0.25, 0.6};
  double gamma = 1e-6;
  int quad_order = kDefaultQuadratureOrder;
  int grid_points = 41;
  /// Per-estimation budget; rows that exceed it are recorded as timeouts.
  std::optional<double> time_budget_ms;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;
  std::filesystem::path output_dir = ".";

  /// Throws std::invalid_argument on an empty ladder, n < 1 or replications < 1.
  void validate() const;
};

/// One estimation of the sweep. Replica r uses derive_seed(base_seed, r) at
/// every n, so the samples along the ladder are nested prefixes.
struct SweepRow {
  long long n = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  double mu_hat = 0.0;
  double a_hat = 0.0;
  double abs_err_mu = 0.0;
  double abs_err_a = 0.0;
  long long wall_time_ms = 0;
  std::string status = "ok";  // ok | timeout | error
  std::string error;
};

/// Rows in (n, replication) order whatever the completion order.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

/**
 * Sweep table `n,replication,seed,mu_hat,a_hat,abs_err_mu,abs_err_a,status,error`,
 * reals with 12 significant digits. Wall times go to a separate table so the
 * sweep itself is reproducible byte for byte.
 */
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
void write_timings_csv(std::ostream& out, std::span<const SweepRow> rows);

enum class ChartQuantity { mu, a };

/// Standalone SVG: estimates against log10(n), per-n medians joined, truth dashed.
std::string render_convergence_chart(std::span<const SweepRow> rows, ChartQuantity quantity,
                                     double truth);

struct ExperimentOutputs {
  std::vector<SweepRow> rows;
  std::filesystem::path sweep_csv;
  std::filesystem::path timings_csv;
  std::filesystem::path mu_chart;
  std::filesystem::path a_chart;
};

/// Runs the sweep and writes sweep.csv, timings.csv, mu_hat.svg and a_hat.svg.
ExperimentOutputs run_experiment(const ExperimentConfig& config);

/// Re-renders both charts from a sweep CSV into `output_dir`.
std::pair<std::filesystem::path, std::filesystem::path> plot_sweep_csv(
    const std::filesystem::path& sweep_csv, const std::filesystem::path& output_dir,
    double true_mu, double true_a);

struct AuditCheck {
  std::string name;
  bool ok = false;
  std::string witness;
};

struct ModelAudit {
  std::vector<AuditCheck> checks;
  bool ok() const;
};

/**
 * Instance-level audit of a model description: class configuration,
 * feasibility over a theta grid, E1, E2, floor, membership residuals,
 * M1, M2, the M3 population-profile probe and the M4 Lipschitz probe.
 */
ModelAudit audit_model(const ModelDescription& desc, int theta_points = 41);

void write_audit(std::ostream& out, const ModelAudit& audit);

}  // namespace powdiv

#endif
