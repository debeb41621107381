#include "powdiv/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "powdiv/estimator.hpp"
#include "powdiv/sampling.hpp"

namespace powdiv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kSweepHeader = "n,replication,seed,mu_hat,a_hat,abs_err_mu,abs_err_a,status,error";

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

template <typename T>
T parse_field(const std::string& text, int line, const char* column) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::runtime_error(fmt::format("sweep csv line {}: bad {} '{}'", line, column, text));
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

SweepRow run_row(const ExperimentConfig& cfg, const DivergenceConfig& div, const MomentModel& model,
                 const DensityCandidate& p0, long long n, int rep) {
  SweepRow row;
  row.n = n;
  row.replication = rep;
  row.seed = derive_seed(cfg.base_seed, static_cast<std::uint64_t>(rep));
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto data = sample(p0, n, row.seed);
    OuterGridConfig grid;
    grid.points = cfg.grid_points;
    if (cfg.time_budget_ms)
      grid.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                  std::chrono::duration<double, std::milli>(*cfg.time_budget_ms));
    const auto est = outer_minimize(data, model, div, grid);
    row.mu_hat = est.theta_hat;
    row.a_hat = est.inner.a_star;
    row.abs_err_mu = std::abs(row.mu_hat - cfg.true_mu);
    row.abs_err_a = std::abs(row.a_hat - cfg.true_a);
  } catch (const TimeoutError& e) {
    row.mu_hat = row.a_hat = row.abs_err_mu = row.abs_err_a = kNaN;
    row.status = "timeout";
    row.error = e.what();
  } catch (const std::exception& e) {
    row.mu_hat = row.a_hat = row.abs_err_mu = row.abs_err_a = kNaN;
    row.status = "error";
    row.error = e.what();
  }
  row.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return row;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_ladder.empty()) throw std::invalid_argument("empty sample-size ladder");
  for (auto n : n_ladder)
    if (n < 1) throw std::invalid_argument("sample sizes must be >= 1");
  if (replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (!(theta_space.lo < theta_space.hi)) throw std::invalid_argument("empty parameter interval");
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const Domain domain{0.0, 1.0};
  MomentModel model;
  model.domain = domain;
  model.theta_space = config.theta_space;
  model.class_config.floor_gamma = config.gamma;
  const DivergenceConfig div(config.alpha, domain, config.quad_order);
  const auto p0 = constrained_density(config.true_a, config.true_mu, domain);

  const std::size_t reps = static_cast<std::size_t>(config.replications);
  const std::size_t total = config.n_ladder.size() * reps;
  std::vector<SweepRow> rows(total);

  unsigned workers = config.workers ? config.workers : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(total));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < total; i = next++)
      rows[i] = run_row(config, div, model, p0, config.n_ladder[i / reps], static_cast<int>(i % reps));
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepHeader << '\n';
  for (const auto& r : rows)
    fmt::print(out, "{},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{},{}\n", r.n, r.replication, r.seed,
               r.mu_hat, r.a_hat, r.abs_err_mu, r.abs_err_a, r.status, csv_safe(r.error));
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kSweepHeader)
    throw std::runtime_error("sweep csv: unexpected header");
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 9) throw std::runtime_error(fmt::format("sweep csv line {}: expected 9 fields", lineno));
    SweepRow r;
    r.n = parse_field<long long>(f[0], lineno, "n");
    r.replication = parse_field<int>(f[1], lineno, "replication");
    r.seed = parse_field<std::uint64_t>(f[2], lineno, "seed");
    r.mu_hat = parse_field<double>(f[3], lineno, "mu_hat");
    r.a_hat = parse_field<double>(f[4], lineno, "a_hat");
    r.abs_err_mu = parse_field<double>(f[5], lineno, "abs_err_mu");
    r.abs_err_a = parse_field<double>(f[6], lineno, "abs_err_a");
    r.status = f[7];
    r.error = f[8];
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_timings_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "n,replication,wall_time_ms\n";
  for (const auto& r : rows) fmt::print(out, "{},{},{}\n", r.n, r.replication, r.wall_time_ms);
}

ExperimentOutputs run_experiment(const ExperimentConfig& config) {
  ExperimentOutputs out;
  out.rows = run_sweep(config);
  std::filesystem::create_directories(config.output_dir);

  std::ostringstream sweep;
  write_sweep_csv(sweep, out.rows);
  out.sweep_csv = config.output_dir / "sweep.csv";
  write_file(out.sweep_csv, sweep.str());

  std::ostringstream timings;
  write_timings_csv(timings, out.rows);
  out.timings_csv = config.output_dir / "timings.csv";
  write_file(out.timings_csv, timings.str());

  // Charts are drawn from the CSV text so that re-plotting the file reproduces them.
  std::tie(out.mu_chart, out.a_chart) =
      plot_sweep_csv(out.sweep_csv, config.output_dir, config.true_mu, config.true_a);
  return out;
}

std::pair<std::filesystem::path, std::filesystem::path> plot_sweep_csv(
    const std::filesystem::path& sweep_csv, const std::filesystem::path& output_dir, double true_mu,
    double true_a) {
  std::ifstream in(sweep_csv);
  if (!in) throw std::runtime_error("cannot open '" + sweep_csv.string() + "'");
  const auto rows = read_sweep_csv(in);
  std::filesystem::create_directories(output_dir);
  const auto mu_path = output_dir / "mu_hat.svg";
  const auto a_path = output_dir / "a_hat.svg";
  write_file(mu_path, render_convergence_chart(rows, ChartQuantity::mu, true_mu));
  write_file(a_path, render_convergence_chart(rows, ChartQuantity::a, true_a));
  return {mu_path, a_path};
}

bool ModelAudit::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.ok; });
}

ModelAudit audit_model(const ModelDescription& desc, int theta_points) {
  ModelAudit audit;
  const auto& model = desc.model;
  const auto& cls = model.class_config;
  const auto cfg = desc.divergence_config();
  auto add = [&](std::string name, bool ok, std::string witness) {
    audit.checks.push_back({std::move(name), ok, std::move(witness)});
  };

  add("class-config", cls.floor_gamma > 0.0 && cls.bound > 0.0 && cls.lipschitz_M > 0.0,
      fmt::format("gamma={:.6g} B={:.6g} M={:.6g}", cls.floor_gamma, cls.bound, cls.lipschitz_M));

  // Feasibility scan over the theta grid.
  const Interval space = model.theta_space;
  std::vector<double> thetas(theta_points);
  for (int i = 0; i < theta_points; ++i)
    thetas[i] = i == theta_points - 1 ? space.hi : space.lo + i * space.width() / (theta_points - 1);

  std::vector<std::optional<Interval>> feasible(theta_points);
  std::vector<double> empty;
  for (int i = 0; i < theta_points; ++i) {
    try {
      feasible[i] = feasible_a_interval(thetas[i], model);
    } catch (const InfeasibleError&) {
      empty.push_back(thetas[i]);
    }
  }
  {
    std::string w = fmt::format("{}/{} theta grid points feasible", theta_points - empty.size(), theta_points);
    if (!empty.empty()) w += fmt::format("; empty a-interval at theta in [{:.6g}, {:.6g}]", empty.front(), empty.back());
    add("feasibility", empty.empty(), w);
  }

  // Membership of sampled family members at each feasible theta.
  constexpr int kProbes = 9;
  auto probe_a = [](const Interval& iv, int j) {
    return j == kProbes - 1 ? iv.hi : iv.lo + j * iv.width() / (kProbes - 1);
  };
  double max_abs = 0.0, max_lip = 0.0, min_val = std::numeric_limits<double>::infinity();
  double max_residual = 0.0;
  bool m1_ok = true;
  double m1_worst = 0.0;
  for (int i = 0; i < theta_points; ++i) {
    if (!feasible[i]) continue;
    for (int j = 0; j < kProbes; ++j) {
      const auto q = constrained_density(probe_a(*feasible[i], j), thetas[i], model.domain);
      const auto rep = check_membership(q, thetas[i], model, cfg);
      max_abs = std::max(max_abs, rep.max_abs);
      max_lip = std::max(max_lip, rep.lipschitz_estimate);
      min_val = std::min(min_val, rep.min_value);
      max_residual = std::max({max_residual, std::abs(rep.moment_residual), std::abs(rep.normalization_residual)});
      // M1: the same density tested at another theta misses the moment by (theta - theta') * mass.
      const int other = i + 1 < theta_points ? i + 1 : i - 1;
      if (other >= 0 && other != i) {
        const auto rep2 = check_membership(q, thetas[other], model, cfg);
        const double expected = (thetas[i] - thetas[other]) * q.mass();
        const double err = std::abs(rep2.moment_residual - expected);
        m1_worst = std::max(m1_worst, err);
        if (err > 1e-10 || std::abs(rep2.moment_residual) <= kResidualTolerance) m1_ok = false;
      }
    }
  }
  const bool any_feasible = empty.size() < static_cast<std::size_t>(theta_points);
  add("E1", any_feasible && max_abs <= cls.bound, fmt::format("max |q| = {:.6g} (B = {:.6g})", max_abs, cls.bound));
  add("E2", any_feasible && max_lip <= cls.lipschitz_M,
      fmt::format("grid Lipschitz of q^alpha = {:.6g} (M = {:.6g})", max_lip, cls.lipschitz_M));
  add("floor", any_feasible && cls.floor_gamma > 0.0 && min_val >= cls.floor_gamma - kFloorTolerance,
      fmt::format("min q = {:.6g} (gamma = {:.6g})", min_val, cls.floor_gamma));
  add("membership", any_feasible && max_residual <= kResidualTolerance,
      fmt::format("max constraint residual = {:.3g}", max_residual));
  add("M1", any_feasible && m1_ok, fmt::format("max deviation from (theta - theta') * mass = {:.3g}", m1_worst));

  // M2: separation between feasible sets at least 0.05 apart.
  {
    double abs_x = 0.0;  // int_K |x| dx
    const auto& k = model.domain;
    if (k.lower >= 0.0 || k.upper <= 0.0)
      abs_x = std::abs(k.upper * k.upper - k.lower * k.lower) / 2.0;
    else
      abs_x = (k.upper * k.upper + k.lower * k.lower) / 2.0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    double worst_sep = std::numeric_limits<double>::infinity();
    bool ok = true;
    int pairs = 0;
    for (int i = 0; i < theta_points; ++i) {
      if (!feasible[i]) continue;
      int j = i + 1;
      while (j < theta_points && thetas[j] - thetas[i] < 0.05 - 1e-12) ++j;
      if (j >= theta_points || !feasible[j]) continue;
      double sep = std::numeric_limits<double>::infinity();
      for (int s = 0; s < kProbes; ++s)
        for (int t = 0; t < kProbes; ++t)
          sep = std::min(sep, separation_witness(
                                  constrained_density(probe_a(*feasible[i], s), thetas[i], k),
                                  constrained_density(probe_a(*feasible[j], t), thetas[j], k)));
      const double bound = (thetas[j] - thetas[i]) / abs_x;
      ++pairs;
      worst_sep = std::min(worst_sep, sep);
      worst_ratio = std::min(worst_ratio, sep / bound);
      if (!(sep > 0.0) || sep < bound * (1.0 - 1e-9)) ok = false;
    }
    add("M2", ok && pairs > 0,
        fmt::format("{} pairs, min sup-separation = {:.6g}, min ratio to |dtheta|/int|x| = {:.6g}", pairs,
                    worst_sep, worst_ratio));
  }

  // Population probes around the reference density.
  const auto p0 = desc.reference_density();
  const bool p0_valid = p0.min_value() >= 0.0 && space.contains(desc.p0_mu);
  int first = -1, last = -1;
  for (int i = 0; i < theta_points; ++i)
    if (feasible[i]) {
      if (first < 0) first = i;
      last = i;
    }

  if (!p0_valid || first < 0) {
    add("M3", false, "reference density invalid or no feasible theta");
    add("M4", false, "reference density invalid or no feasible theta");
  } else {
    const Interval fs{thetas[first], thetas[last]};
    auto make_grid = [&](double step) {
      std::vector<double> g;
      const int m = static_cast<int>(std::floor(fs.width() / step + 1e-9));
      for (int i = 0; i <= m; ++i) g.push_back(fs.lo + i * step);
      return g;
    };

    {
      const auto theta0 = inner_minimize_population(desc.p0_mu, p0, model, cfg);
      double margin = std::numeric_limits<double>::infinity();
      int compared = 0;
      for (double theta : make_grid(0.01)) {
        if (std::abs(theta - desc.p0_mu) < 0.05 - 1e-12) continue;
        try {
          const auto sol = inner_minimize_population(theta, p0, model, cfg);
          margin = std::min(margin, sol.objective - theta0.objective);
          ++compared;
        } catch (const InfeasibleError&) {
        }
      }
      add("M3", compared > 0 && margin > 1e-6,
          fmt::format("min objective margin at |theta - {:.6g}| >= 0.05: {:.6g} over {} points", desc.p0_mu, margin,
                      compared));
    }
    {
      const auto coarse = make_grid(0.01);
      const auto fine = make_grid(0.005);
      const double r1 = m4_lipschitz_probe(model, p0, cfg, coarse);
      const double r2 = m4_lipschitz_probe(model, p0, cfg, fine);
      const double rel = std::abs(r1 - r2) / std::max({r1, r2, 1e-300});
      add("M4", std::isfinite(r1) && std::isfinite(r2) && rel <= 0.2,
          fmt::format("Lipschitz ratio {:.6g} (step 0.01) vs {:.6g} (step 0.005), relative gap {:.3g}", r1, r2,
                      rel));
    }
  }
  return audit;
}

void write_audit(std::ostream& out, const ModelAudit& audit) {
  for (const auto& c : audit.checks) fmt::print(out, "[{}] {}: {}\n", c.ok ? "PASS" : "FAIL", c.name, c.witness);
  fmt::print(out, "overall: {}\n", audit.ok() ? "PASS" : "FAIL");
}

}  // namespace powdiv
