#include "powdiv/sampling.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "powdiv/divergence.hpp"
#include "powdiv/numerics.hpp"

namespace powdiv {

double unit_uniform(std::uint64_t raw) {
  return (static_cast<double>(raw >> 12) + 0.5) * 0x1.0p-52;
}

EmpiricalMeasure sample(const DensityCandidate& p, long long n, std::uint64_t seed) {
  if (n <= 0) throw std::invalid_argument("sample size must be positive");
  if (p.min_value() < 0.0) throw std::invalid_argument("cannot sample a density with negative values");
  const double mass = p.mass();
  if (std::abs(mass - 1.0) > 1e-8) throw std::invalid_argument("density does not have unit mass");

  EmpiricalMeasure out;
  out.seed = seed;
  out.source_descriptor = p.describe();
  out.points.reserve(static_cast<std::size_t>(n));

  std::mt19937_64 rng(seed);
  const double lo = p.domain.lower, hi = p.domain.upper;
  for (long long i = 0; i < n; ++i) {
    const double u = unit_uniform(rng());
    const double x =
        find_root_increasing([&](double t) { return p.primitive(t) / mass - u; }, lo, hi, 1e-13);
    out.points.push_back(x);
  }
  return out;
}

double empirical_mean_of(const DensityCandidate& q, double alpha, const EmpiricalMeasure& sample) {
  if (sample.points.empty()) throw std::invalid_argument("empty sample");
  double sum = 0.0;
  for (double x : sample.points) sum += pow_alpha(q(x), alpha);
  return sum / static_cast<double>(sample.points.size());
}

void write_sample_csv(std::ostream& out, const EmpiricalMeasure& sample) {
  out << "x seed=" << sample.seed << " source=" << sample.source_descriptor << '\n';
  for (double x : sample.points) out << fmt::format("{:.17g}\n", x);
}

EmpiricalMeasure read_sample_csv(std::istream& in) {
  EmpiricalMeasure out;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("sample file is empty");

  std::istringstream header(line);
  std::string token;
  while (header >> token) {
    if (token.starts_with("seed=")) {
      const auto v = token.substr(5);
      if (std::from_chars(v.data(), v.data() + v.size(), out.seed).ec != std::errc())
        throw std::runtime_error("line 1: bad seed '" + v + "'");
    } else if (token.starts_with("source=")) {
      out.source_descriptor = token.substr(7);
    }
  }

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), x);
    if (ec != std::errc() || ptr != line.data() + line.size() || !std::isfinite(x))
      throw std::runtime_error(fmt::format("line {}: not a number: '{}'", lineno, line));
    out.points.push_back(x);
  }
  if (out.points.empty()) throw std::runtime_error("sample file has no data rows");
  return out;
}

EmpiricalMeasure load_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sample file '" + path + "'");
  return read_sample_csv(in);
}

}  // namespace powdiv
