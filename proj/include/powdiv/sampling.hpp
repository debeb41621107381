#ifndef POWDIV_SAMPLING_HPP
#define POWDIV_SAMPLING_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "powdiv/empirical.hpp"
#include "powdiv/quadratic.hpp"

namespace powdiv {

/// Odd increment (2^64 / golden ratio) separating replica substreams.
inline constexpr std::uint64_t kReplicaSeedStride = 0x9E3779B97F4A7C15ULL;

/// seed + replica * kReplicaSeedStride, modulo 2^64.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replica) {
  return base + replica * kReplicaSeedStride;
}

/// Uniform draw in (0, 1) from the top 52 bits of one mt19937_64 output:
/// ((r >> 12) + 0.5) * 2^-52. With 53 bits the top cell's midpoint rounds to 1.
double unit_uniform(std::uint64_t raw);

/**
 * n i.i.d. draws from a quadratic density by inverse-CDF.
 *
 * The generator is std::mt19937_64 seeded with `seed`; each draw consumes one
 * 64-bit output u and returns the root of F(x) = u, with F the normalized
 * cubic CDF, located by bisection to 1e-13. Throws std::invalid_argument for
 * n <= 0 or a density that is negative somewhere or lacks unit mass.
 */
EmpiricalMeasure sample(const DensityCandidate& p, long long n, std::uint64_t seed);

/// (1/n) sum q^alpha(X_i) in index order.
double empirical_mean_of(const DensityCandidate& q, double alpha, const EmpiricalMeasure& sample);

/**
 * Single-column CSV. The header row is `x seed=<seed> source=<descriptor>`;
 * points follow one per line with 17 significant digits.
 */
void write_sample_csv(std::ostream& out, const EmpiricalMeasure& sample);
EmpiricalMeasure read_sample_csv(std::istream& in);
EmpiricalMeasure load_sample_csv(const std::string& path);

}  // namespace powdiv

#endif
