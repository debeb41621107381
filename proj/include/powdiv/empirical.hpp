#ifndef POWDIV_EMPIRICAL_HPP
#define POWDIV_EMPIRICAL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace powdiv {

/// P_n: the uniform discrete measure on the sample points.
struct EmpiricalMeasure {
  std::vector<double> points;
  std::uint64_t seed = 0;
  std::string source_descriptor;

  std::size_t size() const { return points.size(); }
};

}  // namespace powdiv

#endif
