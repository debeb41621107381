#ifndef POWDIV_MODEL_FILE_HPP
#define POWDIV_MODEL_FILE_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "powdiv/model.hpp"

namespace powdiv {

/**
 * Contents of a model description file.
 *
 * The file is plain text with one `key = value` per line; `#` starts a
 * comment. Recognised keys:
 *
 *   domain_lower, domain_upper   support K (default 0, 1)
 *   theta_min, theta_max         parameter interval (default 0.25, 0.6)
 *   gamma                        positivity floor (default 1e-6)
 *   alpha                        divergence exponent (default 0.5)
 *   quad_order                   Gauss-Legendre order (default 32)
 *   bound                        uniform bound B (default 100)
 *   lipschitz_m                  Lipschitz constant M for q^alpha (default 1e4)
 *   lipschitz_grid               grid size for the Lipschitz witness (default 2048)
 *   p0_a, p0_mu                  reference density used by population probes (default 4, 0.4)
 */
struct ModelDescription {
  MomentModel model{};
  double alpha = 0.5;
  int quad_order = kDefaultQuadratureOrder;
  double p0_a = 4.0;
  double p0_mu = 0.4;

  DivergenceConfig divergence_config() const { return {alpha, model.domain, quad_order}; }
  DensityCandidate reference_density() const {
    return constrained_density(p0_a, p0_mu, model.domain);
  }
};

class ModelFileError : public std::runtime_error {
 public:
  ModelFileError(const std::string& key, int line, const std::string& what);

  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

/// gamma may be 0 here so that audits can report the floor failure.
ModelDescription parse_model_description(std::istream& in);
ModelDescription load_model_description(const std::string& path);
void write_model_description(std::ostream& out, const ModelDescription& desc);

}  // namespace powdiv

#endif
