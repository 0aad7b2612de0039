#include "fsbe/model_config.hpp"

#include <cmath>
#include <sstream>

#include "fsbe/errors.hpp"

namespace fsbe {

void ModelConfig::validate() const {
  std::ostringstream err;
  if (!(alpha > 1.5 && alpha <= 2.0)) {
    err << "alpha = " << alpha
        << " violates the well-posedness hypothesis 3/2 < alpha < 2 "
           "(alpha = 2 is accepted as the classical endpoint)";
    throw ConfigError(err.str());
  }
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0 (extra damping)");
  if (n_modes < 1) throw ConfigError("n_modes must be >= 1");
  if (grid_size < 2 * n_modes) {
    err << "grid_size = " << grid_size << " is below 2 * n_modes = " << 2 * n_modes
        << "; pointwise products of N-mode fields need at least 2N interior points";
    throw ConfigError(err.str());
  }
  if (!(dt > 0.0)) throw ConfigError("dt must be > 0");
  if (!(norm_ceiling > 0.0)) throw ConfigError("norm_ceiling must be > 0");
  if (n_trunc < 0.0) throw ConfigError("n_trunc must be >= 0 (0 disables truncation)");
  if (hbeta < 0.0) throw ConfigError("hbeta must be >= 0");
}

double default_moment_order(double alpha) {
  return std::ceil(2.0 * alpha / (alpha - 1.0)) + 1.0;
}

}  // namespace fsbe
