#pragma once

// Model-level parameters shared by every integrator and experiment: the
// fractional dissipation exponent alpha, the damping gamma used by the
// stochastic convolution, truncation sizes, the time step and the diffusion
// coefficient.

#include <cstddef>
#include <cstdint>

#include "fsbe/noise.hpp"

namespace fsbe {

struct ModelConfig {
  double alpha = 1.8;     // dissipation exponent of (-Laplacian)^{alpha/2}
  double gamma = 0.0;     // extra damping for the z_gamma convolution
  std::size_t n_modes = 64;
  std::size_t grid_size = 128;  // interior collocation points, >= 2 n_modes
  double dt = 1e-3;
  std::uint64_t seed = 20260824;
  DiffusionCoefficient g = DiffusionCoefficient::one_plus_half_tanh();
  bool convective = true;   // include d/dx(u^2); off gives the linear OU field
  double n_trunc = 0.0;     // >0: radius of the radial retraction applied to
                            // the convective argument (0 = no truncation)
  double norm_ceiling = 1e6;  // |u|_L2 above this aborts the trajectory
  double hbeta = 0.1;         // exponent of the H^beta trajectory observable

  // Throws ConfigError naming the violated hypothesis.
  void validate() const;
};

// Smallest moment order with a uniform-in-time bound under the standing
// hypotheses: ceil(2 alpha / (alpha - 1)) + 1.
double default_moment_order(double alpha);

}  // namespace fsbe
