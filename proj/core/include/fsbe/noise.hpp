#pragma once

// Cylindrical Wiener increments on the sine modes, the multiplicative action
// of a diffusion coefficient g(u), and a Monte Carlo self-test of the space-
// time covariance (t ^ s)(x ^ y) of the integrated sheet.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fsbe/rng.hpp"
#include "fsbe/spectral_field.hpp"

namespace fsbe {

// Independent increments beta_j(t+dt) - beta_j(t) ~ N(0, dt) per retained mode.
struct NoiseIncrement {
  double dt = 0.0;
  std::vector<double> modes;
  std::size_t size() const { return modes.size(); }
};

// Draws one increment; consumes exactly 2*n_modes counter steps. dt = 0 yields
// zero increments but still advances the counters (degenerate but defined, and
// counter positions stay level-independent).
NoiseIncrement wiener_increment(RngStream& stream, double dt, std::size_t n_modes);

// Scalar diffusion coefficient g: R -> R, bounded and Lipschitz, with its
// declared envelope inf|g|, sup|g| and Lipschitz constant. The named kinds:
//   constant            g = c                  (|c|, |c|, 0)
//   one_plus_half_tanh  g(x) = 1 + tanh(x)/2   (1/2, 3/2, 1/2)
//   tanh                g(x) = tanh(x)         (0, 1, 1)  -- vanishes at 0
// "tanh" exists to exercise the inf|g| > 0 rejection paths.
class DiffusionCoefficient {
 public:
  static DiffusionCoefficient constant(double c);
  static DiffusionCoefficient one_plus_half_tanh();
  static DiffusionCoefficient tanh_kind();
  // Parses a config kind name; value is only read for "constant".
  static DiffusionCoefficient from_name(const std::string& kind, double value);

  double operator()(double x) const;
  double inf_abs() const { return inf_abs_; }
  double sup_abs() const { return sup_abs_; }
  double lipschitz() const { return lipschitz_; }
  bool is_constant() const { return kind_ == Kind::constant; }
  double constant_value() const { return value_; }
  const std::string& name() const { return name_; }

 private:
  enum class Kind { constant, one_plus_half_tanh, tanh_fn };
  DiffusionCoefficient(Kind k, double v, double lo, double hi, double lip, std::string name)
      : kind_(k), value_(v), inf_abs_(lo), sup_abs_(hi), lipschitz_(lip), name_(std::move(name)) {}
  Kind kind_;
  double value_;
  double inf_abs_, sup_abs_, lipschitz_;
  std::string name_;
};

// g(u) dW projected back onto the retained modes: synthesize u and the
// increment on the m_grid interior points, multiply pointwise by g(u(x_i)),
// analyze back. Constant g short-circuits to exact scaling (linearity), so
// g = 1 returns the increment bit-for-bit.
SpectralField multiplicative_increment(const SpectralField& u, const NoiseIncrement& inc,
                                       const DiffusionCoefficient& g, std::size_t m_grid);

struct CovarianceCheck {
  double empirical = 0.0;
  double exact = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_modes = 0;
  // z-score of the discrepancy; the mode truncation bias is O(1/N) and has to
  // stay inside the Monte Carlo band for the test to be meaningful.
  double z_score() const { return (empirical - exact) / std_error; }
};

// Monte Carlo estimate of E[W(t,x) W(s,y)] for the integrated sheet
// W(t,x) = sum_j beta_j(t) int_0^x e_j, against the exact (t ^ s)(x ^ y).
// Requires n_samples >= 100, x,y in [0,1], t,s >= 0. Sample i uses stream id i.
CovarianceCheck field_covariance_test(std::uint64_t master_seed, double t, double s, double x,
                                      double y, std::size_t n_samples, std::size_t n_modes);

}  // namespace fsbe
