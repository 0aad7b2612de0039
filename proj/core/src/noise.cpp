#include "fsbe/noise.hpp"

#include <cmath>
#include <numbers>

#include "fsbe/errors.hpp"
#include "fsbe/transforms.hpp"

namespace fsbe {

NoiseIncrement wiener_increment(RngStream& stream, double dt, std::size_t n_modes) {
  if (dt < 0.0) throw UsageError("wiener_increment: negative time step");
  NoiseIncrement inc;
  inc.dt = dt;
  inc.modes.resize(n_modes);
  const double sd = std::sqrt(dt);
  for (std::size_t j = 0; j < n_modes; ++j) inc.modes[j] = sd * stream.normal();
  return inc;
}

DiffusionCoefficient DiffusionCoefficient::constant(double c) {
  return DiffusionCoefficient(Kind::constant, c, std::abs(c), std::abs(c), 0.0, "constant");
}

DiffusionCoefficient DiffusionCoefficient::one_plus_half_tanh() {
  return DiffusionCoefficient(Kind::one_plus_half_tanh, 0.0, 0.5, 1.5, 0.5,
                              "one_plus_half_tanh");
}

DiffusionCoefficient DiffusionCoefficient::tanh_kind() {
  return DiffusionCoefficient(Kind::tanh_fn, 0.0, 0.0, 1.0, 1.0, "tanh");
}

DiffusionCoefficient DiffusionCoefficient::from_name(const std::string& kind, double value) {
  if (kind == "constant") return constant(value);
  if (kind == "one_plus_half_tanh") return one_plus_half_tanh();
  if (kind == "tanh") return tanh_kind();
  throw ConfigError("unknown diffusion coefficient kind '" + kind +
                    "' (known: constant, one_plus_half_tanh, tanh)");
}

double DiffusionCoefficient::operator()(double x) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::one_plus_half_tanh: return 1.0 + 0.5 * std::tanh(x);
    case Kind::tanh_fn: return std::tanh(x);
  }
  return 0.0;
}

SpectralField multiplicative_increment(const SpectralField& u, const NoiseIncrement& inc,
                                       const DiffusionCoefficient& g, std::size_t m_grid) {
  if (inc.size() != u.modes())
    throw UsageError("multiplicative_increment: increment/state mode counts differ");
  if (g.is_constant()) {
    SpectralField out(std::vector<double>(inc.modes));
    out *= g.constant_value();
    return out;
  }
  if (m_grid < u.modes())
    throw UsageError("multiplicative_increment: grid must resolve the retained modes");
  const std::vector<double> us = sine_synthesize(u.data(), m_grid);
  std::vector<double> ws = sine_synthesize(inc.modes, m_grid);
  for (std::size_t i = 0; i < m_grid; ++i) ws[i] *= g(us[i]);
  return SpectralField(sine_analyze(ws, u.modes()));
}

CovarianceCheck field_covariance_test(std::uint64_t master_seed, double t, double s, double x,
                                      double y, std::size_t n_samples, std::size_t n_modes) {
  if (n_samples < 100) throw UsageError("field_covariance_test: need at least 100 samples");
  if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
    throw UsageError("field_covariance_test: spatial points must lie in [0,1]");
  if (t < 0.0 || s < 0.0) throw UsageError("field_covariance_test: negative times");

  const double tmin = std::min(t, s);
  const double gap = std::abs(t - s);
  // antiderivatives int_0^x e_j = sqrt(2)(1 - cos(pi j x))/(pi j)
  std::vector<double> ix(n_modes), iy(n_modes);
  for (std::size_t j = 1; j <= n_modes; ++j) {
    const double pj = std::numbers::pi * static_cast<double>(j);
    ix[j - 1] = std::numbers::sqrt2 * (1.0 - std::cos(pj * x)) / pj;
    iy[j - 1] = std::numbers::sqrt2 * (1.0 - std::cos(pj * y)) / pj;
  }

  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    RngStream stream(master_seed, i);
    double wt = 0.0, ws = 0.0;
    for (std::size_t j = 0; j < n_modes; ++j) {
      const double b_min = std::sqrt(tmin) * stream.normal();
      const double b_max = b_min + std::sqrt(gap) * stream.normal();
      const double bt = (t <= s) ? b_min : b_max;
      const double bs = (s <= t) ? b_min : b_max;
      wt += bt * ix[j];
      ws += bs * iy[j];
    }
    const double v = wt * ws;
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }

  CovarianceCheck out;
  out.empirical = mean;
  out.exact = tmin * std::min(x, y);
  out.std_error = std::sqrt(m2 / static_cast<double>(n_samples - 1) /
                            static_cast<double>(n_samples));
  out.n_samples = n_samples;
  out.n_modes = n_modes;
  return out;
}

}  // namespace fsbe
