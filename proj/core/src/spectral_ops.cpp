#include "fsbe/spectral_ops.hpp"

#include <cmath>
#include <numbers>

#include "fsbe/errors.hpp"
#include "fsbe/transforms.hpp"

namespace fsbe {

EigenPair eigen_pair(std::size_t j) {
  if (j < 1) throw UsageError("eigen_pair: mode index is 1-based");
  return EigenPair{j, laplacian_eigenvalue(j)};
}

SpectralField apply_fractional_power(const SpectralField& f, double s) {
  SpectralField out = f;
  if (s == 0.0) return out;
  for (std::size_t j = 1; j <= out.modes(); ++j)
    out.coeff(j) *= std::pow(laplacian_eigenvalue(j), s);
  return out;
}

SpectralField semigroup_apply(const SpectralField& f, double t, double alpha, double gamma) {
  if (t < 0.0) throw UsageError("semigroup_apply: negative time");
  SpectralField out = f;
  for (std::size_t j = 1; j <= out.modes(); ++j)
    out.coeff(j) *= std::exp(-t * (dissipation_rate(j, alpha) + gamma));
  return out;
}

double sobolev_norm(const SpectralField& f, SobolevIndex idx, std::size_t m_grid) {
  if (idx.p < 1.0) throw UsageError("sobolev_norm: integrability exponent must be >= 1");
  if (idx.p == 2.0) {
    double s = 0.0;
    for (std::size_t j = 1; j <= f.modes(); ++j) {
      const double w = std::pow(laplacian_eigenvalue(j), idx.s);
      s += w * f.coeff(j) * f.coeff(j);
    }
    return std::sqrt(s);
  }
  if (m_grid == 0)
    throw UsageError("sobolev_norm: p != 2 needs a quadrature grid (pass m_grid >= 4N)");
  const SpectralField g = apply_fractional_power(f, idx.s / 2.0);
  const GridField samples = to_grid(g, m_grid);
  double acc = 0.0;
  for (double v : samples.samples) acc += std::pow(std::abs(v), idx.p);
  acc /= static_cast<double>(m_grid + 1);  // interior rectangle rule; endpoints vanish
  return std::pow(acc, 1.0 / idx.p);
}

GridField to_grid(const SpectralField& f, std::size_t m_grid) {
  return GridField{sine_synthesize(f.data(), m_grid)};
}

SpectralField from_grid(const GridField& g, std::size_t n_modes) {
  return SpectralField(sine_analyze(g.samples, n_modes));
}

SpectralField convective_term(const SpectralField& u) {
  const std::size_t n = u.modes();
  const std::size_t p = 2 * n;  // padded intervals; square has cosine degree <= 2N = P
  std::vector<double> s = sine_synthesize(u.data(), p - 1);
  std::vector<double> h(p + 1, 0.0);
  for (std::size_t i = 0; i < p - 1; ++i) h[i + 1] = s[i] * s[i];
  const std::vector<double> c = cosine_analyze(h);
  // d/dx sum c_k cos(pi k x) = sum (-pi k c_k) sin(pi k x) = sum (-pi k c_k / sqrt2) e_k
  SpectralField out(n);
  for (std::size_t k = 1; k <= n; ++k)
    out.coeff(k) = -std::numbers::pi * static_cast<double>(k) * c[k] / std::numbers::sqrt2;
  return out;
}

SpectralField truncate_pi_n(const SpectralField& u, double n) {
  if (n <= 0.0) throw UsageError("truncate_pi_n: radius must be positive");
  const double norm = u.l2_norm();
  if (norm <= n) return u;
  return (n / norm) * u;
}

double hs_integral(double t, double alpha, std::size_t n_modes, double gamma) {
  if (t < 0.0) throw UsageError("hs_integral: negative time");
  double acc = 0.0;
  for (std::size_t k = 1; k <= n_modes; ++k) {
    const double kappa = dissipation_rate(k, alpha) + gamma;
    acc += -std::expm1(-2.0 * kappa * t) / (2.0 * kappa);
  }
  return acc;
}

}  // namespace fsbe
