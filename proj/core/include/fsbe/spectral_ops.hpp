#pragma once

// Operators diagonal in the sine basis (fractional Laplacian powers, the
// dissipative semigroup, Sobolev norms) plus the dealiased convective term
// and the radial retraction.

#include <cstddef>

#include "fsbe/spectral_field.hpp"

namespace fsbe {

// j-th eigenpair of the Dirichlet Laplacian on (0,1): eigenvalue (pi j)^2 and
// eigenfunction e_j(x) = sqrt(2) sin(pi j x).
struct EigenPair {
  std::size_t j = 1;
  double lambda = 0.0;
  double value(double x) const { return basis_value(j, x); }
};
EigenPair eigen_pair(std::size_t j);

// (-Laplacian)^s f: multiplies coefficient j by lambda_j^s. s may be negative
// (smoothing) or zero (identity).
SpectralField apply_fractional_power(const SpectralField& f, double s);

// e^{-t (A_alpha + gamma)} f with A_alpha = (-Laplacian)^{alpha/2}:
// coefficient j is damped by exp(-t ((pi j)^alpha + gamma)). t < 0 is an error.
SpectralField semigroup_apply(const SpectralField& f, double t, double alpha, double gamma = 0.0);

// H^{s,p} norm. p = 2 is closed-form in coefficients; other p are evaluated by
// quadrature of |(-Laplacian)^{s/2} f|^p on a grid of m_grid interior points
// (m_grid >= 4N recommended; m_grid = 0 means "p must be 2").
double sobolev_norm(const SpectralField& f, SobolevIndex idx, std::size_t m_grid = 0);

// Synthesis to M interior points / analysis back to n_modes coefficients.
// from_grid(to_grid(f, M), N) = f to rounding whenever M >= N; recovering more
// modes than samples throws (the lossy direction is flagged).
GridField to_grid(const SpectralField& f, std::size_t m_grid);
SpectralField from_grid(const GridField& g, std::size_t n_modes);

// d/dx (u^2) projected back onto the first N sine modes, N = u.modes().
// Computed pseudospectrally on a padded grid of 2N intervals, which represents
// the degree-2N square exactly: no aliasing error in the retained modes.
SpectralField convective_term(const SpectralField& u);

// Radial retraction onto the L^2 ball of radius n: identity for |u| <= n,
// otherwise n u / |u|. n <= 0 is an error.
SpectralField truncate_pi_n(const SpectralField& u, double n);

// sum_{k=1}^{N} (1 - e^{-2 (mu_k + gamma) t}) / (2 (mu_k + gamma)) with
// mu_k = (pi k)^alpha: the L^2 variance accumulated by the unit-coefficient
// stochastic convolution over [0, t] when driven on N modes.
double hs_integral(double t, double alpha, std::size_t n_modes, double gamma = 0.0);

}  // namespace fsbe
