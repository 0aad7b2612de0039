#pragma once

// Fast synthesis/analysis between sine coefficients and interior grid samples,
// plus the cosine analysis used by the convective term. Backed by FFTW r2r
// transforms with a process-wide plan cache (plan creation is serialised;
// execution is concurrent-safe on distinct buffers).
//
// Conventions, with M the number of interior points and x_i = i/(M+1):
//   synthesis    u(x_i)      = sum_j a_j sqrt(2) sin(pi j x_i)
//   analysis     a_j         = 2/(M+1) sum_i u(x_i) sqrt(2)/2 ... (DST-I scaled)
// Round trips are exact to rounding whenever M >= N.

#include <cstddef>
#include <span>
#include <vector>

namespace fsbe {

// Interior samples on M points from N sine coefficients (any M >= 1; modes
// above M alias and are dropped by the underlying DST length).
std::vector<double> sine_synthesize(std::span<const double> coeffs, std::size_t m_grid);

// First n_modes sine coefficients from M interior samples. Exact whenever the
// sampled function is a sine polynomial of degree <= M. Throws UsageError if
// n_modes > M (more modes than samples cannot be recovered; a lossy synthesis
// to M < N points is flagged here, at the analysis end of the round trip).
std::vector<double> sine_analyze(std::span<const double> samples, std::size_t n_modes);

// Cosine coefficients c_0..c_P of samples h_0..h_P on the closed uniform grid
// x_i = i/P (endpoints included), where h(x) = c_0/2 + sum_{k>=1} c_k cos(pi k x)
// holds exactly for cosine polynomials of degree < P. Input size is P+1.
std::vector<double> cosine_analyze(std::span<const double> closed_samples);

}  // namespace fsbe
