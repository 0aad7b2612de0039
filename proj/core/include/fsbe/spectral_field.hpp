#pragma once

// Field types for the Dirichlet spectral Galerkin discretisation on (0,1).
//
// A SpectralField holds coefficients a_1..a_N against the orthonormal sine
// basis e_j(x) = sqrt(2) sin(pi j x); the L^2 inner product is the plain dot
// product of coefficients. A GridField holds point samples at the interior
// nodes x_i = i/(M+1), i = 1..M (Dirichlet endpoints are identically zero and
// never stored).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "fsbe/errors.hpp"

namespace fsbe {

// Eigenvalue of the (negative) Dirichlet Laplacian on (0,1): lambda_j = (pi j)^2.
inline double laplacian_eigenvalue(std::size_t j) {
  const double pj = std::numbers::pi * static_cast<double>(j);
  return pj * pj;
}

// Fractional dissipation rate mu_j = lambda_j^{alpha/2} = (pi j)^alpha.
inline double dissipation_rate(std::size_t j, double alpha) {
  return std::pow(std::numbers::pi * static_cast<double>(j), alpha);
}

// Basis function value e_j(x) = sqrt(2) sin(pi j x).
inline double basis_value(std::size_t j, double x) {
  return std::numbers::sqrt2 * std::sin(std::numbers::pi * static_cast<double>(j) * x);
}

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(std::size_t n_modes) : c_(n_modes, 0.0) {}
  explicit SpectralField(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  // amplitude * e_j embedded in an N-mode field; j is 1-based.
  static SpectralField unit_mode(std::size_t j, std::size_t n_modes, double amplitude = 1.0) {
    if (j < 1 || j > n_modes) throw UsageError("unit_mode: mode index out of range");
    SpectralField f(n_modes);
    f.c_[j - 1] = amplitude;
    return f;
  }

  std::size_t modes() const { return c_.size(); }

  // 1-based accessors matching the basis index.
  double coeff(std::size_t j) const { return c_[j - 1]; }
  double& coeff(std::size_t j) { return c_[j - 1]; }

  std::span<const double> data() const { return c_; }
  std::span<double> data() { return c_; }

  double l2_norm() const {
    double s = 0.0;
    for (double a : c_) s += a * a;
    return std::sqrt(s);
  }
  double l2_norm_sq() const {
    double s = 0.0;
    for (double a : c_) s += a * a;
    return s;
  }

  bool is_finite() const {
    for (double a : c_) {
      if (!std::isfinite(a)) return false;
    }
    return true;
  }

  // Pointwise evaluation by direct summation (diagnostics; transforms are the
  // fast path for whole grids).
  double evaluate(double x) const {
    double s = 0.0;
    for (std::size_t j = 1; j <= c_.size(); ++j) s += c_[j - 1] * basis_value(j, x);
    return s;
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  SpectralField& operator*=(double s) {
    for (double& a : c_) a *= s;
    return *this;
  }

 private:
  void require_same(const SpectralField& o) const {
    if (o.c_.size() != c_.size()) throw UsageError("field arithmetic: mode counts differ");
  }
  std::vector<double> c_;
};

inline SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
inline SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
inline SpectralField operator*(double s, SpectralField a) { return a *= s; }

// L^2 inner product <f, g> (coefficients are against an orthonormal basis).
inline double inner(const SpectralField& a, const SpectralField& b) {
  if (a.modes() != b.modes()) throw UsageError("inner: mode counts differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.modes(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

struct GridField {
  // samples[i-1] = value at x_i = i/(M+1), i = 1..M.
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  static double node(std::size_t i, std::size_t m_grid) {
    return static_cast<double>(i) / static_cast<double>(m_grid + 1);
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : samples) m = std::max(m, std::abs(v));
    return m;
  }
};

// Integrability/smoothness index for Sobolev-type norms H^{s,p}.
struct SobolevIndex {
  double s = 0.0;  // fractional smoothness (power of the Laplacian eigenvalue)
  double p = 2.0;  // integrability exponent, p >= 1
};

}  // namespace fsbe
