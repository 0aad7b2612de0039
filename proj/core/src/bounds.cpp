#include "fsbe/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fsbe/errors.hpp"
#include "fsbe/spectral_ops.hpp"

namespace fsbe {

double series_exponent(const SeriesParams& params) {
  return 2.0 * params.sigma - params.alpha * (1.0 - params.rho);
}

bool series_converges(const SeriesParams& params) { return series_exponent(params) < -1.0; }

double default_rho(double sigma, double alpha) {
  const double rho_max = 1.0 - (1.0 + 2.0 * sigma) / alpha;
  if (rho_max <= 0.0) {
    std::ostringstream err;
    err << "no Hoelder exponent rho in (0,1) makes the moment series converge at sigma = "
        << sigma << ", alpha = " << alpha << " (needs sigma < (alpha-1)/2)";
    throw DivergenceError(err.str());
  }
  return 0.5 * rho_max;
}

namespace {

struct SumBracket {
  double lo = 0.0, hi = 0.0;
  std::size_t terms = 0;
};

double term(double k, double two_sigma, double alpha, double gamma, double omr) {
  const double pk = std::numbers::pi * k;
  return std::pow(pk, two_sigma) / std::pow(std::pow(pk, alpha) + gamma, omr);
}

// terms are decreasing beyond K iff 2 sigma (pk^alpha + gamma) <= alpha (1-rho) pk^alpha
bool decreasing_at(double k, double two_sigma, double alpha, double gamma, double omr) {
  const double pa = std::pow(std::numbers::pi * k, alpha);
  return two_sigma * (pa + gamma) <= alpha * omr * pa;
}

// integral of (pi x)^e over [a, infinity); e < -1
double power_tail_integral(double e, double a) {
  return std::pow(std::numbers::pi, e) * std::pow(a, e + 1.0) / (-(e + 1.0));
}

// sum_{k=1}^{infinity} (pi k)^{two_sigma} / ((pi k)^alpha + gamma)^{one_minus_rho},
// bracketed: partial sum to K plus [c_lo J_{K+1}, J_K] for the remainder, where
// J_a is the pure power-law integral and c_lo restores the dropped gamma.
SumBracket bracketed_sum(double two_sigma, double alpha, double gamma, double omr,
                         std::size_t K, double partial /* sum over k <= K */) {
  const double e = two_sigma - alpha * omr;
  if (!decreasing_at(static_cast<double>(K), two_sigma, alpha, gamma, omr))
    throw UsageError("series tail: K is inside the non-monotone head; increase K");
  const double j_hi = power_tail_integral(e, static_cast<double>(K));
  const double j_lo = power_tail_integral(e, static_cast<double>(K + 1));
  const double c_lo =
      std::pow(1.0 + gamma / std::pow(std::numbers::pi * static_cast<double>(K + 1), alpha),
               -omr);
  SumBracket b;
  b.lo = partial + c_lo * j_lo;
  b.hi = partial + j_hi;
  b.terms = K;
  return b;
}

SeriesValue finish_moment_value(const SumBracket& b, double rho, double p) {
  const double gam = std::tgamma(1.0 - rho);
  const double hi = std::pow(b.hi * gam, 0.5 * p);
  const double lo = std::pow(b.lo * gam, 0.5 * p);
  SeriesValue v;
  v.value = 0.5 * (hi + lo);
  v.tail_bound = 0.5 * (hi - lo);
  v.terms = b.terms;
  return v;
}

void require_convergent(const SeriesParams& params) {
  if (params.sigma < 0.0) throw UsageError("SeriesParams: sigma must be >= 0");
  if (params.p < 1.0) throw UsageError("SeriesParams: moment order p must be >= 1");
  if (params.gamma < 0.0) throw UsageError("SeriesParams: gamma must be >= 0");
  if (!(params.rho > 0.0 && params.rho < 1.0))
    throw UsageError("SeriesParams: rho must lie in (0,1)");
  if (!series_converges(params)) {
    std::ostringstream err;
    err << "moment series diverges: predicate 2 sigma - alpha (1 - rho) < -1 fails ("
        << series_exponent(params) << " >= -1)";
    throw DivergenceError(err.str());
  }
}

}  // namespace

SeriesValue moment_bound_series(const SeriesParams& params, std::size_t K) {
  require_convergent(params);
  if (K < 1) throw UsageError("moment_bound_series: need K >= 1");
  const double omr = 1.0 - params.rho;
  double partial = 0.0;
  for (std::size_t k = 1; k <= K; ++k)
    partial += term(static_cast<double>(k), 2.0 * params.sigma, params.alpha, params.gamma, omr);
  const SumBracket b =
      bracketed_sum(2.0 * params.sigma, params.alpha, params.gamma, omr, K, partial);
  return finish_moment_value(b, params.rho, params.p);
}

SeriesValue moment_bound_series_adaptive(const SeriesParams& params, double tail_tol,
                                         std::size_t k_max) {
  require_convergent(params);
  const double omr = 1.0 - params.rho;
  std::size_t K = 64;
  double partial = 0.0;
  std::size_t summed = 0;
  SeriesValue out;
  for (;;) {
    for (std::size_t k = summed + 1; k <= K; ++k)
      partial += term(static_cast<double>(k), 2.0 * params.sigma, params.alpha, params.gamma, omr);
    summed = K;
    bool bracket_ok = true;
    try {
      const SumBracket b =
          bracketed_sum(2.0 * params.sigma, params.alpha, params.gamma, omr, K, partial);
      out = finish_moment_value(b, params.rho, params.p);
    } catch (const UsageError&) {
      bracket_ok = false;  // still in the non-monotone head; keep doubling
    }
    if (bracket_ok && out.tail_bound <= tail_tol) return out;
    if (K >= k_max) {
      if (!bracket_ok) throw UsageError("moment_bound_series_adaptive: k_max inside the "
                                        "non-monotone head of the series");
      return out;  // best achieved bound is reported
    }
    K = std::min(k_max, K * 2);
  }
}

double gamma0_for_epsilon(double eps, SeriesParams params) {
  if (eps <= 0.0) throw UsageError("gamma0_for_epsilon: eps must be > 0");
  params.gamma = 0.0;
  require_convergent(params);
  const double tol = std::min(1e-8, 1e-4 * eps);
  const auto value_at = [&](double gamma) {
    SeriesParams p = params;
    p.gamma = gamma;
    return moment_bound_series_adaptive(p, tol).value;
  };
  if (value_at(0.0) <= eps) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (value_at(hi) > eps) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e18) throw UsageError("gamma0_for_epsilon: no gamma below 1e18 reaches eps");
  }
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (value_at(mid) <= eps ? hi : lo) = mid;
  }
  return hi;  // guaranteed value_at(hi) <= eps and lo within 0.1% below
}

double z_variance_exact(double sigma, double alpha, double gamma, double t,
                        std::size_t n_modes, double g_value) {
  if (t < 0.0) throw UsageError("z_variance_exact: negative time");
  double acc = 0.0;
  for (std::size_t k = 1; k <= n_modes; ++k) {
    const double kappa = dissipation_rate(k, alpha) + gamma;
    const double w = std::pow(laplacian_eigenvalue(k), sigma);
    acc += w * g_value * g_value * -std::expm1(-2.0 * kappa * t) / (2.0 * kappa);
  }
  return acc;
}

SeriesValue z_variance_stationary(double sigma, double alpha, double gamma, double tail_tol) {
  if (!(2.0 * sigma - alpha < -1.0))
    throw DivergenceError("stationary variance series diverges: needs sigma < (alpha-1)/2");
  std::size_t K = 64;
  double partial = 0.0;
  std::size_t summed = 0;
  for (;;) {
    for (std::size_t k = summed + 1; k <= K; ++k)
      partial += term(static_cast<double>(k), 2.0 * sigma, alpha, gamma, 1.0);
    summed = K;
    bool ok = true;
    SumBracket b;
    try {
      b = bracketed_sum(2.0 * sigma, alpha, gamma, 1.0, K, partial);
    } catch (const UsageError&) {
      ok = false;
    }
    if (ok) {
      SeriesValue v;
      v.value = 0.25 * (b.hi + b.lo);      // the closed form carries a 1/2
      v.tail_bound = 0.25 * (b.hi - b.lo);
      v.terms = K;
      if (v.tail_bound <= tail_tol || K >= (std::size_t{1} << 25)) return v;
    }
    K *= 2;
  }
}

EnergyReport energy_inequality_report(std::span<const SpectralField> v_path,
                                      std::span<const SpectralField> z_path, double sample_dt,
                                      const ModelConfig& cfg, EnergyOptions opt) {
  if (v_path.size() != z_path.size()) throw UsageError("energy report: misaligned v/z paths");
  if (v_path.size() < 2) throw UsageError("energy report: need at least two samples");
  if (sample_dt <= 0.0) throw UsageError("energy report: sample_dt must be > 0");
  if (!(1.0 / opt.q < opt.s && opt.s < 0.5))
    throw UsageError("energy report: (s, q) must satisfy 1/q < s < 1/2");
  double s0 = opt.s0 > 0.0 ? opt.s0 : cfg.alpha / 2.0;
  if (!(s0 > 0.5 && s0 <= cfg.alpha / 2.0))
    throw UsageError("energy report: s0 must lie in (1/2, alpha/2]");
  const std::size_t n_modes = v_path[0].modes();
  const std::size_t grid = opt.quad_grid ? opt.quad_grid : 4 * n_modes;
  const double cross_exp = 2.0 * cfg.alpha / (cfg.alpha - s0);

  EnergyReport rep;
  rep.nu = opt.nu;
  rep.s = opt.s;
  rep.q = opt.q;
  rep.s0 = s0;
  for (std::size_t i = 0; i + 1 < v_path.size(); ++i) {
    const SpectralField& v0 = v_path[i];
    const SpectralField& v1 = v_path[i + 1];
    const SpectralField& z = z_path[i];
    const double halfnorm = sobolev_norm(v1, SobolevIndex{cfg.alpha / 2.0, 2.0});
    const double lhs = (v1.l2_norm_sq() - v0.l2_norm_sq()) / sample_dt +
                       opt.nu * halfnorm * halfnorm;
    const double z_low = sobolev_norm(z, SobolevIndex{1.0 - cfg.alpha / 2.0, 2.0});
    const double z_sq = sobolev_norm(z, SobolevIndex{opt.s, opt.q}, grid);
    const double rhs = std::pow(z_low, cross_exp) * v0.l2_norm_sq() +
                       std::pow(z_sq, 4.0) + std::pow(z_low, 4.0) +
                       cfg.gamma * cfg.gamma * z.l2_norm_sq();
    rep.times.push_back(static_cast<double>(i) * sample_dt);
    rep.lhs.push_back(lhs);
    rep.rhs_shape.push_back(rhs);
    if (rhs > 0.0) {
      if (lhs > opt.slack) rep.fitted_c = std::max(rep.fitted_c, (lhs - opt.slack) / rhs);
      if (lhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    }
  }
  const double c_audit = opt.supplied_c > 0.0 ? opt.supplied_c : rep.fitted_c;
  for (std::size_t i = 0; i < rep.lhs.size(); ++i)
    if (rep.lhs[i] > c_audit * rep.rhs_shape[i] + opt.slack) ++rep.violations;
  return rep;
}

namespace {

// <e_j, cos(k pi .)> = sqrt(2) j (1 - (-1)^{j+k}) / (pi (j^2 - k^2)), 0 at j = k.
double sine_cosine_pairing(std::size_t j, std::size_t k) {
  if (j == k) return 0.0;
  if ((j + k) % 2 == 0) return 0.0;  // even j+k kills the 1 - (-1)^{j+k} factor
  const double jd = static_cast<double>(j), kd = static_cast<double>(k);
  return std::numbers::sqrt2 * jd * 2.0 / (std::numbers::pi * (jd * jd - kd * kd));
}

}  // namespace

double bilinear_ratio(const SpectralField& u, const SpectralField& v, double beta) {
  if (!(beta > 0.5 && beta < 1.0))
    throw UsageError("bilinear_ratio: beta must lie in (1/2, 1)");
  const double nu = sobolev_norm(u, SobolevIndex{beta, 2.0});
  const double nv = sobolev_norm(v, SobolevIndex{1.0 - beta, 2.0});
  if (nu == 0.0 || nv == 0.0) throw UsageError("bilinear_ratio: zero denominator norm");
  // <u, Dv> = sum_{j,k} u_k v_j sqrt2 pi j <e_k, cos(j pi .)>
  double acc = 0.0;
  for (std::size_t j = 1; j <= v.modes(); ++j) {
    if (v.coeff(j) == 0.0) continue;
    const double dj = std::numbers::sqrt2 * std::numbers::pi * static_cast<double>(j) * v.coeff(j);
    for (std::size_t k = 1; k <= u.modes(); ++k)
      acc += u.coeff(k) * dj * sine_cosine_pairing(k, j);
  }
  return std::abs(acc) / (nu * nv);
}

bool smoothing_series_converges(double beta, double sigma, double alpha) {
  return 4.0 * beta + 2.0 - sigma * alpha < -1.0;
}

SmoothingReport smoothing_bound_report(std::span<const SpectralField> v_path, double sample_dt,
                                       double beta, double t, const ModelConfig& cfg,
                                       double sigma) {
  const double beta_max = (2.0 * cfg.alpha - 3.0) / 4.0;
  if (!(beta >= 0.0 && beta < beta_max)) {
    std::ostringstream err;
    err << "smoothing bound: beta = " << beta
        << " violates the constraint beta < (2 alpha - 3)/4 = " << beta_max;
    throw DivergenceError(err.str());
  }
  const double sigma_lo = (4.0 * beta + 3.0) / cfg.alpha;
  if (sigma == 0.0) sigma = 0.5 * (sigma_lo + 2.0);
  if (!(sigma > sigma_lo && sigma < 2.0))
    throw UsageError("smoothing bound: sigma must lie in ((4 beta + 3)/alpha, 2)");
  if (v_path.empty()) throw UsageError("smoothing bound: empty path");
  if (t <= 0.0) throw UsageError("smoothing bound: t must be > 0");
  const double m_real = t / sample_dt;
  const std::size_t m = static_cast<std::size_t>(std::llround(m_real));
  if (std::abs(m_real - static_cast<double>(m)) > 1e-9 * std::max(1.0, m_real) ||
      m >= v_path.size())
    throw UsageError("smoothing bound: t must align with the path sample grid");

  const std::size_t n = v_path[0].modes();
  const std::size_t k_cos = std::max<std::size_t>(4 * n, 128);
  // pairing matrix <e_j, cos(k pi .)>
  std::vector<double> pair(n * k_cos);
  for (std::size_t j = 1; j <= n; ++j)
    for (std::size_t k = 1; k <= k_cos; ++k)
      pair[(j - 1) * k_cos + (k - 1)] = sine_cosine_pairing(j, k);

  const std::size_t quad_grid = 4 * n;
  double sup_l1 = 0.0;
  std::vector<double> f_vals(m + 1, 0.0);
  std::vector<double> c(k_cos);
  for (std::size_t i = 0; i <= m; ++i) {
    const SpectralField& v = v_path[i];
    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
      const double vj = v.coeff(j);
      if (vj == 0.0) continue;
      const double* row = &pair[(j - 1) * k_cos];
      for (std::size_t k = 0; k < k_cos; ++k) c[k] += vj * row[k];
    }
    const double r = t - static_cast<double>(i) * sample_dt;
    double acc = 0.0;
    for (std::size_t k = 1; k <= k_cos; ++k) {
      const double kp = std::numbers::pi * static_cast<double>(k);
      const double w = 2.0 * kp * kp * std::pow(laplacian_eigenvalue(k), 2.0 * beta) *
                       std::exp(-2.0 * dissipation_rate(k, cfg.alpha) * r);
      acc += w * c[k - 1] * c[k - 1];
    }
    f_vals[i] = std::sqrt(acc);
    const GridField g = to_grid(v, quad_grid);
    double l1 = 0.0;
    for (double val : g.samples) l1 += std::abs(val);
    sup_l1 = std::max(sup_l1, l1 / static_cast<double>(quad_grid + 1));
  }
  double lhs = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 0.5 : 1.0;
    lhs += w * f_vals[i] * sample_dt;
  }
  SmoothingReport rep;
  rep.sigma = sigma;
  rep.theta = 1.0 - sigma / 2.0;
  rep.lhs = lhs;
  rep.rhs_shape = std::pow(t, rep.theta) * sup_l1 * sup_l1;
  return rep;
}

LyapunovReport lyapunov_drift(std::span<const double> v_l2sq, double M) {
  if (M <= 0.0) throw UsageError("lyapunov_drift: M must be > 0");
  if (v_l2sq.empty()) throw UsageError("lyapunov_drift: empty series");
  LyapunovReport rep;
  std::size_t above = 0;
  double prev = std::log(std::max(v_l2sq[0], M));
  for (std::size_t i = 0; i < v_l2sq.size(); ++i) {
    if (v_l2sq[i] >= M) ++above;
    if (i > 0) {
      const double cur = std::log(std::max(v_l2sq[i], M));
      rep.zeta_increments.push_back(cur - prev);
      prev = cur;
    }
  }
  rep.occupation_fraction = static_cast<double>(above) / static_cast<double>(v_l2sq.size());
  if (!rep.zeta_increments.empty()) {
    double s = 0.0;
    for (double d : rep.zeta_increments) s += d;
    rep.mean_drift = s / static_cast<double>(rep.zeta_increments.size());
  }
  return rep;
}

double tightness_fraction(std::span<const std::vector<double>> abeta_sq_paths,
                          std::size_t offset_samples, double beta, double alpha, double M) {
  const double beta_max = (2.0 * alpha - 3.0) / 4.0;
  if (!(beta > 0.0 && beta < beta_max)) {
    std::ostringstream err;
    err << "tightness_fraction: beta = " << beta << " outside (0, (2 alpha - 3)/4 = "
        << beta_max << ")";
    throw UsageError(err.str());
  }
  if (M <= 0.0) throw UsageError("tightness_fraction: M must be > 0");
  std::size_t count = 0, total = 0;
  for (const auto& path : abeta_sq_paths) {
    if (path.size() <= offset_samples)
      throw UsageError("tightness_fraction: path shorter than the t+1 offset");
    for (std::size_t i = 0; i + offset_samples < path.size(); ++i) {
      ++total;
      if (path[i + offset_samples] > M) ++count;
    }
  }
  if (total == 0) throw UsageError("tightness_fraction: no samples");
  return static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace fsbe
