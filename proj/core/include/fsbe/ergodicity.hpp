#pragma once

// Monte Carlo probes of the long-time behaviour: transition-semigroup
// expectations, time-averaged empirical invariant measures (sampled with the
// t+1 shift), a total-variation proxy on histograms, autocorrelation/mixing
// tables, the strong-Feller difference quotient, hitting probabilities with
// and without steering, and exit-time tails.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsbe/dynamics.hpp"
#include "fsbe/model_config.hpp"
#include "fsbe/spectral_field.hpp"

namespace fsbe {

// Bounded Borel test function of the state. Values are clipped to
// [clip_lo, clip_hi] so every observable is bounded on bounded sets.
struct Observable {
  enum class Kind { l2_norm_sq, mode_k, hbeta_norm_sq, sup_grid, constant };
  Kind kind = Kind::l2_norm_sq;
  std::string name = "l2_norm_sq";
  std::size_t k = 1;       // mode index (mode_k)
  double beta = 0.1;       // smoothness (hbeta_norm_sq)
  std::size_t grid = 128;  // collocation points (sup_grid)
  double value = 0.0;      // fixed value (constant)
  double clip_lo = -1e12, clip_hi = 1e12;

  double operator()(const SpectralField& u) const;

  static Observable l2_sq();
  static Observable mode(std::size_t k);
  static Observable hbeta_sq(double beta);
  static Observable sup(std::size_t grid);
  static Observable constant(double c);
};

// Histogram of an observable along a path; also keeps exact first/second
// moments so mean/variance are binning-free. Out-of-range values are clamped
// into the end bins (the observable is clipped anyway).
struct EmpiricalMeasure {
  std::string observable;
  std::vector<double> edges;  // strictly increasing, size n_bins+1
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  double burn_in = 0.0;
  double sum = 0.0, sum_sq = 0.0;

  static EmpiricalMeasure with_edges(std::string observable, double lo, double hi,
                                     std::size_t n_bins, double burn_in);
  void add(double x);
  void merge(const EmpiricalMeasure& other);  // identical edges required
  double mean() const;
  double variance() const;
  std::vector<double> pmf() const;
};

// 1/2 sum_i |p_i - q_i| over shared bins; lower-bounds the total variation
// distance of the underlying laws (one-sided surrogate).
double tv_proxy(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2);

struct MeanSE {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

// Ensemble mean of phi(u(t, x)) over independent streams (trajectory i uses
// stream id stream_offset + i). n_samples >= 100. Blow-ups are rethrown with
// the trajectory id attached.
MeanSE transition_expectation(const Observable& phi, const SpectralField& x, double t,
                              std::size_t n_samples, const ModelConfig& cfg,
                              std::uint64_t stream_offset = 0, std::size_t workers = 1);

struct InvariantOptions {
  double t_final = 2000.0;
  double burn_in = -1.0;  // < 0 means the default 20% of t_final
  std::size_t stride = 10;
  std::size_t n_bins = 64;
  // explicit bin ranges per observable; empty = derive from a pilot run
  std::vector<std::pair<double, double>> ranges;
  double pilot_t = 20.0;
  std::uint64_t stream_id = 0;
};

// Time-averaged law of the shifted samples X_{t+1}, t in [burn_in, T]: one
// long trajectory integrated to T+1, histogrammed per observable.
std::vector<EmpiricalMeasure> empirical_invariant(const SpectralField& x,
                                                  const std::vector<Observable>& observables,
                                                  const ModelConfig& cfg,
                                                  const InvariantOptions& opt);

struct MixingReport {
  std::vector<double> lags;  // in time units, aligned with the columns below
  std::vector<std::string> observables;
  std::vector<std::vector<double>> autocorr;    // [observable][lag]
  std::vector<std::vector<double>> batch_stat;  // batch-means variance, horizon = lag
  double sample_dt = 0.0;
  std::size_t n_samples = 0;
};

// Stationary-segment autocorrelations and the batch-means mixing statistic:
// at horizon h the post-burn-in samples are cut into length-h batches and the
// variance of batch means around the global mean is reported (decays ~ 1/h
// for a mixing chain).
MixingReport mixing_report(const SpectralField& x, const std::vector<Observable>& observables,
                           std::span<const double> lags, const ModelConfig& cfg, double t_final,
                           double burn_in = -1.0, std::size_t stride = 1,
                           std::uint64_t stream_id = 0);

struct FellerResult {
  double modulus = 0.0;   // |E phi(u(t,x)) - E phi(u(t,y))| / |x - y|
  double mc_error = 0.0;  // propagated Monte Carlo error of the modulus
  double separation = 0.0;
  MeanSE at_x, at_y;
};

// Independent ensembles per initial condition (common noise would probe path
// continuity, not the regularity of laws). x = y returns 0 by convention.
// Requires |x|, |y| <= r_bound.
FellerResult feller_modulus(const Observable& phi, const SpectralField& x,
                            const SpectralField& y, double t, std::size_t n_samples,
                            const ModelConfig& cfg, double r_bound = 10.0,
                            std::size_t workers = 1);

struct HittingResult {
  double freq = 0.0;
  double ci_lo = 0.0, ci_hi = 1.0;  // Wilson interval at 95%
  std::size_t hits = 0, n = 0;
  bool steered = false;
  double mean_distance = 0.0;  // ensemble mean |u(t) - y|
};

// Frequency of |u(t,x) - y|_L2 < eps. steered = true drives each path with
// the default steering plan (plain dynamics until tau, then the control).
HittingResult hitting_probability(const SpectralField& x, const SpectralField& y, double eps,
                                  double t, std::size_t n_samples, const ModelConfig& cfg,
                                  bool steered, std::uint64_t stream_offset = 0,
                                  std::size_t workers = 1);

struct ExitTailRow {
  double level = 0.0;
  double freq = 0.0;  // P(sup_{s <= t} |u(s)|_L2 >= level), t = 0 included
  std::size_t exits = 0;
};

// First-passage frequencies for strictly increasing levels. A trajectory that
// trips the blow-up ceiling counts as exited at every level.
std::vector<ExitTailRow> exit_time_tail(const SpectralField& x, std::span<const double> levels,
                                        double t, std::size_t n_samples, const ModelConfig& cfg,
                                        std::uint64_t stream_offset = 0,
                                        std::size_t workers = 1);

}  // namespace fsbe
