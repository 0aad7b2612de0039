#include "fsbe/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fsbe/errors.hpp"
#include "fsbe/parallel.hpp"
#include "fsbe/spectral_ops.hpp"

namespace fsbe {

double Observable::operator()(const SpectralField& u) const {
  double v = 0.0;
  switch (kind) {
    case Kind::l2_norm_sq: v = u.l2_norm_sq(); break;
    case Kind::mode_k:
      if (k < 1 || k > u.modes()) throw UsageError("Observable mode_k: index out of range");
      v = u.coeff(k);
      break;
    case Kind::hbeta_norm_sq: {
      const double n = sobolev_norm(u, SobolevIndex{beta, 2.0});
      v = n * n;
      break;
    }
    case Kind::sup_grid: v = to_grid(u, grid).max_abs(); break;
    case Kind::constant: v = value; break;
  }
  return std::clamp(v, clip_lo, clip_hi);
}

Observable Observable::l2_sq() { return Observable{}; }

Observable Observable::mode(std::size_t k) {
  Observable o;
  o.kind = Kind::mode_k;
  o.k = k;
  o.name = "mode" + std::to_string(k);
  return o;
}

Observable Observable::hbeta_sq(double beta) {
  Observable o;
  o.kind = Kind::hbeta_norm_sq;
  o.beta = beta;
  o.name = "hbeta_norm_sq";
  return o;
}

Observable Observable::sup(std::size_t grid) {
  Observable o;
  o.kind = Kind::sup_grid;
  o.grid = grid;
  o.name = "sup_grid";
  return o;
}

Observable Observable::constant(double c) {
  Observable o;
  o.kind = Kind::constant;
  o.value = c;
  o.name = "constant";
  return o;
}

EmpiricalMeasure EmpiricalMeasure::with_edges(std::string observable, double lo, double hi,
                                              std::size_t n_bins, double burn_in) {
  if (!(hi > lo)) throw UsageError("EmpiricalMeasure: range must be non-empty");
  if (n_bins < 1) throw UsageError("EmpiricalMeasure: need at least one bin");
  EmpiricalMeasure m;
  m.observable = std::move(observable);
  m.burn_in = burn_in;
  m.edges.resize(n_bins + 1);
  for (std::size_t i = 0; i <= n_bins; ++i)
    m.edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n_bins);
  m.counts.assign(n_bins, 0);
  return m;
}

void EmpiricalMeasure::add(double x) {
  const std::size_t n_bins = counts.size();
  std::size_t idx;
  if (x <= edges.front()) {
    idx = 0;
  } else if (x >= edges.back()) {
    idx = n_bins - 1;
  } else {
    idx = static_cast<std::size_t>(
              std::upper_bound(edges.begin(), edges.end(), x) - edges.begin()) - 1;
    idx = std::min(idx, n_bins - 1);
  }
  ++counts[idx];
  ++total;
  sum += x;
  sum_sq += x * x;
}

void EmpiricalMeasure::merge(const EmpiricalMeasure& other) {
  if (edges != other.edges) throw UsageError("EmpiricalMeasure::merge: bin edges differ");
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
  total += other.total;
  sum += other.sum;
  sum_sq += other.sum_sq;
}

double EmpiricalMeasure::mean() const {
  return total ? sum / static_cast<double>(total) : 0.0;
}

double EmpiricalMeasure::variance() const {
  if (total < 2) return 0.0;
  const double m = mean();
  return sum_sq / static_cast<double>(total) - m * m;
}

std::vector<double> EmpiricalMeasure::pmf() const {
  std::vector<double> p(counts.size(), 0.0);
  if (total == 0) return p;
  for (std::size_t i = 0; i < counts.size(); ++i)
    p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return p;
}

double tv_proxy(const EmpiricalMeasure& m1, const EmpiricalMeasure& m2) {
  if (m1.edges != m2.edges) throw UsageError("tv_proxy: histograms have different bins");
  const std::vector<double> p = m1.pmf(), q = m2.pmf();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

namespace {

std::size_t steps_for(double t, double dt) {
  return static_cast<std::size_t>(std::llround(t / dt));
}

void rethrow_with_path(BlowUpError& e, std::size_t path, double fallback_time) {
  e.trajectory = static_cast<long>(path);
  if (e.time < 0.0) e.time = fallback_time;
  throw e;
}

}  // namespace

MeanSE transition_expectation(const Observable& phi, const SpectralField& x, double t,
                              std::size_t n_samples, const ModelConfig& cfg,
                              std::uint64_t stream_offset, std::size_t workers) {
  if (n_samples < 100) throw UsageError("transition_expectation: need n_samples >= 100");
  if (t < 0.0) throw UsageError("transition_expectation: negative horizon");
  if (phi.kind == Observable::Kind::constant || t == 0.0)
    return MeanSE{phi(x), 0.0, n_samples};  // constants and t = 0 are exact

  const Integrator integ(cfg);
  const std::size_t n_steps = steps_for(t, cfg.dt);
  std::vector<double> vals(n_samples);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    RngStream stream(cfg.seed, stream_offset + i);
    SpectralField u = x;
    try {
      for (std::size_t k = 0; k < n_steps; ++k)
        u = (cfg.n_trunc > 0.0) ? integ.step_truncated(u, stream) : integ.step_mild(u, stream);
    } catch (BlowUpError& e) {
      rethrow_with_path(e, i, t);
    }
    vals[i] = phi(u);
  });
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(n_samples);
  double ss = 0.0;
  for (double v : vals) ss += (v - mean) * (v - mean);
  MeanSE out;
  out.mean = mean;
  out.std_error = std::sqrt(ss / static_cast<double>(n_samples - 1) /
                            static_cast<double>(n_samples));
  out.n = n_samples;
  return out;
}

std::vector<EmpiricalMeasure> empirical_invariant(const SpectralField& x,
                                                  const std::vector<Observable>& observables,
                                                  const ModelConfig& cfg,
                                                  const InvariantOptions& opt) {
  const double burn_in = opt.burn_in < 0.0 ? 0.2 * opt.t_final : opt.burn_in;
  if (!(opt.t_final > burn_in)) throw UsageError("empirical_invariant: need T > burn_in");
  if (observables.empty()) throw UsageError("empirical_invariant: no observables");
  if (!opt.ranges.empty() && opt.ranges.size() != observables.size())
    throw UsageError("empirical_invariant: ranges/observables size mismatch");

  const Integrator integ(cfg);

  // bin ranges: explicit, or the observed envelope of a short pilot run
  std::vector<std::pair<double, double>> ranges = opt.ranges;
  if (ranges.empty()) {
    ranges.assign(observables.size(),
                  {std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()});
    RngStream pilot_stream(cfg.seed, opt.stream_id ^ 0x70696c6f74ULL);
    SpectralField u = x;
    const std::size_t pilot_steps = steps_for(opt.pilot_t, cfg.dt);
    evolve(integ, u, pilot_stream, pilot_steps,
           [&](std::size_t k, double, const SpectralField& state) {
             if (k % opt.stride) return;
             for (std::size_t o = 0; o < observables.size(); ++o) {
               const double v = observables[o](state);
               ranges[o].first = std::min(ranges[o].first, v);
               ranges[o].second = std::max(ranges[o].second, v);
             }
           });
    for (auto& [lo, hi] : ranges) {
      const double span = std::max(hi - lo, 1e-6);
      lo -= 0.1 * span;
      hi += 0.1 * span;
    }
  }

  std::vector<EmpiricalMeasure> measures;
  measures.reserve(observables.size());
  for (std::size_t o = 0; o < observables.size(); ++o)
    measures.push_back(EmpiricalMeasure::with_edges(observables[o].name, ranges[o].first,
                                                    ranges[o].second, opt.n_bins, burn_in));

  // integrate to T+1; the sample at time s estimates the law of X_{t+1} for
  // t = s - 1, so collection starts at burn_in + 1
  RngStream stream(cfg.seed, opt.stream_id);
  SpectralField u = x;
  const std::size_t total_steps = steps_for(opt.t_final + 1.0, cfg.dt);
  const double start_time = burn_in + 1.0;
  try {
    evolve(integ, u, stream, total_steps,
           [&](std::size_t k, double time, const SpectralField& state) {
             if (k % opt.stride || time < start_time) return;
             for (std::size_t o = 0; o < observables.size(); ++o)
               measures[o].add(observables[o](state));
           });
  } catch (BlowUpError& e) {
    rethrow_with_path(e, 0, opt.t_final);
  }
  return measures;
}

MixingReport mixing_report(const SpectralField& x, const std::vector<Observable>& observables,
                           std::span<const double> lags, const ModelConfig& cfg, double t_final,
                           double burn_in, std::size_t stride, std::uint64_t stream_id) {
  if (burn_in < 0.0) burn_in = 0.2 * t_final;
  if (!(t_final > burn_in)) throw UsageError("mixing_report: need T > burn_in");
  if (observables.empty()) throw UsageError("mixing_report: no observables");
  if (stride == 0) throw UsageError("mixing_report: stride must be >= 1");

  const Integrator integ(cfg);
  const double sample_dt = cfg.dt * static_cast<double>(stride);

  std::vector<std::vector<double>> series(observables.size());
  RngStream stream(cfg.seed, stream_id);
  SpectralField u = x;
  const std::size_t total_steps = steps_for(t_final, cfg.dt);
  try {
    evolve(integ, u, stream, total_steps,
           [&](std::size_t k, double time, const SpectralField& state) {
             if (k % stride || time < burn_in) return;
             for (std::size_t o = 0; o < observables.size(); ++o)
               series[o].push_back(observables[o](state));
           });
  } catch (BlowUpError& e) {
    rethrow_with_path(e, 0, t_final);
  }

  const std::size_t n = series[0].size();
  MixingReport rep;
  rep.lags.assign(lags.begin(), lags.end());
  rep.sample_dt = sample_dt;
  rep.n_samples = n;
  for (const auto& obs : observables) rep.observables.push_back(obs.name);
  rep.autocorr.assign(observables.size(), {});
  rep.batch_stat.assign(observables.size(), {});

  for (std::size_t o = 0; o < observables.size(); ++o) {
    const std::vector<double>& xs = series[o];
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : xs) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    for (double lag : lags) {
      const std::size_t m = static_cast<std::size_t>(std::llround(lag / sample_dt));
      if (m >= n) {
        std::ostringstream err;
        err << "mixing_report: lag " << lag << " needs more than the " << n
            << " post-burn-in samples available";
        throw UsageError(err.str());
      }
      // autocorrelation at lag m
      double acc = 0.0;
      for (std::size_t i = 0; i + m < n; ++i) acc += (xs[i] - mean) * (xs[i + m] - mean);
      acc /= static_cast<double>(n);
      rep.autocorr[o].push_back(var > 0.0 ? acc / var : (m == 0 ? 1.0 : 0.0));
      // batch-means statistic at horizon m (>= 1 sample per batch)
      const std::size_t bl = std::max<std::size_t>(1, m);
      const std::size_t n_batches = n / bl;
      double stat = 0.0;
      if (n_batches >= 1) {
        for (std::size_t b = 0; b < n_batches; ++b) {
          double bm = 0.0;
          for (std::size_t i = b * bl; i < (b + 1) * bl; ++i) bm += xs[i];
          bm /= static_cast<double>(bl);
          stat += (bm - mean) * (bm - mean);
        }
        stat /= static_cast<double>(n_batches);
      }
      rep.batch_stat[o].push_back(stat);
    }
  }
  return rep;
}

FellerResult feller_modulus(const Observable& phi, const SpectralField& x,
                            const SpectralField& y, double t, std::size_t n_samples,
                            const ModelConfig& cfg, double r_bound, std::size_t workers) {
  if (x.l2_norm() > r_bound || y.l2_norm() > r_bound)
    throw UsageError("feller_modulus: initial conditions must satisfy |x|, |y| <= r_bound");
  FellerResult res;
  res.separation = (x - y).l2_norm();
  if (res.separation == 0.0) return res;  // x = y: modulus 0 by convention
  // disjoint stream ranges: laws must be estimated from independent noise
  res.at_x = transition_expectation(phi, x, t, n_samples, cfg, 0, workers);
  res.at_y = transition_expectation(phi, y, t, n_samples, cfg,
                                    std::uint64_t{1} << 32, workers);
  res.modulus = std::abs(res.at_x.mean - res.at_y.mean) / res.separation;
  res.mc_error = std::sqrt(res.at_x.std_error * res.at_x.std_error +
                           res.at_y.std_error * res.at_y.std_error) /
                 res.separation;
  return res;
}

HittingResult hitting_probability(const SpectralField& x, const SpectralField& y, double eps,
                                  double t, std::size_t n_samples, const ModelConfig& cfg,
                                  bool steered, std::uint64_t stream_offset,
                                  std::size_t workers) {
  if (eps <= 0.0) throw UsageError("hitting_probability: eps must be > 0");
  if (t <= 0.0) throw UsageError("hitting_probability: horizon must be > 0");
  if (n_samples == 0) throw UsageError("hitting_probability: empty ensemble");
  const Integrator integ(cfg);
  const SteeringPlan plan = default_steering_plan(x, y, t);
  const std::size_t n_steps = steps_for(t, cfg.dt);

  std::vector<unsigned char> hit(n_samples, 0);
  std::vector<double> dist(n_samples, 0.0);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    RngStream stream(cfg.seed, stream_offset + i);
    try {
      if (steered) {
        const SteeredResult r = evolve_steered(integ, x, stream, plan, true, false);
        dist[i] = r.distance_to_target;
      } else {
        SpectralField u = x;
        for (std::size_t k = 0; k < n_steps; ++k)
          u = (cfg.n_trunc > 0.0) ? integ.step_truncated(u, stream)
                                  : integ.step_mild(u, stream);
        dist[i] = (u - y).l2_norm();
      }
    } catch (BlowUpError& e) {
      rethrow_with_path(e, i, t);
    }
    hit[i] = dist[i] < eps ? 1 : 0;
  });

  HittingResult res;
  res.steered = steered;
  res.n = n_samples;
  for (std::size_t i = 0; i < n_samples; ++i) {
    res.hits += hit[i];
    res.mean_distance += dist[i];
  }
  res.mean_distance /= static_cast<double>(n_samples);
  res.freq = static_cast<double>(res.hits) / static_cast<double>(n_samples);
  // Wilson interval, z = 1.96
  const double z = 1.96, nn = static_cast<double>(n_samples), p = res.freq;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  res.ci_lo = std::max(0.0, centre - half);
  res.ci_hi = std::min(1.0, centre + half);
  return res;
}

std::vector<ExitTailRow> exit_time_tail(const SpectralField& x, std::span<const double> levels,
                                        double t, std::size_t n_samples, const ModelConfig& cfg,
                                        std::uint64_t stream_offset, std::size_t workers) {
  if (levels.empty()) throw UsageError("exit_time_tail: no levels");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw UsageError("exit_time_tail: levels must be strictly increasing");
  if (n_samples == 0) throw UsageError("exit_time_tail: empty ensemble");

  const Integrator integ(cfg);
  const std::size_t n_steps = steps_for(t, cfg.dt);
  std::vector<double> running_max(n_samples, 0.0);
  parallel_for(n_samples, workers, [&](std::size_t i) {
    RngStream stream(cfg.seed, stream_offset + i);
    SpectralField u = x;
    double mx = u.l2_norm();  // t = 0 counts
    try {
      for (std::size_t k = 0; k < n_steps; ++k) {
        u = (cfg.n_trunc > 0.0) ? integ.step_truncated(u, stream) : integ.step_mild(u, stream);
        mx = std::max(mx, u.l2_norm());
      }
    } catch (const BlowUpError&) {
      mx = std::numeric_limits<double>::infinity();  // exited every finite level
    }
    running_max[i] = mx;
  });

  std::vector<ExitTailRow> table;
  table.reserve(levels.size());
  for (double level : levels) {
    ExitTailRow row;
    row.level = level;
    for (double mx : running_max)
      if (mx >= level) ++row.exits;
    row.freq = static_cast<double>(row.exits) / static_cast<double>(n_samples);
    table.push_back(row);
  }
  return table;
}

}  // namespace fsbe
