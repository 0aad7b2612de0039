#include "fsbe/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "fsbe/errors.hpp"
#include "fsbe/spectral_ops.hpp"
#include "fsbe/transforms.hpp"

namespace fsbe {

Integrator::Integrator(const ModelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  const std::size_t n = cfg_.n_modes;
  decay_.resize(n);
  phi1_.resize(n);
  half_decay_.resize(n);
  z_decay_.resize(n);
  z_filter_.resize(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const double mu = dissipation_rate(j, cfg_.alpha);
    const double kappa = mu + cfg_.gamma;
    decay_[j - 1] = std::exp(-mu * cfg_.dt);
    phi1_[j - 1] = -std::expm1(-mu * cfg_.dt) / mu;
    half_decay_[j - 1] = std::exp(-0.5 * mu * cfg_.dt);
    z_decay_[j - 1] = std::exp(-kappa * cfg_.dt);
    z_filter_[j - 1] = std::sqrt(-std::expm1(-2.0 * kappa * cfg_.dt) / (2.0 * kappa * cfg_.dt));
  }
}

void Integrator::check_state(const SpectralField& u) const {
  if (u.modes() != cfg_.n_modes) throw UsageError("step: state has wrong mode count");
  if (!u.is_finite()) throw BlowUpError("state has non-finite coefficients", -1.0);
  const double n = u.l2_norm();
  if (n > cfg_.norm_ceiling) {
    std::ostringstream err;
    err << "|u|_L2 = " << n << " exceeded the ceiling " << cfg_.norm_ceiling;
    throw BlowUpError(err.str(), -1.0);
  }
}

SpectralField Integrator::step_common(const SpectralField& u, const NoiseIncrement& inc,
                                      bool truncate_conv, const SpectralField* drift) const {
  check_state(u);
  if (inc.size() != cfg_.n_modes) throw UsageError("step: increment has wrong mode count");

  const SpectralField w = multiplicative_increment(u, inc, cfg_.g, cfg_.grid_size);

  SpectralField conv(cfg_.n_modes);
  if (cfg_.convective) {
    if (truncate_conv) {
      if (cfg_.n_trunc <= 0.0)
        throw UsageError("step_truncated: configure n_trunc > 0 for the retracted step");
      conv = convective_term(truncate_pi_n(u, cfg_.n_trunc));
    } else {
      conv = convective_term(u);
    }
  }

  SpectralField out(cfg_.n_modes);
  for (std::size_t i = 0; i < cfg_.n_modes; ++i) {
    double v = decay_[i] * u.data()[i] + phi1_[i] * conv.data()[i] + half_decay_[i] * w.data()[i];
    if (drift) v += phi1_[i] * drift->data()[i];
    out.data()[i] = v;
  }
  return out;
}

SpectralField Integrator::step_mild(const SpectralField& u, RngStream& stream) const {
  return step_common(u, wiener_increment(stream, cfg_.dt, cfg_.n_modes), false, nullptr);
}

SpectralField Integrator::step_mild(const SpectralField& u, const NoiseIncrement& inc) const {
  return step_common(u, inc, false, nullptr);
}

SpectralField Integrator::step_truncated(const SpectralField& u, RngStream& stream) const {
  return step_common(u, wiener_increment(stream, cfg_.dt, cfg_.n_modes), true, nullptr);
}

SpectralField Integrator::step_truncated(const SpectralField& u, const NoiseIncrement& inc) const {
  return step_common(u, inc, true, nullptr);
}

SpectralField Integrator::step_controlled(const SpectralField& u, const SpectralField& drift,
                                          const NoiseIncrement& inc) const {
  if (drift.modes() != cfg_.n_modes) throw UsageError("step_controlled: drift mode count");
  return step_common(u, inc, false, &drift);
}

SpectralField Integrator::z_gamma_step(const SpectralField& z, const SpectralField& u,
                                       const NoiseIncrement& inc) const {
  if (z.modes() != cfg_.n_modes || u.modes() != cfg_.n_modes)
    throw UsageError("z_gamma_step: mode counts differ from config");
  if (!z.is_finite()) throw BlowUpError("stochastic convolution has non-finite coefficients", -1.0);
  const SpectralField w = multiplicative_increment(u, inc, cfg_.g, cfg_.grid_size);
  SpectralField out(cfg_.n_modes);
  for (std::size_t i = 0; i < cfg_.n_modes; ++i)
    out.data()[i] = z_decay_[i] * z.data()[i] + z_filter_[i] * w.data()[i];
  return out;
}

SpectralField Integrator::z_gamma_step(const SpectralField& z, const SpectralField& u,
                                       RngStream& stream) const {
  return z_gamma_step(z, u, wiener_increment(stream, cfg_.dt, cfg_.n_modes));
}

SpectralField v_gamma_of(const SpectralField& u, const SpectralField& z) { return u - z; }

SteeringPlan default_steering_plan(const SpectralField& x, const SpectralField& y, double t) {
  if (t <= 0.0) throw UsageError("default_steering_plan: horizon must be positive");
  SteeringPlan plan;
  plan.target = y;
  plan.t_final = t;
  plan.tau = t - std::min(0.1, t / 4.0);
  plan.radius = 2.0 * x.l2_norm() + 10.0;
  return plan;
}

SpectralField steering_drift(double s_time, const SteeringPlan& plan,
                             const SpectralField& u_tau, const ModelConfig& cfg) {
  if (plan.target.modes() != u_tau.modes())
    throw UsageError("steering_drift: target/state mode counts differ");
  SpectralField f(u_tau.modes());
  if (s_time < plan.tau || s_time > plan.t_final) return f;
  if (u_tau.l2_norm() > plan.radius) return f;  // control gated off
  const double window = plan.t_final - plan.tau;
  if (window <= 0.0) throw UsageError("steering_drift: empty steering window");
  const SpectralField gap = semigroup_apply(plan.target - u_tau, s_time - plan.tau, cfg.alpha);
  const SpectralField lift = apply_fractional_power(plan.target, cfg.alpha / 2.0);
  for (std::size_t i = 0; i < f.modes(); ++i)
    f.data()[i] = gap.data()[i] / window + lift.data()[i];
  return f;
}

GirsanovWeight girsanov_log_weight(std::span<const SpectralField> betas,
                                   std::span<const NoiseIncrement> increments) {
  if (betas.size() != increments.size())
    throw UsageError("girsanov_log_weight: control/increment counts differ");
  GirsanovWeight w;
  for (std::size_t k = 0; k < betas.size(); ++k) {
    if (betas[k].modes() != increments[k].size())
      throw UsageError("girsanov_log_weight: mode counts differ");
    double dot = 0.0, q = 0.0;
    for (std::size_t i = 0; i < betas[k].modes(); ++i) {
      dot += betas[k].data()[i] * increments[k].modes[i];
      q += betas[k].data()[i] * betas[k].data()[i];
    }
    w.stochastic += dot;
    w.quadratic += q * increments[k].dt;
  }
  return w;
}

namespace {

// beta = f/g pointwise on the grid, projected back to the retained modes.
SpectralField control_over_g(const SpectralField& f, const SpectralField& u,
                             const ModelConfig& cfg) {
  if (cfg.g.inf_abs() <= 0.0)
    throw ConfigError("Girsanov weight needs inf|g| > 0; diffusion '" + cfg.g.name() +
                      "' can vanish");
  if (cfg.g.is_constant()) {
    SpectralField beta = f;
    beta *= 1.0 / cfg.g.constant_value();
    return beta;
  }
  const std::vector<double> us = sine_synthesize(u.data(), cfg.grid_size);
  std::vector<double> fs = sine_synthesize(f.data(), cfg.grid_size);
  for (std::size_t i = 0; i < fs.size(); ++i) fs[i] /= cfg.g(us[i]);
  return SpectralField(sine_analyze(fs, cfg.n_modes));
}

}  // namespace

SteeredResult evolve_steered(const Integrator& integ, SpectralField u0, RngStream& stream,
                             const SteeringPlan& plan, bool apply_control,
                             bool accumulate_weight) {
  const ModelConfig& cfg = integ.config();
  const double dt = cfg.dt;
  const std::size_t n_total = static_cast<std::size_t>(std::llround(plan.t_final / dt));
  const std::size_t n_pre = std::min(
      n_total, static_cast<std::size_t>(std::llround(plan.tau / dt)));

  SpectralField u = std::move(u0);
  for (std::size_t k = 0; k < n_pre; ++k) u = integ.step_mild(u, stream);

  const SpectralField u_tau = u;
  SteeredResult res;
  res.control_active = (u_tau.l2_norm() <= plan.radius);

  SteeringPlan aligned = plan;
  aligned.tau = static_cast<double>(n_pre) * dt;  // drift clock on the step grid

  GirsanovWeight w;
  for (std::size_t k = n_pre; k < n_total; ++k) {
    const double s = static_cast<double>(k) * dt;  // left-point control
    const NoiseIncrement inc = wiener_increment(stream, dt, cfg.n_modes);
    const SpectralField f = steering_drift(s, aligned, u_tau, cfg);
    if (accumulate_weight) {
      const SpectralField beta = control_over_g(f, u, cfg);
      double dot = 0.0, q = 0.0;
      for (std::size_t i = 0; i < beta.modes(); ++i) {
        dot += beta.data()[i] * inc.modes[i];
        q += beta.data()[i] * beta.data()[i];
      }
      w.stochastic += dot;
      w.quadratic += q * dt;
    }
    u = apply_control ? integ.step_controlled(u, f, inc) : integ.step_mild(u, inc);
  }

  res.weight = w;
  res.distance_to_target = (u - plan.target).l2_norm();
  res.terminal = std::move(u);
  return res;
}

NoiseHierarchy::NoiseHierarchy(RngStream stream, double dt_fine, std::size_t n_fine,
                               std::size_t n_modes)
    : dt_fine_(dt_fine), n_fine_(n_fine), n_modes_(n_modes), fine_(n_fine * n_modes) {
  if (dt_fine <= 0.0) throw UsageError("NoiseHierarchy: dt_fine must be positive");
  const double sd = std::sqrt(dt_fine);
  for (double& v : fine_) v = sd * stream.normal();
}

NoiseIncrement NoiseHierarchy::coarse(std::size_t k, std::size_t m) const {
  if (m == 0 || (k + 1) * m > n_fine_)
    throw UsageError("NoiseHierarchy::coarse: block out of range");
  NoiseIncrement inc;
  inc.dt = static_cast<double>(m) * dt_fine_;
  inc.modes.assign(n_modes_, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = &fine_[(k * m + i) * n_modes_];
    for (std::size_t j = 0; j < n_modes_; ++j) inc.modes[j] += row[j];
  }
  return inc;
}

void TrajectoryRecord::append(double time, const SpectralField& u, double hbeta_exp,
                              bool keep_fields) {
  times.push_back(time);
  l2.push_back(u.l2_norm());
  hbeta.push_back(sobolev_norm(u, SobolevIndex{hbeta_exp, 2.0}));
  mode1.push_back(u.modes() >= 1 ? u.coeff(1) : 0.0);
  mode2.push_back(u.modes() >= 2 ? u.coeff(2) : 0.0);
  if (keep_fields) fields.push_back(u);
}

TrajectoryRecord record_trajectory(const Integrator& integ, SpectralField u0, RngStream& stream,
                                   std::size_t n_steps, std::size_t stride, bool keep_fields) {
  if (stride == 0) throw UsageError("record_trajectory: stride must be >= 1");
  TrajectoryRecord rec;
  rec.dt = integ.dt();
  rec.stride = stride;
  const double hb = integ.config().hbeta;
  evolve(integ, u0, stream, n_steps, [&](std::size_t k, double t, const SpectralField& u) {
    if (k % stride == 0) rec.append(t, u, hb, keep_fields);
  });
  return rec;
}

}  // namespace fsbe
