#pragma once

// One-step integrators for the stochastic Burgers dynamics in mild form,
// the damped stochastic convolution z_gamma, steering controls and their
// Girsanov weights, and a refinable Brownian hierarchy for weak-error studies.
//
// All schemes are exponential-Euler style and diagonal in the sine basis:
//   u'_j = e^{-mu_j dt} u_j + phi1_j conv_j + e^{-mu_j dt/2} w_j
// with mu_j = (pi j)^alpha, phi1_j = (1 - e^{-mu_j dt})/mu_j, conv the
// (optionally truncated) convective term and w the multiplicative noise
// increment. The linear flow is integrated exactly; the half-step damping of
// the noise makes the per-mode stationary variance exact to O((mu dt)^2)
// uniformly in the mode index. The z_gamma update uses the exact
// Ornstein-Uhlenbeck variance filter instead, so for constant g its law is
// exact at every dt.

#include <cstddef>
#include <span>
#include <vector>

#include "fsbe/model_config.hpp"
#include "fsbe/noise.hpp"
#include "fsbe/spectral_field.hpp"

namespace fsbe {

class Integrator {
 public:
  explicit Integrator(const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }

  // Mild-form step; draws one Wiener increment from the stream.
  SpectralField step_mild(const SpectralField& u, RngStream& stream) const;
  // Same step on an externally supplied increment (refinement studies replay
  // the same Brownian path at several dt).
  SpectralField step_mild(const SpectralField& u, const NoiseIncrement& inc) const;

  // Mild step with the convective argument radially retracted to the ball of
  // radius cfg.n_trunc (which must be > 0).
  SpectralField step_truncated(const SpectralField& u, RngStream& stream) const;
  SpectralField step_truncated(const SpectralField& u, const NoiseIncrement& inc) const;

  // Mild step plus a deterministic control integrated by the same one-step
  // linear filter: adds phi1_j drift_j to the mild update.
  SpectralField step_controlled(const SpectralField& u, const SpectralField& drift,
                                const NoiseIncrement& inc) const;

  // Damped stochastic convolution driven by the state u:
  //   z'_j = e^{-(mu_j+gamma) dt} z_j + psi_j w_j,
  // psi_j^2 dt = (1 - e^{-2(mu_j+gamma) dt}) / (2(mu_j+gamma)).
  SpectralField z_gamma_step(const SpectralField& z, const SpectralField& u,
                             const NoiseIncrement& inc) const;
  SpectralField z_gamma_step(const SpectralField& z, const SpectralField& u,
                             RngStream& stream) const;

  double dt() const { return cfg_.dt; }
  std::size_t n_modes() const { return cfg_.n_modes; }

 private:
  SpectralField step_common(const SpectralField& u, const NoiseIncrement& inc,
                            bool truncate_conv, const SpectralField* drift) const;
  void check_state(const SpectralField& u) const;

  ModelConfig cfg_;
  // per-mode tables at the configured dt
  std::vector<double> decay_;       // e^{-mu dt}
  std::vector<double> phi1_;        // (1 - e^{-mu dt}) / mu
  std::vector<double> half_decay_;  // e^{-mu dt/2}
  std::vector<double> z_decay_;     // e^{-(mu+gamma) dt}
  std::vector<double> z_filter_;    // psi
};

// v = u - z: the shifted field whose dynamics carry the convective term.
SpectralField v_gamma_of(const SpectralField& u, const SpectralField& z);

// Steering data: drive the state from its value at time tau to the target y
// at time t_final, gated by |u(tau)|_L2 <= radius.
struct SteeringPlan {
  SpectralField target;
  double t_final = 1.0;
  double tau = 0.9;
  double radius = 10.0;
};

// tau = t - min(0.1, t/4), radius = 2 |x|_L2 + 10.
SteeringPlan default_steering_plan(const SpectralField& x, const SpectralField& y, double t);

// Control drift at time s in [tau, t]:
//   f(s) = 1{|u_tau| <= radius} [ (t - tau)^{-1} e^{-(s-tau) A_alpha} (y - u_tau)
//                                 + A_alpha y ],
// A_alpha = (-Laplacian)^{alpha/2}. Earlier times give the zero field. With
// this drift the noise-free mild flow lands exactly on y at t.
SpectralField steering_drift(double s_time, const SteeringPlan& plan,
                             const SpectralField& u_tau, const ModelConfig& cfg);

struct GirsanovWeight {
  double stochastic = 0.0;  // sum_k <beta_k, dW_k>
  double quadratic = 0.0;   // sum_k |beta_k|^2 dt
  double log_weight() const { return stochastic - 0.5 * quadratic; }
};

// Discrete Girsanov log-density for a control f added to g dW: beta = f/g on
// the grid, projected to the retained modes, paired with the raw increments.
// Exactly mean-one in discrete time. Throws ConfigError when inf|g| = 0.
GirsanovWeight girsanov_log_weight(std::span<const SpectralField> betas,
                                   std::span<const NoiseIncrement> increments);

struct SteeredResult {
  SpectralField terminal;
  GirsanovWeight weight;
  bool control_active = false;  // indicator |u_tau| <= radius
  double distance_to_target = 0.0;
};

// Run from u0 to plan.t_final: plain mild steps until tau, then controlled
// steps. apply_control = false runs the uncontrolled dynamics but still
// accumulates the weight of the would-be control along the path (that is the
// mean-one martingale the change of measure is built from).
SteeredResult evolve_steered(const Integrator& integ, SpectralField u0, RngStream& stream,
                             const SteeringPlan& plan, bool apply_control = true,
                             bool accumulate_weight = false);

// Stepwise driver: visit(step_index, time, state) after every step, including
// step 0 at time 0. The state passed to the visitor is the current one.
template <class Visitor>
void evolve(const Integrator& integ, SpectralField& u, RngStream& stream, std::size_t n_steps,
            Visitor&& visit) {
  visit(std::size_t{0}, 0.0, u);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    u = (integ.config().n_trunc > 0.0) ? integ.step_truncated(u, stream)
                                       : integ.step_mild(u, stream);
    visit(k, static_cast<double>(k) * integ.dt(), u);
  }
}

// Pre-drawn Brownian increments on a fine grid, summable into coarser steps:
// coarse(k, m) aggregates fine increments [k m, (k+1) m). All refinement
// levels see the same underlying path.
class NoiseHierarchy {
 public:
  NoiseHierarchy(RngStream stream, double dt_fine, std::size_t n_fine, std::size_t n_modes);
  NoiseIncrement coarse(std::size_t k, std::size_t m) const;
  double dt_fine() const { return dt_fine_; }
  std::size_t fine_steps() const { return n_fine_; }

 private:
  double dt_fine_;
  std::size_t n_fine_, n_modes_;
  std::vector<double> fine_;  // step-major, n_fine * n_modes
};

// Running sup of |u|_L2 and mean of |u|_L2^p for the moment order p.
struct MomentMonitor {
  explicit MomentMonitor(double order) : p(order) {}
  double p;
  double sup_norm = 0.0;
  double sum_pow = 0.0;
  std::size_t count = 0;
  void observe(const SpectralField& u) {
    const double n = u.l2_norm();
    sup_norm = std::max(sup_norm, n);
    sum_pow += std::pow(n, p);
    ++count;
  }
  double mean_pow() const { return count ? sum_pow / static_cast<double>(count) : 0.0; }
};

// Trajectory samples kept by the scalar drivers: times plus the standard
// observable columns (|u|_L2, |u|_{H^beta,2}, first two mode coefficients).
struct TrajectoryRecord {
  double dt = 0.0;
  std::size_t stride = 1;
  std::vector<double> times, l2, hbeta, mode1, mode2;
  std::vector<SpectralField> fields;  // populated only when keep_fields

  void append(double time, const SpectralField& u, double hbeta_exp, bool keep_fields);
};

// Integrate n_steps from u0, sampling every `stride` steps (t = 0 included).
TrajectoryRecord record_trajectory(const Integrator& integ, SpectralField u0, RngStream& stream,
                                   std::size_t n_steps, std::size_t stride,
                                   bool keep_fields = false);

}  // namespace fsbe
