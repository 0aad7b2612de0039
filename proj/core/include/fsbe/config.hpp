#pragma once

// JSON configuration: parsing, hypothesis validation, default resolution, and
// the small spec-to-object factories (initial conditions, observables) shared
// by every experiment.

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

#include "fsbe/ergodicity.hpp"
#include "fsbe/model_config.hpp"
#include "fsbe/spectral_field.hpp"

namespace fsbe {

// Advisory sampling report for the diffusion coefficient: the declared
// envelope is enforced (hard error when |g| leaves [inf_abs, sup_abs]); the
// Lipschitz estimate is informational.
struct DiffusionChecks {
  double measured_inf = 0.0;
  double measured_sup = 0.0;
  double measured_lipschitz = 0.0;
};

struct ExperimentConfig {
  ModelConfig model;
  nlohmann::json experiment;  // experiment section as given (may be empty)
  nlohmann::json resolved;    // full echo with every model default filled in
  DiffusionChecks g_checks;
};

// Parses and validates a config file. Throws ConfigError naming the violated
// hypothesis (dissipation range, grid sizes, diffusion envelope, ...).
ExperimentConfig load_config(const std::string& path);

// Same, from an in-memory document.
ExperimentConfig config_from_json(const nlohmann::json& doc);

// Checks |g| stays in its declared envelope over 1e4 sample points and
// estimates the Lipschitz constant by finite differences.
DiffusionChecks check_diffusion(const DiffusionCoefficient& g);

// {"kind":"zero"} | {"kind":"mode","j":1,"amplitude":1.0} |
// {"kind":"coeffs","values":[...]} -> N-mode field.
SpectralField initial_condition_from(const nlohmann::json& spec, std::size_t n_modes);

// {"kind":"l2_norm_sq"|"mode_k"|"hbeta_norm_sq"|"sup_grid", ...} with optional
// "clip": [lo, hi] and "name".
Observable observable_from(const nlohmann::json& spec, const ModelConfig& model);

// Hard gate for experiments that probe uniqueness/irreducibility: those
// conclusions require inf|g| > 0.
void require_nondegenerate_g(const ModelConfig& model, const std::string& experiment);

}  // namespace fsbe
