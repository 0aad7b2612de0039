#include "fsbe/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fsbe/errors.hpp"

namespace fsbe {

namespace {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

DiffusionChecks check_diffusion(const DiffusionCoefficient& g) {
  DiffusionChecks c;
  c.measured_inf = std::abs(g(0.0));
  c.measured_sup = c.measured_inf;
  const std::size_t n = 10000;
  const double lo = -20.0, hi = 20.0, h = 1e-4;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double a = std::abs(g(x));
    c.measured_inf = std::min(c.measured_inf, a);
    c.measured_sup = std::max(c.measured_sup, a);
    c.measured_lipschitz = std::max(c.measured_lipschitz, std::abs(g(x + h) - g(x)) / h);
  }
  if (c.measured_inf < g.inf_abs() - 1e-9 || c.measured_sup > g.sup_abs() + 1e-9) {
    std::ostringstream err;
    err << "diffusion coefficient '" << g.name() << "' leaves its declared envelope ["
        << g.inf_abs() << ", " << g.sup_abs() << "]: sampled |g| range [" << c.measured_inf
        << ", " << c.measured_sup << "] (boundedness hypothesis a0 <= |g| <= b0)";
    throw ConfigError(err.str());
  }
  return c;
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  const nlohmann::json model_j = doc.value("model", nlohmann::json::object());

  ExperimentConfig out;
  ModelConfig& m = out.model;
  m.alpha = get_or(model_j, "alpha", m.alpha);
  m.gamma = get_or(model_j, "gamma", m.gamma);
  m.n_modes = get_or(model_j, "n_modes", m.n_modes);
  m.grid_size = get_or(model_j, "grid_size", 2 * m.n_modes);
  m.dt = get_or(model_j, "dt", m.dt);
  m.seed = get_or(model_j, "seed", m.seed);
  m.convective = get_or(model_j, "convective", m.convective);
  m.n_trunc = get_or(model_j, "n_trunc", m.n_trunc);
  m.norm_ceiling = get_or(model_j, "norm_ceiling", m.norm_ceiling);
  m.hbeta = get_or(model_j, "hbeta", m.hbeta);
  if (model_j.contains("g")) {
    const auto& gj = model_j.at("g");
    m.g = DiffusionCoefficient::from_name(get_or<std::string>(gj, "kind", "one_plus_half_tanh"),
                                          get_or(gj, "value", 1.0));
  }
  m.validate();
  out.g_checks = check_diffusion(m.g);
  out.experiment = doc.value("experiment", nlohmann::json::object());

  out.resolved = {
      {"model",
       {{"alpha", m.alpha},
        {"gamma", m.gamma},
        {"n_modes", m.n_modes},
        {"grid_size", m.grid_size},
        {"dt", m.dt},
        {"seed", m.seed},
        {"convective", m.convective},
        {"n_trunc", m.n_trunc},
        {"norm_ceiling", m.norm_ceiling},
        {"hbeta", m.hbeta},
        {"g",
         {{"kind", m.g.name()},
          {"value", m.g.is_constant() ? m.g.constant_value() : 0.0},
          {"declared_inf_abs", m.g.inf_abs()},
          {"declared_sup_abs", m.g.sup_abs()},
          {"declared_lipschitz", m.g.lipschitz()},
          {"measured_inf_abs", out.g_checks.measured_inf},
          {"measured_sup_abs", out.g_checks.measured_sup},
          {"measured_lipschitz", out.g_checks.measured_lipschitz}}}}},
      {"experiment", out.experiment}};
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(doc);
}

SpectralField initial_condition_from(const nlohmann::json& spec, std::size_t n_modes) {
  if (spec.is_null()) return SpectralField(n_modes);
  const std::string kind = get_or<std::string>(spec, "kind", "zero");
  if (kind == "zero") return SpectralField(n_modes);
  if (kind == "mode") {
    const std::size_t j = get_or<std::size_t>(spec, "j", 1);
    const double amp = get_or(spec, "amplitude", 1.0);
    if (j < 1 || j > n_modes)
      throw ConfigError("initial condition: mode index outside 1..n_modes");
    return SpectralField::unit_mode(j, n_modes, amp);
  }
  if (kind == "coeffs") {
    std::vector<double> vals = get_or(spec, "values", std::vector<double>{});
    if (vals.size() > n_modes)
      throw ConfigError("initial condition: more coefficients than retained modes");
    vals.resize(n_modes, 0.0);
    return SpectralField(std::move(vals));
  }
  throw ConfigError("initial condition kind must be zero|mode|coeffs, got '" + kind + "'");
}

Observable observable_from(const nlohmann::json& spec, const ModelConfig& model) {
  const std::string kind = get_or<std::string>(spec, "kind", "l2_norm_sq");
  Observable o;
  if (kind == "l2_norm_sq") {
    o = Observable::l2_sq();
  } else if (kind == "mode_k") {
    o = Observable::mode(get_or<std::size_t>(spec, "k", 1));
  } else if (kind == "hbeta_norm_sq") {
    o = Observable::hbeta_sq(get_or(spec, "beta", model.hbeta));
  } else if (kind == "sup_grid") {
    o = Observable::sup(get_or(spec, "grid", model.grid_size));
  } else {
    throw ConfigError("observable kind must be l2_norm_sq|mode_k|hbeta_norm_sq|sup_grid, got '" +
                      kind + "'");
  }
  if (spec.contains("clip")) {
    const auto clip = spec.at("clip").get<std::vector<double>>();
    if (clip.size() != 2 || !(clip[0] < clip[1]))
      throw ConfigError("observable clip must be [lo, hi] with lo < hi");
    o.clip_lo = clip[0];
    o.clip_hi = clip[1];
  }
  if (spec.contains("name")) o.name = spec.at("name").get<std::string>();
  return o;
}

void require_nondegenerate_g(const ModelConfig& model, const std::string& experiment) {
  if (model.g.inf_abs() <= 0.0) {
    std::ostringstream err;
    err << "experiment '" << experiment
        << "' probes uniqueness/irreducibility and requires inf|g| > 0; diffusion '"
        << model.g.name() << "' has a zero";
    throw ConfigError(err.str());
  }
}

}  // namespace fsbe
