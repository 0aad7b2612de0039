#pragma once

#include <stdexcept>
#include <string>

namespace fsbe {

// Configuration rejected at load or validation time. The message names the
// violated hypothesis (e.g. the well-posedness range of the dissipation
// exponent) rather than just the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// API misuse: mismatched sizes, missing grid for an L^p norm, incompatible
// histogram bins, too few samples. Distinct from ConfigError so the CLI can
// map it to a usage exit status.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A series evaluator was asked to sum a divergent series; the message states
// the convergence predicate that failed.
class DivergenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A trajectory left the admissible region: non-finite coefficients or an
// L^2 norm above the configured ceiling. Carries the time and trajectory id
// so ensemble drivers can report which path exploded.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::string what, double time, long trajectory = -1)
      : std::runtime_error(std::move(what)), time(time), trajectory(trajectory) {}
  double time;
  long trajectory;
};

}  // namespace fsbe
