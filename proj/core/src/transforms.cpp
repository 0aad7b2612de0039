#include "fsbe/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fsbe/errors.hpp"

namespace fsbe {
namespace {

// One cached out-of-place plan per (kind, length). FFTW_UNALIGNED lets the
// cached plan run on arbitrary caller buffers via the new-array interface.
class PlanCache {
 public:
  fftw_plan get(fftw_r2r_kind kind, std::size_t n) {
    std::scoped_lock lk(mu_);
    auto key = std::make_pair(static_cast<int>(kind), n);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<double> in(n, 0.0), out(n, 0.0);
    fftw_plan p = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(), kind,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, std::size_t>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void run(fftw_r2r_kind kind, std::span<const double> in, std::span<double> out) {
  fftw_plan p = cache().get(kind, in.size());
  // new-array execution; in/out must be distinct (plans are out-of-place)
  fftw_execute_r2r(p, const_cast<double*>(in.data()), out.data());
}

}  // namespace

std::vector<double> sine_synthesize(std::span<const double> coeffs, std::size_t m_grid) {
  if (m_grid == 0) throw UsageError("sine_synthesize: empty grid");
  // DST-I of length M: Y_i = 2 sum_j X_j sin(pi (i+1)(j+1)/(M+1));
  // u(x_i) = sqrt(2) sum_j a_j sin(pi j x_i) = Y_{i-1}/sqrt(2) with X = a.
  std::vector<double> in(m_grid, 0.0);
  const std::size_t n = std::min(coeffs.size(), m_grid);
  for (std::size_t j = 0; j < n; ++j) in[j] = coeffs[j];
  std::vector<double> out(m_grid);
  run(FFTW_RODFT00, in, out);
  const double scale = 1.0 / std::numbers::sqrt2;
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> sine_analyze(std::span<const double> samples, std::size_t n_modes) {
  const std::size_t m = samples.size();
  if (m == 0) throw UsageError("sine_analyze: empty sample vector");
  if (n_modes > m)
    throw UsageError("sine_analyze: requested more modes than samples; a grid of M points "
                     "determines at most M sine coefficients (lossy round trip)");
  std::vector<double> out(m);
  run(FFTW_RODFT00, samples, out);
  // a_j = DST_j / (sqrt(2) (M+1))
  const double scale = 1.0 / (std::numbers::sqrt2 * static_cast<double>(m + 1));
  out.resize(n_modes);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> cosine_analyze(std::span<const double> closed_samples) {
  const std::size_t np = closed_samples.size();
  if (np < 3) throw UsageError("cosine_analyze: need at least 3 closed-grid samples");
  const std::size_t p = np - 1;
  // DCT-I of length P+1: Y_k = h_0 + (-1)^k h_P + 2 sum_{i=1}^{P-1} h_i cos(pi i k / P);
  // for h expanded in cos(pi k x) on x_i = i/P this equals P c_k (2P c_0 at k=0 is
  // handled by the same 1/P scaling into the c_0/2 convention).
  std::vector<double> out(np);
  run(FFTW_REDFT00, closed_samples, out);
  const double scale = 1.0 / static_cast<double>(p);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace fsbe
