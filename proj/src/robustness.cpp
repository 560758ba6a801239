#include "pst/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pst/dynamics.hpp"
#include "pst/rng.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pst {

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw invalid_input_error("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw invalid_input_error("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const double h = (n - 1) * p;
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - lo;
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::pair<int, int> central_region(int n, int count) {
  const int total = n - 1;
  if (count < 1 || count > total)
    throw invalid_input_error("central region count must lie in [1, n-1]");
  if ((total - count) % 2 != 0)
    throw invalid_input_error("central region of that size is not centered for this length");
  const int first = (total - count) / 2 + 1;
  return {first, first + count - 1};
}

PerturbationReport perturb_ensemble(const ChainSpec& chain, double t0, double delta,
                                    int region_first, int region_last, int samples,
                                    std::uint64_t seed, int threads) {
  const int n = chain.n;
  if (region_first < 1 || region_last > n - 1 || region_first > region_last)
    throw invalid_input_error("perturbation region out of range");
  if (!(delta >= 0)) throw invalid_input_error("perturbation half-range must be nonnegative");
  if (samples < 1) throw invalid_input_error("need at least one sample");
  if (!std::isfinite(t0)) throw invalid_input_error("evaluation time must be finite");

  std::vector<double> losses(samples, 0.0);
  std::vector<int> resampled(samples, 0);
  std::vector<char> failed(samples, 0);
#if defined(_OPENMP)
  const int want = threads >= 1 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) if (threads != 1) num_threads(want)
#endif
  for (int s = 0; s < samples; ++s) {
    CounterRng rng(seed, static_cast<std::uint64_t>(s));
    std::vector<double> c = chain.couplings;
    bool ok = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
      bool positive = true;
      for (int k = region_first - 1; k <= region_last - 1; ++k) {
        c[k] = chain.couplings[k] + rng.uniform(-delta, delta);
        if (!(c[k] > 0)) positive = false;
      }
      if (positive) {
        ok = true;
        break;
      }
      ++resampled[s];
    }
    if (!ok) {
      failed[s] = 1;
      continue;
    }
    ChainSpec perturbed(c, chain.diagonal, chain.label);
    Propagator prop(perturbed);
    const double amp = std::abs(prop.amplitude(t0, 1, n));
    losses[s] = std::max(0.0, 1.0 - amp);
  }
  for (int s = 0; s < samples; ++s)
    if (failed[s])
      throw numerical_error("perturbation sample " + std::to_string(s) +
                            " exceeded 100 positivity retries");

  PerturbationReport report;
  report.delta = delta;
  report.samples = samples;
  report.seed = seed;
  report.region_first = region_first;
  report.region_last = region_last;
  report.q25 = quantile(losses, 0.25);
  report.q50 = quantile(losses, 0.50);
  report.q75 = quantile(losses, 0.75);
  double sum = 0.0;
  for (double v : losses) sum += v;  // fixed order, independent of thread count
  report.mean = sum / samples;
  report.resampled = std::accumulate(resampled.begin(), resampled.end(), 0);
  return report;
}

std::vector<std::pair<PerturbationReport, PerturbationReport>> delta_sweep(
    const ChainSpec& chain_a, const ChainSpec& chain_b, double t0_a, double t0_b,
    const std::vector<double>& deltas, std::pair<int, int> region_a,
    std::pair<int, int> region_b, int samples, std::uint64_t seed, int threads) {
  std::vector<std::pair<PerturbationReport, PerturbationReport>> out;
  out.reserve(deltas.size());
  for (double d : deltas)
    out.emplace_back(
        perturb_ensemble(chain_a, t0_a, d, region_a.first, region_a.second, samples, seed,
                         threads),
        perturb_ensemble(chain_b, t0_b, d, region_b.first, region_b.second, samples, seed,
                         threads));
  return out;
}

}  // namespace pst
