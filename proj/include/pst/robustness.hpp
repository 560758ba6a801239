#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pst/chain.hpp"

namespace pst {

struct PerturbationReport {
  double delta = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  double q25 = 0, q50 = 0, q75 = 0;  // quantiles of 1 - sqrt(Fe(t0))
  double mean = 0;
  int region_first = 0, region_last = 0;  // 1-based coupling indices
  int resampled = 0;  // draws rejected for producing a nonpositive coupling
};

// Type-7 (linear interpolation) quantile of the sorted copy of `values`.
double quantile(std::vector<double> values, double p);

// Adds i.i.d. uniform(+-delta) offsets to the couplings in
// [region_first, region_last] (1-based, inclusive), evolves each sample to
// the unperturbed chain's t0 and records 1 - sqrt(Fe). Sample k draws from
// substream (seed, k), so results are bit-identical for any thread count.
// A sample whose perturbed coupling would be <= 0 is redrawn, up to 100
// times, then the run fails.
PerturbationReport perturb_ensemble(const ChainSpec& chain, double t0, double delta,
                                    int region_first, int region_last, int samples,
                                    std::uint64_t seed, int threads = 0);

// Central contiguous run of `count` couplings (1-based index pair).
std::pair<int, int> central_region(int n, int count);

// perturb_ensemble for both chains at every delta, same seed per cell.
std::vector<std::pair<PerturbationReport, PerturbationReport>> delta_sweep(
    const ChainSpec& chain_a, const ChainSpec& chain_b, double t0_a, double t0_b,
    const std::vector<double>& deltas, std::pair<int, int> region_a,
    std::pair<int, int> region_b, int samples, std::uint64_t seed, int threads = 0);

}  // namespace pst
