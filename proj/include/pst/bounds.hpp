#pragma once

#include <string>
#include <vector>

#include "pst/chain.hpp"
#include "pst/dynamics.hpp"

namespace pst {

enum class Parity { even, odd };

// pi / (2 J1): minimum orthogonalization time for a field-free chain,
// since the end-site energy variance is J1^2.
double mandelstam_tamm_time(const ChainSpec& chain);

// max over trace samples with t <= pi/(2 J1) of fe(t) - sin^2(J1 t).
// Nonpositive up to rounding for every chain.
double anandan_violation(const ChainSpec& chain, const EvolutionTrace& trace);

// Minimal first coupling compatible with end-to-end transfer in time t0:
// sqrt(3) pi / (2 t0) for even length (>= 4), pi / t0 for odd (>= 5).
double theorem_bound(Parity parity, double t0);

struct TradeoffPoint {
  double gamma = 0;   // effective (snapped) clear-out scale
  double t0 = 0;      // transfer time of the unit-max-coupling chain
  double j1 = 0;      // first coupling of that chain
  double j1_t0 = 0;   // scale-invariant product
  bool ok = false;
  std::string note;   // snap records / per-point failure reason
};

// For each gamma: synthesize the rescaled two-scale chain and record
// (t0, J1, J1 t0). Failed points are flagged, not fatal. Output order
// follows the input order. threads as in trace().
std::vector<TradeoffPoint> tradeoff_sweep(int n, int r, const std::vector<double>& gammas,
                                          int threads = 0);

}  // namespace pst
