#pragma once

#include <string>
#include <vector>

#include "pst/chain.hpp"

namespace pst {

// Parameters of the two-scale spectrum family: r central eigenvalues with
// unit-gap spacing g, the remaining (n-r)/2 pairs pushed out by the
// clear-out scale gamma. `gamma` is the effective (possibly snapped)
// value actually used; `requested_gamma` is what the caller asked for.
struct TRexParams {
  int n = 0;
  int r = 0;
  double requested_gamma = 0;
  double gamma = 0;
  double base_gap = 1.0;
  bool snapped = false;
  std::string snap_note;
};

// Validates (n, r) parity and gamma > r; for even r snaps gamma to the
// nearest integer with gamma = r + 1 (mod 4) so the first cleared pair can
// sit exactly at gamma*g/2 (ties round up); odd r needs no snap.
TRexParams make_trex_params(int n, int r, double gamma, double base_gap = 1.0);

// Couplings j*sqrt(k(n-k)); linear spectrum j*{-(n-1), -(n-3), ..., n-1}.
ChainSpec krawtchouk(int n, double j);

// Weights a_k proportional to 1/|q'(lambda_k)| for the characteristic
// polynomial q; evaluated in log space to survive large dynamic range.
EndWeights end_weights_from_spectrum(const Spectrum& spectrum);

// Inverse eigenvalue solve for a symmetric (lambda <-> -lambda) spectrum:
// Lanczos on diag(values) started from sqrt(weights), fully
// reorthogonalized; output is field-free and exactly mirror-symmetric.
ChainSpec chain_from_spectrum(const Spectrum& spectrum);

// General inverse solve from (values, first-site weights); the result may
// carry a nonzero diagonal. Used by the shifted-spectrum construction.
ChainSpec chain_from_values_weights(const std::vector<double>& values,
                                    const std::vector<double>& weights,
                                    const std::string& label = "");

// Central block {+-g/2, +-3g/2, ...} (even r) or {0, +-g, +-2g, ...}
// (odd r); first cleared pair at the smallest c1 >= gamma*g/2 with
// (c1 - max central)/g odd; subsequent pairs spaced by g' = smallest odd
// integer >= gamma, times g.
Spectrum trex_spectrum(const TRexParams& params);

// chain_from_spectrum(trex_spectrum(params)), optionally rescaled to unit
// maximum coupling (transfer time then scales by the former max coupling).
ChainSpec trex_chain(const TRexParams& params, bool rescale_to_unit_max = false);

// Spectrum {+-1, +-(1+2*gamma), ..., +-(1+(n-2)*gamma)}: two retained
// central eigenvalues, base gap 2, transfer time pi/2.
Spectrum special_r2_spectrum(int n, int gamma);

// Closed-form approximation assembled from three elements: outer arms from
// a half-gap Krawtchouk of length r, a central Krawtchouk block on the
// cleared scale, and a connector fixed by K^2 <1|Hc^{-1}|n-r> = r g^2/4.
// Defined for even r >= 4 and even n-r (odd central blocks are singular).
ChainSpec trex_approximation(const TRexParams& params);

struct PruneResult {
  ChainSpec chain;          // length n-2, resynthesized without +-lambda_max
  double predicted_j1_sq;   // J1^2 - J1^2 J2^2 / (lambda_max^2 - J1^2)
};

// Removes the extremal eigenvalue pair of a mirror-symmetric transfer
// chain and resynthesizes; the new first coupling obeys the closed form
// above and transfer at the parent t0 is preserved.
PruneResult prune_extremal_pair(const ChainSpec& chain);

}  // namespace pst
