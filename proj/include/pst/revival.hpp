#pragma once

#include <utility>

#include "pst/chain.hpp"

namespace pst {

// Replaces the two equal central couplings J of an odd-length
// mirror-symmetric transfer chain by sqrt(2) J cos(theta) and
// sqrt(2) J sin(theta). At the original t0 the excitation splits with
// P_1 = cos^2(2 theta), P_n = sin^2(2 theta). theta is clamped to
// [1e-6, pi/2 - 1e-6] to keep couplings positive; a clamp is recorded in
// the output label.
ChainSpec central_coupling_revival(const ChainSpec& chain, double theta);

// Shifts the antisymmetric-subspace eigenvalues (alternating labels,
// symmetric at the top) by (pi - phase)/t0 and resynthesizes from the
// recomputed end weights. The result generally has a nonzero diagonal and
// evolves |1> to ((1 + e^{i phase})|1> + (1 - e^{i phase})|n>)/2 at t0,
// i.e. P_1 = cos^2(phase/2), P_n = sin^2(phase/2).
ChainSpec spectral_shift_revival(const Spectrum& spectrum, double phase);

// (|<1|e^{-iHt}|1>|^2, |<n|e^{-iHt}|1>|^2).
std::pair<double, double> revival_probabilities(const ChainSpec& chain, double t);

}  // namespace pst
