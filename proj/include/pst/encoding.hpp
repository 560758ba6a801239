#pragma once

#include <vector>

#include "pst/chain.hpp"
#include "pst/dynamics.hpp"

namespace pst {

// Contiguous 1-based site range [first, last].
struct SiteRange {
  int first = 0;
  int last = 0;
  int size() const { return last - first + 1; }
};

// Dense |B| x |A| complex matrix, row-major.
struct ComplexMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<cplx> data;
  cplx& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  const cplx& at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

// Encoder supported on the prefix region, decoder on the mirrored suffix;
// objective is the optimized eigen/singular value for the pair.
struct EncodingPair {
  std::vector<double> encoder;  // length n, zero outside region A
  std::vector<double> decoder;  // length n, zero outside region B
  double objective = 0;
  int region_size = 0;
};

// Integral of p(t - t0) P_B e^{-iHt} P_A over the window support, entry by
// entry (adaptive quadrature); a delta window gives P_B e^{-iHt0} P_A.
// Regions must be a site prefix and its mirrored suffix, or identical.
ComplexMatrix windowed_operator(const ChainSpec& chain, const ReceiverWindow& window,
                                double t0, const SiteRange& region_a,
                                const SiteRange& region_b);

// Smallest-eigenvalue eigenvector of H^2 restricted to sites 1..m (m odd,
// m < n/2); decoder is the mirror image. The objective generalizes J1^2:
// m = 1 returns exactly J1^2 and the bare end site.
EncodingPair optimal_timing_encoding(const ChainSpec& chain, int m);

// The unit vector on sites 1..m orthogonal to the restrictions of the
// (m-1)/2 largest-|lambda| eigenvector pairs; because the vector lives
// entirely on the region, the global overlaps vanish as well.
EncodingPair eigenvector_orthogonal_encoding(const ChainSpec& chain, int m);

// Trace of <decoder|e^{-iHt}|encoder> on a uniform grid.
EvolutionTrace encoded_trace(const ChainSpec& chain, const EncodingPair& pair,
                             double t_max, int steps, int threads = 0);

}  // namespace pst
