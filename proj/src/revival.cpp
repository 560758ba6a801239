#include "pst/revival.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pst/dynamics.hpp"
#include "pst/synthesis.hpp"

namespace pst {

ChainSpec central_coupling_revival(const ChainSpec& chain, double theta) {
  const int n = chain.n;
  if (n % 2 == 0 || n < 3)
    throw invalid_input_error("central conversion needs an odd-length chain");
  if (!(theta >= 0.0 && theta <= std::numbers::pi / 2.0))
    throw invalid_input_error("theta must lie in [0, pi/2]");
  const double maxj = chain.max_coupling();
  for (int k = 0; k < n - 1; ++k)
    if (std::abs(chain.couplings[k] - chain.couplings[n - 2 - k]) > tol::mirror_rel * maxj)
      throw invalid_input_error("central conversion needs a mirror-symmetric chain");
  const int left = (n - 1) / 2 - 1;   // coupling indices of the central pair
  const int right = (n - 1) / 2;
  const double j_left = chain.couplings[left];
  const double j_right = chain.couplings[right];
  if (std::abs(j_left - j_right) > tol::mirror_rel * maxj)
    throw invalid_input_error("central couplings must be equal before conversion");
  const double j = 0.5 * (j_left + j_right);

  constexpr double clamp = 1e-6;
  bool clamped = false;
  double th = theta;
  if (th < clamp) {
    th = clamp;
    clamped = true;
  }
  if (th > std::numbers::pi / 2.0 - clamp) {
    th = std::numbers::pi / 2.0 - clamp;
    clamped = true;
  }
  std::vector<double> c = chain.couplings;
  c[left] = std::sqrt(2.0) * j * std::cos(th);
  c[right] = std::sqrt(2.0) * j * std::sin(th);
  std::ostringstream label;
  label << (chain.label.empty() ? "chain" : chain.label) << " [revival theta=" << theta;
  if (clamped) label << ", clamped to keep couplings positive";
  label << "]";
  return ChainSpec(std::move(c), chain.diagonal, label.str());
}

ChainSpec spectral_shift_revival(const Spectrum& spectrum, double phase) {
  Spectrum s = spectrum;
  if (!s.base_gap) {
    if (auto g = detect_base_gap(s.values)) {
      s.base_gap = *g;
      s.transfer_time = std::numbers::pi / *g;
    } else {
      throw invalid_input_error("spectrum lacks the odd-gap structure needed for revival");
    }
  }
  const double t0 = std::numbers::pi / *s.base_gap;
  const double shift = (std::numbers::pi - phase) / t0;
  const int n = static_cast<int>(s.values.size());
  // alternate subspace labels downward from a symmetric top eigenvector:
  // index i is antisymmetric when n-1-i is odd
  std::vector<double> shifted = s.values;
  for (int i = 0; i < n; ++i)
    if ((n - 1 - i) % 2 == 1) shifted[i] += shift;
  std::sort(shifted.begin(), shifted.end());
  const double span = std::max(shifted.back() - shifted.front(), 1e-300);
  for (int i = 0; i + 1 < n; ++i)
    if (shifted[i + 1] - shifted[i] <= tol::degenerate_rel * span)
      throw invalid_input_error("degenerate after shift");
  Spectrum shifted_spec(shifted);
  EndWeights w = end_weights_from_spectrum(shifted_spec);
  std::ostringstream label;
  label << "spectral-shift phi=" << phase;
  return chain_from_values_weights(shifted, w.weights, label.str());
}

std::pair<double, double> revival_probabilities(const ChainSpec& chain, double t) {
  Propagator prop(chain);
  const double p1 = std::norm(prop.amplitude(t, 1, 1));
  const double pn = std::norm(prop.amplitude(t, 1, chain.n));
  return {std::min(p1, 1.0), std::min(pn, 1.0)};
}

}  // namespace pst
