#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pst {

using cplx = std::complex<double>;

// Thrown for structurally invalid inputs (bad lengths, parities, domains).
// The CLI maps this to exit code 2.
struct invalid_input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an algorithm fails to converge or loses precision beyond
// tolerance. The CLI maps this to exit code 3.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Central tolerance constants. Values are defaults chosen once and used
// consistently by the checks that cite them.
namespace tol {
inline constexpr double mirror_rel = 1e-8;       // coupling mirror symmetry
inline constexpr double gap_rel = 1e-9;          // odd-gap multiple check
inline constexpr double spectrum_sym = 1e-9;     // lambda <-> -lambda pairing
inline constexpr double arrival_amp = 1e-7;      // |amp(t0)| = 1 check
inline constexpr double eig_residual_rel = 1e-10;
inline constexpr double weight_sum = 1e-10;
inline constexpr double degenerate_rel = 1e-12;  // min gap vs span
inline constexpr double quadrature_abs = 1e-8;
inline constexpr double bisection_time = 1e-9;
}  // namespace tol

// Field-carrying tridiagonal Hamiltonian on n sites. couplings[k] joins
// sites k+1 and k+2 (1-based site labels); diagonal holds on-site fields,
// all zero for the mirror-symmetric synthesis targets.
struct ChainSpec {
  int n = 0;
  std::vector<double> couplings;  // n-1 entries, all > 0
  std::vector<double> diagonal;   // n entries
  std::string label;

  ChainSpec() = default;
  explicit ChainSpec(std::vector<double> couplings_in,
                     std::vector<double> diagonal_in = {},
                     std::string label_in = "");

  double max_coupling() const;
  bool is_field_free(double abs_tol) const;
};

// Ordered eigenvalue list with optional certification that consecutive
// gaps are odd multiples of a base gap g (then transfer_time = pi/g).
struct Spectrum {
  std::vector<double> values;  // strictly increasing
  std::optional<double> base_gap;
  std::optional<double> transfer_time;

  Spectrum() = default;
  explicit Spectrum(std::vector<double> values_in);

  double span() const { return values.back() - values.front(); }
  bool is_symmetric(double abs_tol = tol::spectrum_sym) const;
};

// Squared first-site eigenvector components, ordered like the spectrum.
struct EndWeights {
  std::vector<double> weights;  // nonnegative, sum 1
};

struct PstVerdict {
  bool is_mirror_symmetric = false;
  bool has_odd_gap_spectrum = false;
  std::optional<double> t0;     // pi / base gap, present iff both flags set
  std::optional<cplx> phase;    // arrival phase <n|e^{-iHt0}|1> / |...|
};

// Full eigendecomposition of a ChainSpec, eigenvalues ascending.
// Column k of `vectors` (stored column-major) is the k-th eigenvector.
struct Eigensystem {
  int n = 0;
  std::vector<double> values;
  std::vector<double> vectors;  // n*n, column-major

  double vec(int site0, int k) const { return vectors[site0 + static_cast<std::size_t>(n) * k]; }
};

Eigensystem eigendecompose(const ChainSpec& chain);

// Eigenvalues of `chain` plus base-gap detection (see detect_base_gap).
Spectrum spectrum_of(const ChainSpec& chain);

// <1|H^k|1> via repeated tridiagonal matrix-vector products.
double end_moment(const ChainSpec& chain, int k);

// Tr(H^k S) with S the site-flip operator: the anti-diagonal sum of H^k.
double antisymmetric_trace(const ChainSpec& chain, int k);

// Mirror-symmetry and odd-gap checks; t0 and arrival phase when both hold.
PstVerdict pst_check(const ChainSpec& chain);

// Tries g = (min gap)/m for m = 1,3,...,21 and returns the first g for
// which every consecutive gap is an odd multiple of g to relative
// tolerance tol::gap_rel; nullopt when no such g exists.
std::optional<double> detect_base_gap(const std::vector<double>& values);

// Divides all couplings by max|J|; any certified transfer time scales by
// max|J| correspondingly (J1*t0 is invariant). Diagonal scales too.
ChainSpec rescaled_to_unit_max(const ChainSpec& chain);

}  // namespace pst
