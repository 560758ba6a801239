#pragma once

#include <functional>
#include <vector>

#include "pst/chain.hpp"

namespace pst {

// Receiver timing density p(tau), tau measured relative to the nominal
// arrival time. box: 1/w on [-w/2, w/2]; gaussian: truncated at +-5 sigma
// and renormalized; tabulated: piecewise-linear density on given nodes.
struct ReceiverWindow {
  enum class Kind { delta, box, gaussian, tabulated };
  Kind kind = Kind::delta;
  double width = 0;                // box full width, or gaussian sigma
  std::vector<double> times;       // tabulated nodes (relative times)
  std::vector<double> density;     // tabulated values, must integrate to 1

  static ReceiverWindow delta();
  static ReceiverWindow box(double full_width);
  static ReceiverWindow gaussian(double sigma);
  static ReceiverWindow tabulated(std::vector<double> times, std::vector<double> density);

  double support_lo() const;       // relative to nominal time
  double support_hi() const;
  double density_at(double tau) const;
};

// Sampled end-to-end evolution: amplitudes <n|e^{-iHt}|1> (or an encoded
// overlap), fe = |amp|^2, f = qubit fidelity map of fe.
struct EvolutionTrace {
  std::vector<double> times;
  std::vector<cplx> amplitudes;
  std::vector<double> fe;
  std::vector<double> f;
};

// Eigendecomposition cache for repeated amplitude evaluations.
class Propagator {
 public:
  explicit Propagator(const ChainSpec& chain);

  // <target|e^{-iHt}|source>, 1-based sites.
  cplx amplitude(double t, int source, int target) const;

  // Full column e^{-iHt}|source>.
  std::vector<cplx> column(double t, int source) const;

  const Eigensystem& eig() const { return es_; }
  int n() const { return es_.n; }

 private:
  Eigensystem es_;
};

cplx transfer_amplitude(const ChainSpec& chain, double t, int source, int target);

// Uniform grid on [0, t_max] with `steps` points (endpoints included).
// threads: 0 = default parallelism, 1 = serial, k>1 = k threads.
EvolutionTrace trace(const ChainSpec& chain, double t_max, int steps, int threads = 0);

// 1/3 + (1 + sqrt(fe))^2 / 6.
double qubit_fidelity(double fe);

// Integral of p(t - t0) |<n|e^{-iHt}|1>| over the window support
// (adaptive Simpson, absolute tolerance tol::quadrature_abs).
double windowed_transfer(const ChainSpec& chain, const ReceiverWindow& window, double t0);

// 1/2 + (1/6) Integral p(t - t0) (2 sqrt(Fe) + Fe) dt.
double expected_fidelity(const ChainSpec& chain, const ReceiverWindow& window, double t0);

// Length of the maximal interval around t0 where fe >= 1 - eps; crossings
// located by bisection to tol::bisection_time. The generic overload takes
// any profile; search is capped at t0 on either side of t0.
double arrival_width(const std::function<double(double)>& fe, double t0, double eps);
double arrival_width(const ChainSpec& chain, double t0, double eps);

// Least-squares slope (with intercept) of ln fe against
// 2 ln sin(pi t / (2 t0)) over samples in [0.5 t0, 0.95 t0]; fe <= 0
// samples are dropped; fewer than 8 usable samples is an error.
double profile_exponent(const EvolutionTrace& trace, double t0);

// Adaptive Simpson quadrature on [a, b] to absolute tolerance abs_tol.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol);

}  // namespace pst
