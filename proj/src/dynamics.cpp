#include "pst/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pst {

namespace {

constexpr double kGaussCut = 5.0;  // gaussian support truncated at +-5 sigma

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

ReceiverWindow ReceiverWindow::delta() {
  ReceiverWindow w;
  w.kind = Kind::delta;
  return w;
}

ReceiverWindow ReceiverWindow::box(double full_width) {
  if (!(full_width > 0)) throw invalid_input_error("box width must be positive");
  ReceiverWindow w;
  w.kind = Kind::box;
  w.width = full_width;
  return w;
}

ReceiverWindow ReceiverWindow::gaussian(double sigma) {
  if (!(sigma > 0)) throw invalid_input_error("gaussian sigma must be positive");
  ReceiverWindow w;
  w.kind = Kind::gaussian;
  w.width = sigma;
  return w;
}

ReceiverWindow ReceiverWindow::tabulated(std::vector<double> times, std::vector<double> density) {
  if (times.size() < 2 || times.size() != density.size())
    throw invalid_input_error("tabulated window needs matching time/density lists");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (!(times[i] < times[i + 1]))
      throw invalid_input_error("tabulated window times must be strictly increasing");
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    if (density[i] < 0 || density[i + 1] < 0)
      throw invalid_input_error("tabulated window density must be nonnegative");
    integral += 0.5 * (density[i] + density[i + 1]) * (times[i + 1] - times[i]);
  }
  if (std::abs(integral - 1.0) > 1e-8)
    throw invalid_input_error("tabulated window density must integrate to 1");
  ReceiverWindow w;
  w.kind = Kind::tabulated;
  w.times = std::move(times);
  w.density = std::move(density);
  return w;
}

double ReceiverWindow::support_lo() const {
  switch (kind) {
    case Kind::delta: return 0.0;
    case Kind::box: return -0.5 * width;
    case Kind::gaussian: return -kGaussCut * width;
    case Kind::tabulated: return times.front();
  }
  return 0.0;
}

double ReceiverWindow::support_hi() const {
  switch (kind) {
    case Kind::delta: return 0.0;
    case Kind::box: return 0.5 * width;
    case Kind::gaussian: return kGaussCut * width;
    case Kind::tabulated: return times.back();
  }
  return 0.0;
}

double ReceiverWindow::density_at(double tau) const {
  switch (kind) {
    case Kind::delta:
      throw invalid_input_error("delta window has no density");
    case Kind::box:
      return (tau >= -0.5 * width && tau <= 0.5 * width) ? 1.0 / width : 0.0;
    case Kind::gaussian: {
      if (std::abs(tau) > kGaussCut * width) return 0.0;
      const double z = tau / width;
      const double norm =
          width * std::sqrt(2.0 * std::numbers::pi) * std::erf(kGaussCut / std::sqrt(2.0));
      return std::exp(-0.5 * z * z) / norm;
    }
    case Kind::tabulated: {
      if (tau < times.front() || tau > times.back()) return 0.0;
      auto it = std::upper_bound(times.begin(), times.end(), tau);
      if (it == times.begin()) return density.front();
      if (it == times.end()) return density.back();
      const std::size_t hi = it - times.begin();
      const std::size_t lo = hi - 1;
      const double f = (tau - times[lo]) / (times[hi] - times[lo]);
      return density[lo] + f * (density[hi] - density[lo]);
    }
  }
  return 0.0;
}

Propagator::Propagator(const ChainSpec& chain) : es_(eigendecompose(chain)) {}

cplx Propagator::amplitude(double t, int source, int target) const {
  const int n = es_.n;
  if (source < 1 || source > n || target < 1 || target > n)
    throw invalid_input_error("site index out of range");
  cplx acc = 0;
  for (int k = 0; k < n; ++k)
    acc += es_.vec(target - 1, k) * es_.vec(source - 1, k) *
           std::exp(cplx(0, -es_.values[k] * t));
  return acc;
}

std::vector<cplx> Propagator::column(double t, int source) const {
  const int n = es_.n;
  if (source < 1 || source > n) throw invalid_input_error("site index out of range");
  std::vector<cplx> phase(n);
  for (int k = 0; k < n; ++k)
    phase[k] = es_.vec(source - 1, k) * std::exp(cplx(0, -es_.values[k] * t));
  std::vector<cplx> out(n, cplx(0, 0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) out[i] += es_.vec(i, k) * phase[k];
  return out;
}

cplx transfer_amplitude(const ChainSpec& chain, double t, int source, int target) {
  return Propagator(chain).amplitude(t, source, target);
}

EvolutionTrace trace(const ChainSpec& chain, double t_max, int steps, int threads) {
  if (steps < 2) throw invalid_input_error("trace needs at least two grid points");
  if (!(t_max > 0)) throw invalid_input_error("trace span must be positive");
  Propagator prop(chain);
  EvolutionTrace tr;
  tr.times.resize(steps);
  tr.amplitudes.resize(steps);
  tr.fe.resize(steps);
  tr.f.resize(steps);
#if defined(_OPENMP)
  const int want = threads >= 1 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) if (threads != 1) num_threads(want)
#endif
  for (int i = 0; i < steps; ++i) {
    const double t = t_max * i / (steps - 1);
    const cplx a = prop.amplitude(t, 1, chain.n);
    tr.times[i] = t;
    tr.amplitudes[i] = a;
    tr.fe[i] = clamp01(std::norm(a));
    tr.f[i] = qubit_fidelity(tr.fe[i]);
  }
  return tr;
}

double qubit_fidelity(double fe) {
  if (!(fe >= 0.0 && fe <= 1.0))
    throw invalid_input_error("transfer probability must lie in [0, 1]");
  const double s = 1.0 + std::sqrt(fe);
  return 1.0 / 3.0 + s * s / 6.0;
}

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  double abs_tol;
};

double simpson_slice(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const SimpsonState& st, double a, double b, double fa, double fm,
                       double fb, double whole, double tol_here, int depth) {
  if (depth <= 0) throw numerical_error("quadrature failed to converge");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.f(lm), frm = st.f(rm);
  const double left = simpson_slice(fa, flm, fm, m - a);
  const double right = simpson_slice(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol_here) return left + right + delta / 15.0;
  return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol_here, depth - 1) +
         simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol_here, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol) {
  if (a == b) return 0.0;
  SimpsonState st{f, abs_tol};
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson_slice(fa, fm, fb, b - a);
  return simpson_recurse(st, a, b, fa, fm, fb, whole, abs_tol, 48);
}

double windowed_transfer(const ChainSpec& chain, const ReceiverWindow& window, double t0) {
  if (!(t0 > 0)) throw invalid_input_error("nominal time must be positive");
  Propagator prop(chain);
  if (window.kind == ReceiverWindow::Kind::delta)
    return clamp01(std::abs(prop.amplitude(t0, 1, chain.n)));
  auto integrand = [&](double tau) {
    return window.density_at(tau) * std::abs(prop.amplitude(t0 + tau, 1, chain.n));
  };
  const double v =
      adaptive_simpson(integrand, window.support_lo(), window.support_hi(), tol::quadrature_abs);
  return clamp01(v);
}

double expected_fidelity(const ChainSpec& chain, const ReceiverWindow& window, double t0) {
  if (!(t0 > 0)) throw invalid_input_error("nominal time must be positive");
  Propagator prop(chain);
  if (window.kind == ReceiverWindow::Kind::delta)
    return qubit_fidelity(clamp01(std::norm(prop.amplitude(t0, 1, chain.n))));
  auto integrand = [&](double tau) {
    const double fe = clamp01(std::norm(prop.amplitude(t0 + tau, 1, chain.n)));
    return window.density_at(tau) * (2.0 * std::sqrt(fe) + fe);
  };
  const double v =
      adaptive_simpson(integrand, window.support_lo(), window.support_hi(), tol::quadrature_abs);
  return 0.5 + v / 6.0;
}

double arrival_width(const std::function<double(double)>& fe, double t0, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw invalid_input_error("threshold must lie in (0, 1)");
  if (!(t0 > 0)) throw invalid_input_error("nominal time must be positive");
  const double level = 1.0 - eps;
  if (fe(t0) < level) throw invalid_input_error("no arrival plateau");
  const double step = t0 / 1024.0;
  auto edge = [&](int dir) {
    double inside = t0;
    double outside = t0;
    bool found = false;
    for (int k = 1; k <= 1024; ++k) {
      const double t = t0 + dir * k * step;
      if (fe(t) < level) {
        outside = t;
        found = true;
        break;
      }
      inside = t;
    }
    if (!found) return t0 + dir * 1024 * step;  // plateau spans the search cap
    while (std::abs(outside - inside) > tol::bisection_time) {
      const double mid = 0.5 * (inside + outside);
      if (fe(mid) >= level)
        inside = mid;
      else
        outside = mid;
    }
    return 0.5 * (inside + outside);
  };
  const double hi = edge(+1);
  const double lo = edge(-1);
  return hi - lo;
}

double arrival_width(const ChainSpec& chain, double t0, double eps) {
  Propagator prop(chain);
  auto fe = [&](double t) { return clamp01(std::norm(prop.amplitude(t, 1, chain.n))); };
  return arrival_width(fe, t0, eps);
}

double profile_exponent(const EvolutionTrace& trace, double t0) {
  if (!(t0 > 0)) throw invalid_input_error("nominal time must be positive");
  const double lo = 0.5 * t0 - 1e-12 * t0;
  const double hi = 0.95 * t0 + 1e-12 * t0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t < lo || t > hi) continue;
    const double fe = trace.fe[i];
    if (!(fe > 0)) continue;
    const double x = 2.0 * std::log(std::sin(std::numbers::pi * t / (2.0 * t0)));
    const double y = std::log(fe);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 8) throw invalid_input_error("too few usable samples for a profile fit");
  const double var = sxx - sx * sx / m;
  if (!(var > 0)) throw numerical_error("degenerate abscissa in profile fit");
  return (sxy - sx * sy / m) / var;
}

}  // namespace pst
