#include "pst/bounds.hpp"

#include <cmath>
#include <numbers>

#include "pst/synthesis.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pst {

double mandelstam_tamm_time(const ChainSpec& chain) {
  // end-site energy variance is J1^2 for any diagonal, since <1|H|1> = h1
  // and <1|H^2|1> = h1^2 + J1^2
  return std::numbers::pi / (2.0 * chain.couplings[0]);
}

double anandan_violation(const ChainSpec& chain, const EvolutionTrace& trace) {
  const double j1 = chain.couplings[0];
  const double cutoff = std::numbers::pi / (2.0 * j1);
  bool any = false;
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    const double t = trace.times[i];
    if (t > cutoff * (1.0 + 1e-15)) continue;
    const double s = std::sin(j1 * t);
    const double v = trace.fe[i] - s * s;
    if (!any || v > worst) worst = v;
    any = true;
  }
  if (!any) throw invalid_input_error("trace has no samples below pi/(2 J1)");
  return worst;
}

double theorem_bound(Parity parity, double t0) {
  if (!(t0 > 0)) throw invalid_input_error("transfer time must be positive");
  if (parity == Parity::even) return std::sqrt(3.0) * std::numbers::pi / (2.0 * t0);
  return std::numbers::pi / t0;
}

std::vector<TradeoffPoint> tradeoff_sweep(int n, int r, const std::vector<double>& gammas,
                                          int threads) {
  const int count = static_cast<int>(gammas.size());
  std::vector<TradeoffPoint> points(count);
#if defined(_OPENMP)
  const int want = threads >= 1 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) if (threads != 1) num_threads(want)
#endif
  for (int i = 0; i < count; ++i) {
    TradeoffPoint& pt = points[i];
    try {
      TRexParams params = make_trex_params(n, r, gammas[i]);
      ChainSpec chain = trex_chain(params, /*rescale_to_unit_max=*/true);
      PstVerdict verdict = pst_check(chain);
      if (!verdict.t0) {
        pt.gamma = params.gamma;
        pt.note = "synthesized chain failed the transfer certification";
        continue;
      }
      pt.gamma = params.gamma;
      pt.t0 = *verdict.t0;
      pt.j1 = chain.couplings[0];
      pt.j1_t0 = pt.j1 * pt.t0;
      pt.note = params.snap_note;
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.gamma = gammas[i];
      pt.ok = false;
      pt.note = e.what();
    }
  }
  return points;
}

}  // namespace pst
