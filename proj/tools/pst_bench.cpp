// Benchmarks the parallel kernels against the serial path and verifies the
// two produce bit-identical results. Exit code is nonzero on any mismatch.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "pst/bounds.hpp"
#include "pst/chain.hpp"
#include "pst/dynamics.hpp"
#include "pst/encoding.hpp"
#include "pst/robustness.hpp"
#include "pst/synthesis.hpp"

namespace {

template <typename F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

bool same_bits(double a, double b) {
  return std::memcmp(&a, &b, sizeof(double)) == 0;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, double serial_s, double parallel_s, bool match) {
    std::printf("%-18s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n", name,
                serial_s, parallel_s, serial_s / parallel_s, match ? "identical" : "MISMATCH");
    if (!match) ++failures;
  };

  {
    pst::ChainSpec chain = pst::krawtchouk(64, 1.0);
    pst::EvolutionTrace serial, parallel;
    const double ts = timed([&] { serial = pst::trace(chain, 40.0, 20000, 1); });
    const double tp = timed([&] { parallel = pst::trace(chain, 40.0, 20000, 0); });
    report("trace", ts, tp, same_bits(serial.fe, parallel.fe) && same_bits(serial.f, parallel.f));
  }

  {
    pst::ChainSpec chain = pst::krawtchouk(50, 1.0);
    const double t0 = *pst::pst_check(chain).t0;
    pst::PerturbationReport serial, parallel;
    const double ts =
        timed([&] { serial = pst::perturb_ensemble(chain, t0, 1e-2, 3, 47, 2000, 7, 1); });
    const double tp =
        timed([&] { parallel = pst::perturb_ensemble(chain, t0, 1e-2, 3, 47, 2000, 7, 0); });
    const bool match = same_bits(serial.q25, parallel.q25) &&
                       same_bits(serial.q50, parallel.q50) &&
                       same_bits(serial.q75, parallel.q75) &&
                       same_bits(serial.mean, parallel.mean);
    report("perturb_ensemble", ts, tp, match);
  }

  {
    pst::ChainSpec chain = pst::krawtchouk(61, 1.0);
    pst::EncodingPair pair = pst::optimal_timing_encoding(chain, 7);
    pst::EvolutionTrace serial, parallel;
    const double ts = timed([&] { serial = pst::encoded_trace(chain, pair, 40.0, 20000, 1); });
    const double tp = timed([&] { parallel = pst::encoded_trace(chain, pair, 40.0, 20000, 0); });
    report("encoded_trace", ts, tp,
           same_bits(serial.fe, parallel.fe) && same_bits(serial.f, parallel.f));
  }

  {
    std::vector<double> gammas;
    for (int g = 5; g <= 81; g += 4) gammas.push_back(g);
    std::vector<pst::TradeoffPoint> serial, parallel;
    const double ts = timed([&] { serial = pst::tradeoff_sweep(41, 5, gammas, 1); });
    const double tp = timed([&] { parallel = pst::tradeoff_sweep(41, 5, gammas, 0); });
    bool match = serial.size() == parallel.size();
    for (std::size_t i = 0; match && i < serial.size(); ++i)
      match = same_bits(serial[i].t0, parallel[i].t0) &&
              same_bits(serial[i].j1, parallel[i].j1) &&
              same_bits(serial[i].j1_t0, parallel[i].j1_t0);
    report("tradeoff_sweep", ts, tp, match);
  }

  if (failures > 0) {
    std::printf("%d kernel(s) diverged between serial and parallel runs\n", failures);
    return 1;
  }
  std::printf("all kernels bit-identical across thread counts\n");
  return 0;
}
