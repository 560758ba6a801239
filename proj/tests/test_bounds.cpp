#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "pst/bounds.hpp"
#include "pst/chain.hpp"
#include "pst/dynamics.hpp"
#include "pst/synthesis.hpp"

using pst::ChainSpec;

TEST_CASE("orthogonalization time depends only on the first coupling") {
  ChainSpec chain = pst::krawtchouk(6, 2.0);
  CHECK(pst::mandelstam_tamm_time(chain) ==
        doctest::Approx(std::numbers::pi / (4.0 * std::sqrt(5.0))).epsilon(1e-14));
  // on-site fields leave the end-site energy variance unchanged
  ChainSpec with_fields(chain.couplings, std::vector<double>(6, 0.9));
  CHECK(pst::mandelstam_tamm_time(with_fields) ==
        doctest::Approx(pst::mandelstam_tamm_time(chain)));
}

TEST_CASE("two-site chain saturates the early-time envelope") {
  ChainSpec chain({1.0});
  pst::EvolutionTrace tr = pst::trace(chain, std::numbers::pi / 2, 2001);
  const double v = pst::anandan_violation(chain, tr);
  CHECK(v <= 1e-12);
  CHECK(v >= -1e-9);  // equality case: the envelope is attained
}

TEST_CASE("early-time envelope holds for random transfer chains") {
  std::mt19937_64 engine(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(engine() % 10);
    auto values = testutil::random_odd_gap_spectrum(engine, n, 1.0);
    ChainSpec chain = pst::chain_from_spectrum(pst::Spectrum(values));
    pst::EvolutionTrace tr = pst::trace(chain, pst::mandelstam_tamm_time(chain), 801);
    CHECK(pst::anandan_violation(chain, tr) <= 1e-9);
  }
}

TEST_CASE("envelope check needs samples below the cutoff") {
  ChainSpec chain({1.0});
  pst::EvolutionTrace late;
  late.times = {10.0};
  late.amplitudes = {0.0};
  late.fe = {0.0};
  late.f = {0.5};
  CHECK_THROWS_AS(pst::anandan_violation(chain, late), pst::invalid_input_error);
}

TEST_CASE("minimal first coupling by length parity") {
  CHECK(pst::theorem_bound(pst::Parity::even, 2.0) ==
        doctest::Approx(std::sqrt(3.0) * std::numbers::pi / 4.0).epsilon(1e-14));
  CHECK(pst::theorem_bound(pst::Parity::odd, 2.0) ==
        doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(pst::theorem_bound(pst::Parity::even, 0.0), pst::invalid_input_error);
}

TEST_CASE("square-root profiles of length 4 and 5 attain the parity bound") {
  for (int n : {4, 5}) {
    ChainSpec chain = pst::krawtchouk(n, 1.0);
    pst::PstVerdict v = pst::pst_check(chain);
    REQUIRE(v.t0.has_value());
    const pst::Parity parity = n % 2 == 0 ? pst::Parity::even : pst::Parity::odd;
    CHECK(chain.couplings[0] ==
          doctest::Approx(pst::theorem_bound(parity, *v.t0)).epsilon(1e-12));
  }
  for (int n : {6, 7}) {
    ChainSpec chain = pst::krawtchouk(n, 1.0);
    pst::PstVerdict v = pst::pst_check(chain);
    const pst::Parity parity = n % 2 == 0 ? pst::Parity::even : pst::Parity::odd;
    CHECK(chain.couplings[0] > pst::theorem_bound(parity, *v.t0) + 0.1);
  }
}

TEST_CASE("random transfer chains respect the parity bound") {
  std::mt19937_64 engine(19);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4 + static_cast<int>(engine() % 9);
    auto values = testutil::random_odd_gap_spectrum(engine, n, 1.0);
    ChainSpec chain = pst::chain_from_spectrum(pst::Spectrum(values));
    pst::PstVerdict v = pst::pst_check(chain);
    REQUIRE(v.t0.has_value());
    const pst::Parity parity = n % 2 == 0 ? pst::Parity::even : pst::Parity::odd;
    CHECK(chain.couplings[0] >= pst::theorem_bound(parity, *v.t0) * (1 - 1e-12));
  }
}

TEST_CASE("trade-off sweep approaches the asymptotic product from above") {
  auto points = pst::tradeoff_sweep(51, 5, {11, 21, 41, 81});
  REQUIRE(points.size() == 4);
  const double expect[] = {1.0450, 1.0163, 1.0044, 1.0011};
  for (int i = 0; i < 4; ++i) {
    REQUIRE(points[i].ok);
    CHECK(points[i].j1_t0 / std::numbers::pi == doctest::Approx(expect[i]).epsilon(2e-3));
    CHECK(points[i].j1_t0 == points[i].j1 * points[i].t0);
    if (i > 0) CHECK(points[i].j1_t0 < points[i - 1].j1_t0);
  }
  CHECK(points.back().j1_t0 < 1.1 * std::numbers::pi);
}

TEST_CASE("trade-off sweep records snapping and failures without aborting") {
  auto points = pst::tradeoff_sweep(8, 4, {150.0, 3.0, 13.0});
  REQUIRE(points.size() == 3);
  CHECK(points[0].ok);
  CHECK(points[0].gamma == doctest::Approx(149.0));
  CHECK_FALSE(points[0].note.empty());
  CHECK_FALSE(points[1].ok);
  CHECK_FALSE(points[1].note.empty());
  CHECK(points[2].ok);
  CHECK(points[2].note.empty());
}

TEST_CASE("trade-off sweep is thread invariant") {
  auto serial = pst::tradeoff_sweep(21, 3, {5, 9, 17, 33}, 1);
  auto parallel = pst::tradeoff_sweep(21, 3, {5, 9, 17, 33}, 0);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].t0 == parallel[i].t0);
    CHECK(serial[i].j1 == parallel[i].j1);
    CHECK(serial[i].j1_t0 == parallel[i].j1_t0);
  }
}
