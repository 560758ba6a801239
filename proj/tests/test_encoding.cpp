#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "helpers.hpp"
#include "pst/chain.hpp"
#include "pst/dynamics.hpp"
#include "pst/encoding.hpp"
#include "pst/synthesis.hpp"

using pst::ChainSpec;
using pst::cplx;
using pst::SiteRange;
using testutil::dense_h;

namespace {

Eigen::MatrixXcd to_eigen(const pst::ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out(i, j) = m.at(i, j);
  return out;
}

// Encoded envelope from a dense eigensolve, for width measurements.
std::function<double(double)> encoded_fe(const ChainSpec& chain, const pst::EncodingPair& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_h(chain));
  Eigen::VectorXd enc = Eigen::Map<const Eigen::VectorXd>(p.encoder.data(), chain.n);
  Eigen::VectorXd dec = Eigen::Map<const Eigen::VectorXd>(p.decoder.data(), chain.n);
  Eigen::VectorXd pe = es.eigenvectors().transpose() * enc;
  Eigen::VectorXd pd = es.eigenvectors().transpose() * dec;
  Eigen::VectorXd lambda = es.eigenvalues();
  return [pe, pd, lambda](double t) {
    cplx acc = 0;
    for (int k = 0; k < lambda.size(); ++k)
      acc += pd[k] * pe[k] * std::exp(cplx(0, -lambda[k] * t));
    return std::norm(acc);
  };
}

}  // namespace

TEST_CASE("single-site encoding is the bare end site") {
  ChainSpec chain = pst::krawtchouk(9, 1.0);
  pst::EncodingPair pair = pst::optimal_timing_encoding(chain, 1);
  CHECK(pair.objective ==
        doctest::Approx(chain.couplings[0] * chain.couplings[0]).epsilon(1e-12));
  CHECK(pair.encoder[0] == doctest::Approx(1.0));
  CHECK(pair.decoder[8] == doctest::Approx(1.0));
  for (int i = 1; i < 9; ++i) {
    CHECK(pair.encoder[i] == 0.0);
    CHECK(pair.decoder[8 - i] == 0.0);
  }
}

TEST_CASE("objective equals the smallest restricted quadratic-form eigenvalue") {
  ChainSpec chain = pst::krawtchouk(15, 1.0);
  for (int m : {3, 5, 7}) {
    pst::EncodingPair pair = pst::optimal_timing_encoding(chain, m);
    Eigen::MatrixXd h = dense_h(chain);
    Eigen::MatrixXd w = (h * h).topLeftCorner(m, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w);
    CHECK(pair.objective == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-12));
    // the encoder is the matching unit eigenvector
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(pair.encoder.data(), m);
    CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    CHECK((w * v - pair.objective * v).norm() < 1e-10);
  }
}

TEST_CASE("objective decreases strictly with the region size") {
  ChainSpec chain = pst::krawtchouk(15, 1.0);
  double prev = 1e300;
  for (int m : {1, 3, 5, 7}) {
    const double obj = pst::optimal_timing_encoding(chain, m).objective;
    CHECK(obj < prev);
    prev = obj;
  }
}

TEST_CASE("optimal encoding agrees with the windowed-operator singular route") {
  // two independent routes: restricted H^2 eigensolve vs the SVD of
  // P_B H^2 e^{-iHt0} P_A assembled from propagator amplitudes
  ChainSpec chain = pst::krawtchouk(11, 1.0);
  const double t0 = std::numbers::pi / 2;
  Eigen::MatrixXd h = dense_h(chain);
  for (int m : {3, 5}) {
    pst::EncodingPair pair = pst::optimal_timing_encoding(chain, m);
    pst::ComplexMatrix prop_block = pst::windowed_operator(
        chain, pst::ReceiverWindow::delta(), t0, SiteRange{1, m}, SiteRange{11 - m + 1, 11});
    // left-multiply the propagator block by H^2 restricted to region B
    Eigen::MatrixXd h2 = h * h;
    Eigen::MatrixXcd weighted = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXcd block = to_eigen(prop_block);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
          weighted(i, j) += h2(11 - m + i, 11 - m + k) * block(k, j);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(weighted, Eigen::ComputeFullV);
    const double sigma_min = svd.singularValues()[m - 1];
    CHECK(sigma_min == doctest::Approx(pair.objective).epsilon(1e-9));
    Eigen::VectorXcd right = svd.matrixV().col(m - 1);
    Eigen::VectorXd enc = Eigen::Map<const Eigen::VectorXd>(pair.encoder.data(), m);
    CHECK(std::abs(std::abs(right.dot(enc.cast<cplx>())) - 1.0) < 1e-9);
  }
}

TEST_CASE("windowed operator entries are propagator amplitudes for a point window") {
  ChainSpec chain = pst::krawtchouk(6, 1.0);
  const double t0 = 1.1;
  pst::ComplexMatrix block = pst::windowed_operator(chain, pst::ReceiverWindow::delta(), t0,
                                                    SiteRange{1, 2}, SiteRange{5, 6});
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i)
      CHECK(std::abs(block.at(i, j) - pst::transfer_amplitude(chain, t0, 1 + j, 5 + i)) <
            1e-13);
  // identical regions are allowed
  pst::ComplexMatrix same = pst::windowed_operator(chain, pst::ReceiverWindow::delta(), t0,
                                                   SiteRange{1, 3}, SiteRange{1, 3});
  CHECK(std::abs(same.at(1, 0) - pst::transfer_amplitude(chain, t0, 1, 2)) < 1e-13);
}

TEST_CASE("windowed operator averages amplitudes over a box window") {
  ChainSpec chain = pst::krawtchouk(5, 1.0);
  const double t0 = std::numbers::pi / 2, w = 0.5;
  pst::ComplexMatrix block = pst::windowed_operator(chain, pst::ReceiverWindow::box(w), t0,
                                                    SiteRange{1, 1}, SiteRange{5, 5});
  pst::Propagator prop(chain);
  cplx acc = 0;
  const int panels = 4000;
  for (int i = 0; i <= panels; ++i) {
    const double tau = -w / 2 + w * i / panels;
    const double coef = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    acc += coef * prop.amplitude(t0 + tau, 1, 5);
  }
  acc *= (w / panels) / 3.0 / w;  // Simpson sum times the 1/w density
  CHECK(std::abs(block.at(0, 0) - acc) < 1e-7);
}

TEST_CASE("windowed operator validates its regions") {
  ChainSpec chain = pst::krawtchouk(6, 1.0);
  pst::ReceiverWindow d = pst::ReceiverWindow::delta();
  CHECK_THROWS_AS(pst::windowed_operator(chain, d, 1.0, SiteRange{1, 4}, SiteRange{3, 6}),
                  pst::invalid_input_error);
  CHECK_THROWS_AS(pst::windowed_operator(chain, d, 1.0, SiteRange{1, 2}, SiteRange{4, 6}),
                  pst::invalid_input_error);
  CHECK_THROWS_AS(pst::windowed_operator(chain, d, 1.0, SiteRange{2, 3}, SiteRange{5, 6}),
                  pst::invalid_input_error);
  CHECK_THROWS_AS(pst::windowed_operator(chain, d, 1.0, SiteRange{0, 1}, SiteRange{5, 6}),
                  pst::invalid_input_error);
}

TEST_CASE("orthogonal encoding annihilates the extremal eigenvector overlaps") {
  ChainSpec chain = pst::krawtchouk(15, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense_h(chain));
  for (int m : {3, 5, 7}) {
    pst::EncodingPair pair = pst::eigenvector_orthogonal_encoding(chain, m);
    Eigen::VectorXd enc = Eigen::Map<const Eigen::VectorXd>(pair.encoder.data(), 15);
    CHECK(std::abs(enc.norm() - 1.0) < 1e-12);
    // global overlaps with the (m-1)/2 outermost eigenvector pairs vanish
    for (int p = 0; p < (m - 1) / 2; ++p) {
      CHECK(std::abs(es.eigenvectors().col(p).dot(enc)) < 1e-10);
      CHECK(std::abs(es.eigenvectors().col(14 - p).dot(enc)) < 1e-10);
    }
    // suboptimal by construction, never better than the optimum
    CHECK(pair.objective >= pst::optimal_timing_encoding(chain, m).objective - 1e-12);
  }
}

TEST_CASE("orthogonal encoding with a single site is the bare end site") {
  ChainSpec chain = pst::krawtchouk(9, 1.0);
  pst::EncodingPair pair = pst::eigenvector_orthogonal_encoding(chain, 1);
  CHECK(pair.encoder[0] == doctest::Approx(1.0));
  CHECK(pair.objective ==
        doctest::Approx(chain.couplings[0] * chain.couplings[0]).epsilon(1e-12));
}

TEST_CASE("encoding construction validates inputs") {
  ChainSpec chain = pst::krawtchouk(9, 1.0);
  CHECK_THROWS_AS(pst::optimal_timing_encoding(chain, 2), pst::invalid_input_error);
  CHECK_THROWS_AS(pst::optimal_timing_encoding(chain, 5), pst::invalid_input_error);
  CHECK_THROWS_AS(pst::eigenvector_orthogonal_encoding(chain, 9), pst::invalid_input_error);
  CHECK_THROWS_AS(pst::optimal_timing_encoding(ChainSpec({1.0, 2.0, 1.1, 1.0, 1.0, 1.0}), 1),
                  pst::invalid_input_error);
}

TEST_CASE("encoded trace with the bare end site equals the plain trace") {
  ChainSpec chain = pst::krawtchouk(9, 1.0);
  pst::EncodingPair pair = pst::optimal_timing_encoding(chain, 1);
  pst::EvolutionTrace enc = pst::encoded_trace(chain, pair, 3.0, 301);
  pst::EvolutionTrace plain = pst::trace(chain, 3.0, 301);
  for (std::size_t i = 0; i < enc.times.size(); i += 25)
    CHECK(enc.fe[i] == doctest::Approx(plain.fe[i]).epsilon(1e-12));
}

TEST_CASE("encoded transfer still arrives perfectly at the transfer time") {
  ChainSpec chain = pst::krawtchouk(13, 1.0);
  const double t0 = std::numbers::pi / 2;
  for (int m : {3, 5}) {
    pst::EncodingPair pair = pst::optimal_timing_encoding(chain, m);
    pst::EvolutionTrace tr = pst::encoded_trace(chain, pair, t0, 2);
    CHECK(tr.fe.back() == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("encoding widens the arrival plateau") {
  ChainSpec chain = pst::krawtchouk(25, 1.0);
  const double t0 = std::numbers::pi / 2;
  const double w1 =
      pst::arrival_width(encoded_fe(chain, pst::optimal_timing_encoding(chain, 1)), t0, 0.1);
  const double w3 =
      pst::arrival_width(encoded_fe(chain, pst::optimal_timing_encoding(chain, 3)), t0, 0.1);
  CHECK(w3 > w1 * 1.05);
}

TEST_CASE("encoded trace is thread invariant") {
  ChainSpec chain = pst::krawtchouk(9, 1.0);
  pst::EncodingPair pair = pst::optimal_timing_encoding(chain, 3);
  pst::EvolutionTrace serial = pst::encoded_trace(chain, pair, 4.0, 501, 1);
  pst::EvolutionTrace parallel = pst::encoded_trace(chain, pair, 4.0, 501, 0);
  for (std::size_t i = 0; i < serial.times.size(); ++i) {
    CHECK(serial.fe[i] == parallel.fe[i]);
    CHECK(serial.amplitudes[i] == parallel.amplitudes[i]);
  }
}
