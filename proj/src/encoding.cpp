#include "pst/encoding.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pst {

namespace {

Eigen::MatrixXd dense_hamiltonian(const ChainSpec& chain) {
  const int n = chain.n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) h(i, i) = chain.diagonal[i];
  for (int i = 0; i < n - 1; ++i) {
    h(i, i + 1) = chain.couplings[i];
    h(i + 1, i) = chain.couplings[i];
  }
  return h;
}

void require_transfer_chain(const ChainSpec& chain) {
  PstVerdict verdict = pst_check(chain);
  if (!verdict.t0)
    throw invalid_input_error("encoding needs a mirror-symmetric transfer chain");
}

// Deterministic sign: flip so the largest-magnitude component is positive.
void fix_sign(Eigen::VectorXd& v) {
  int arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0) v = -v;
}

EncodingPair assemble_pair(const ChainSpec& chain, const Eigen::VectorXd& region_vec,
                           double objective, int m) {
  const int n = chain.n;
  EncodingPair pair;
  pair.encoder.assign(n, 0.0);
  pair.decoder.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    pair.encoder[i] = region_vec[i];
    pair.decoder[n - 1 - i] = region_vec[i];  // mirror image
  }
  pair.objective = objective;
  pair.region_size = m;
  return pair;
}

}  // namespace

ComplexMatrix windowed_operator(const ChainSpec& chain, const ReceiverWindow& window,
                                double t0, const SiteRange& region_a,
                                const SiteRange& region_b) {
  const int n = chain.n;
  if (region_a.first < 1 || region_a.last > n || region_a.first > region_a.last ||
      region_b.first < 1 || region_b.last > n || region_b.first > region_b.last)
    throw invalid_input_error("regions must be valid site ranges");
  if (region_a.size() != region_b.size())
    throw invalid_input_error("regions must have equal size");
  const bool equal = region_a.first == region_b.first && region_a.last == region_b.last;
  if (!equal) {
    if (region_a.first != 1 || region_b.last != n)
      throw invalid_input_error("regions must be a site prefix and its mirrored suffix");
    if (region_a.last >= region_b.first) throw invalid_input_error("regions overlap");
  }
  Propagator prop(chain);
  const int m = region_a.size();
  ComplexMatrix out;
  out.rows = m;
  out.cols = m;
  out.data.assign(static_cast<std::size_t>(m) * m, cplx(0, 0));
  for (int j = 0; j < m; ++j) {
    const int source = region_a.first + j;
    for (int i = 0; i < m; ++i) {
      const int target = region_b.first + i;
      if (window.kind == ReceiverWindow::Kind::delta) {
        out.at(i, j) = prop.amplitude(t0, source, target);
      } else {
        auto re = [&](double tau) {
          return window.density_at(tau) * std::real(prop.amplitude(t0 + tau, source, target));
        };
        auto im = [&](double tau) {
          return window.density_at(tau) * std::imag(prop.amplitude(t0 + tau, source, target));
        };
        const double lo = window.support_lo(), hi = window.support_hi();
        out.at(i, j) = cplx(adaptive_simpson(re, lo, hi, tol::quadrature_abs),
                            adaptive_simpson(im, lo, hi, tol::quadrature_abs));
      }
    }
  }
  return out;
}

EncodingPair optimal_timing_encoding(const ChainSpec& chain, int m) {
  const int n = chain.n;
  if (m < 1 || m % 2 == 0) throw invalid_input_error("region size must be a positive odd number");
  if (2 * m >= n) throw invalid_input_error("regions overlap");
  require_transfer_chain(chain);
  Eigen::MatrixXd h = dense_hamiltonian(chain);
  Eigen::MatrixXd h2 = (h * h).topLeftCorner(m, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h2);
  if (solver.info() != Eigen::Success)
    throw numerical_error("restricted quadratic form eigensolve failed");
  Eigen::VectorXd v = solver.eigenvectors().col(0);
  fix_sign(v);
  return assemble_pair(chain, v, solver.eigenvalues()[0], m);
}

EncodingPair eigenvector_orthogonal_encoding(const ChainSpec& chain, int m) {
  const int n = chain.n;
  if (m < 1 || m % 2 == 0) throw invalid_input_error("region size must be a positive odd number");
  if (m >= n) throw invalid_input_error("region must be smaller than the chain");
  require_transfer_chain(chain);
  Eigensystem es = eigendecompose(chain);
  const int pairs = (m - 1) / 2;
  Eigen::VectorXd v;
  if (pairs == 0) {
    v = Eigen::VectorXd::Zero(m);
    v[0] = 1.0;
  } else {
    // constraint rows: region restrictions of the 2*pairs largest-|lambda|
    // eigenvectors
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(es.values[a]) > std::abs(es.values[b]);
    });
    const int rows = 2 * pairs;
    Eigen::MatrixXd constraints(rows, m);
    for (int rix = 0; rix < rows; ++rix)
      for (int i = 0; i < m; ++i) constraints(rix, i) = es.vec(i, order[rix]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constraints, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-12 * sv[0];
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > cutoff) ++rank;
    if (rank < rows) throw invalid_input_error("degenerate region");
    v = svd.matrixV().col(m - 1);  // the one-dimensional nullspace
    if ((constraints * v).cwiseAbs().maxCoeff() > 1e-10)
      throw numerical_error("orthogonality constraints not satisfied");
  }
  fix_sign(v);
  Eigen::MatrixXd h = dense_hamiltonian(chain);
  Eigen::MatrixXd h2 = (h * h).topLeftCorner(m, m);
  const double objective = v.dot(h2 * v);
  return assemble_pair(chain, v, objective, m);
}

EvolutionTrace encoded_trace(const ChainSpec& chain, const EncodingPair& pair, double t_max,
                             int steps, int threads) {
  if (steps < 2) throw invalid_input_error("trace needs at least two grid points");
  if (!(t_max > 0)) throw invalid_input_error("trace span must be positive");
  const int n = chain.n;
  if (static_cast<int>(pair.encoder.size()) != n || static_cast<int>(pair.decoder.size()) != n)
    throw invalid_input_error("encoding vectors must match the chain length");
  Eigensystem es = eigendecompose(chain);
  // <dec|e^{-iHt}|enc> = sum_k (dec . v_k)(enc . v_k) e^{-i lambda_k t}
  std::vector<double> enc_proj(n, 0.0), dec_proj(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double pe = 0.0, pd = 0.0;
    for (int i = 0; i < n; ++i) {
      pe += pair.encoder[i] * es.vec(i, k);
      pd += pair.decoder[i] * es.vec(i, k);
    }
    enc_proj[k] = pe;
    dec_proj[k] = pd;
  }
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
    cplx acc = 0;
    for (int k = 0; k < n; ++k)
      acc += dec_proj[k] * enc_proj[k] * std::exp(cplx(0, -es.values[k] * t));
    tr.times[i] = t;
    tr.amplitudes[i] = acc;
    tr.fe[i] = std::min(1.0, std::max(0.0, std::norm(acc)));
    tr.f[i] = qubit_fidelity(tr.fe[i]);
  }
  return tr;
}

}  // namespace pst
