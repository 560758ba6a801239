#include "pst/synthesis.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pst {

namespace {

std::vector<double> log_inverse_derivative_weights(const std::vector<double>& values) {
  const std::size_t n = values.size();
  const double span = values.back() - values.front();
  double min_gap = span;
  for (std::size_t i = 0; i + 1 < n; ++i) min_gap = std::min(min_gap, values[i + 1] - values[i]);
  if (min_gap < 1e-12 * span) throw invalid_input_error("ill-conditioned spectrum");
  // log a_i = -sum_{m != i} log |lambda_i - lambda_m|, normalized afterwards
  std::vector<double> logs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m)
      if (m != i) acc -= std::log(std::abs(values[i] - values[m]));
    logs[i] = acc;
  }
  const double peak = *std::max_element(logs.begin(), logs.end());
  std::vector<double> w(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(logs[i] - peak);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

struct JacobiMatrix {
  std::vector<double> alpha;  // diagonal
  std::vector<double> beta;   // off-diagonal
};

// Lanczos on diag(values) from start vector sqrt(weights), with two-pass
// full reorthogonalization at every step.
JacobiMatrix lanczos_jacobi(const std::vector<double>& values, const std::vector<double>& weights) {
  const int n = static_cast<int>(values.size());
  const double scale =
      std::max(std::abs(values.front()), std::abs(values.back()));
  Eigen::VectorXd lam = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
  Eigen::VectorXd q(n);
  for (int i = 0; i < n; ++i) {
    if (weights[i] < 0) throw invalid_input_error("weights must be nonnegative");
    q[i] = std::sqrt(weights[i]);
  }
  q.normalize();
  Eigen::MatrixXd basis(n, n);
  basis.col(0) = q;
  JacobiMatrix jm;
  jm.alpha.assign(n, 0.0);
  jm.beta.assign(n - 1, 0.0);
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd v = lam.cwiseProduct(basis.col(j));
    jm.alpha[j] = basis.col(j).dot(v);
    v -= jm.alpha[j] * basis.col(j);
    if (j > 0) v -= jm.beta[j - 1] * basis.col(j - 1);
    const auto active = basis.leftCols(j + 1);
    for (int pass = 0; pass < 2; ++pass) v -= active * (active.transpose() * v);
    if (j < n - 1) {
      const double b = v.norm();
      if (b <= scale * 1e-13)
        throw numerical_error("inverse solve lost orthogonality at step " + std::to_string(j + 1));
      jm.beta[j] = b;
      basis.col(j + 1) = v / b;
    }
  }
  const double ortho =
      (basis.transpose() * basis - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (ortho > 1e-10)
    throw numerical_error("inverse solve basis deviates from orthonormality by " +
                          std::to_string(ortho));
  return jm;
}

int smallest_odd_geq(double x) {
  int v = static_cast<int>(std::ceil(x - 1e-12));
  if (v < 1) v = 1;
  if (v % 2 == 0) ++v;
  return v;
}

}  // namespace

ChainSpec krawtchouk(int n, double j) {
  if (n < 2) throw invalid_input_error("length must be at least 2");
  if (!(j > 0)) throw invalid_input_error("coupling scale must be positive");
  std::vector<double> c(n - 1);
  for (int k = 1; k < n; ++k)
    c[k - 1] = j * std::sqrt(static_cast<double>(k) * (n - k));
  std::ostringstream label;
  label << "krawtchouk n=" << n << " j=" << j;
  return ChainSpec(std::move(c), {}, label.str());
}

EndWeights end_weights_from_spectrum(const Spectrum& spectrum) {
  EndWeights out;
  out.weights = log_inverse_derivative_weights(spectrum.values);
  return out;
}

ChainSpec chain_from_values_weights(const std::vector<double>& values,
                                    const std::vector<double>& weights,
                                    const std::string& label) {
  if (values.size() < 2) throw invalid_input_error("need at least two eigenvalues");
  if (values.size() != weights.size())
    throw invalid_input_error("values and weights must have equal length");
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    if (!(values[i] < values[i + 1]))
      throw invalid_input_error("eigenvalues must be strictly increasing");
  JacobiMatrix jm = lanczos_jacobi(values, weights);
  return ChainSpec(std::move(jm.beta), std::move(jm.alpha), label);
}

ChainSpec chain_from_spectrum(const Spectrum& spectrum) {
  if (!spectrum.is_symmetric())
    throw invalid_input_error("spectrum must be symmetric about zero");
  const std::vector<double> w = log_inverse_derivative_weights(spectrum.values);
  JacobiMatrix jm = lanczos_jacobi(spectrum.values, w);
  const int n = static_cast<int>(spectrum.values.size());
  double maxj = 0.0;
  for (double b : jm.beta) maxj = std::max(maxj, b);
  for (double a : jm.alpha)
    if (std::abs(a) > 1e-9 * maxj)
      throw numerical_error("inverse solve produced a nonzero diagonal for a symmetric spectrum");
  for (int k = 0; k < n - 1; ++k)
    if (std::abs(jm.beta[k] - jm.beta[n - 2 - k]) > tol::mirror_rel * maxj)
      throw numerical_error("inverse solve broke mirror symmetry beyond tolerance");
  // project onto the exactly mirror-symmetric, field-free form
  std::vector<double> c(n - 1);
  for (int k = 0; k < n - 1; ++k) c[k] = 0.5 * (jm.beta[k] + jm.beta[n - 2 - k]);
  return ChainSpec(std::move(c), {}, "");
}

TRexParams make_trex_params(int n, int r, double gamma, double base_gap) {
  if (n < 2) throw invalid_input_error("length must be at least 2");
  if (r < 2 || r > n) throw invalid_input_error("central count must satisfy 2 <= r <= n");
  if ((n - r) % 2 != 0)
    throw invalid_input_error("parity error: n and r must have the same parity");
  if (!(base_gap > 0)) throw invalid_input_error("base gap must be positive");
  TRexParams p;
  p.n = n;
  p.r = r;
  p.base_gap = base_gap;
  p.requested_gamma = gamma;
  p.gamma = gamma;
  if (r < n) {
    if (!(gamma > r))
      throw invalid_input_error("clear-out scale must exceed the central count");
    if (r % 2 == 0) {
      // admissible gammas put the first cleared pair exactly at gamma*g/2:
      // (gamma - r + 1)/2 must be odd, i.e. gamma = r+1 (mod 4)
      const int residue = (r + 1) % 4;
      double base = std::floor((gamma - residue) / 4.0) * 4.0 + residue;
      double lo = base, hi = base + 4.0;
      double snapped = (gamma - lo < hi - gamma) ? lo : hi;  // tie rounds up
      while (snapped <= r) snapped += 4.0;
      if (snapped != gamma) {
        p.gamma = snapped;
        p.snapped = true;
        std::ostringstream note;
        note << "clear-out scale snapped from " << gamma << " to " << snapped
             << " to place the first cleared pair at gamma/2 spacing";
        p.snap_note = note.str();
      }
    }
  }
  return p;
}

Spectrum trex_spectrum(const TRexParams& params) {
  const int n = params.n, r = params.r;
  const double g = params.base_gap;
  std::vector<double> positive;
  double central_max = 0.0;
  bool has_zero = false;
  if (r % 2 == 0) {
    for (int k = 0; k < r / 2; ++k) positive.push_back(g * (k + 0.5));
    central_max = g * (r - 1) * 0.5;
  } else {
    has_zero = true;
    for (int k = 1; k <= (r - 1) / 2; ++k) positive.push_back(g * k);
    central_max = g * (r - 1) / 2;
  }
  if (r < n) {
    const double gamma = params.gamma;
    const int spacing = smallest_odd_geq(gamma);
    int m = 1;
    while (central_max + m * g < gamma * g / 2.0 - 1e-9 * g) m += 2;
    double c = central_max + m * g;
    for (int jdx = 0; jdx < (n - r) / 2; ++jdx) positive.push_back(c + jdx * spacing * g);
  }
  std::vector<double> values;
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) values.push_back(-*it);
  if (has_zero) values.push_back(0.0);
  values.insert(values.end(), positive.begin(), positive.end());
  std::sort(values.begin(), values.end());
  Spectrum s(std::move(values));
  auto detected = detect_base_gap(s.values);
  if (!detected || std::abs(*detected - g) > 1e-12 * g)
    throw numerical_error("constructed spectrum failed the odd-gap certification");
  s.base_gap = g;
  s.transfer_time = std::numbers::pi / g;
  return s;
}

ChainSpec trex_chain(const TRexParams& params, bool rescale_to_unit_max) {
  Spectrum s = trex_spectrum(params);
  ChainSpec chain = chain_from_spectrum(s);
  std::ostringstream label;
  label << "trex n=" << params.n << " r=" << params.r << " gamma=" << params.gamma;
  chain.label = label.str();
  if (rescale_to_unit_max) chain = rescaled_to_unit_max(chain);
  return chain;
}

Spectrum special_r2_spectrum(int n, int gamma) {
  if (n < 2 || n % 2 != 0) throw invalid_input_error("length must be even and at least 2");
  if (gamma < 1 || gamma % 2 != 1) throw invalid_input_error("gamma must be a positive odd integer");
  std::vector<double> values;
  for (int k = (n - 2) / 2; k >= 0; --k) values.push_back(-(1.0 + 2.0 * k * gamma));
  for (int k = 0; k <= (n - 2) / 2; ++k) values.push_back(1.0 + 2.0 * k * gamma);
  Spectrum s(std::move(values));
  auto detected = detect_base_gap(s.values);
  if (!detected || std::abs(*detected - 2.0) > 1e-12)
    throw numerical_error("constructed spectrum failed the odd-gap certification");
  s.base_gap = 2.0;
  s.transfer_time = std::numbers::pi / 2.0;
  return s;
}

ChainSpec trex_approximation(const TRexParams& params) {
  const int n = params.n, r = params.r;
  const double g = params.base_gap, gamma = params.gamma;
  if (r < 4) throw invalid_input_error("approximation needs at least four central eigenvalues");
  if (r % 2 != 0)
    throw invalid_input_error("approximation is defined for even central counts only");
  if (r >= n) throw invalid_input_error("approximation needs a nonempty central block");
  const int block = n - r;
  if (block % 2 != 0)
    throw invalid_input_error("approximation undefined for odd central block");

  ChainSpec arm_source = krawtchouk(r, g / 2.0);
  const int arm_len = (r - 2) / 2;
  std::vector<double> arm(arm_source.couplings.begin(), arm_source.couplings.begin() + arm_len);

  ChainSpec centre = krawtchouk(block, gamma * g / 2.0);
  // |<1|Hc^{-1}|block>| for the zero-diagonal block: alternating coupling
  // ratio prod(even-index b)/prod(odd-index b), accumulated pairwise
  double inv_corner = 1.0;
  for (int k = 1; k <= block - 1; ++k) {
    const double b = centre.couplings[k - 1];
    inv_corner = (k % 2 == 0) ? inv_corner * b : inv_corner / b;
  }
  inv_corner = std::abs(inv_corner);
  const double k_sq = r * g * g / 4.0 / inv_corner;
  const double connector = std::sqrt(k_sq);

  std::vector<double> c;
  c.insert(c.end(), arm.begin(), arm.end());
  c.push_back(connector);
  c.insert(c.end(), centre.couplings.begin(), centre.couplings.end());
  c.push_back(connector);
  c.insert(c.end(), arm.rbegin(), arm.rend());
  std::ostringstream label;
  label << "trex-approx n=" << n << " r=" << r << " gamma=" << gamma;
  return ChainSpec(std::move(c), {}, label.str());
}

PruneResult prune_extremal_pair(const ChainSpec& chain) {
  if (chain.n < 4) throw invalid_input_error("pruning needs length at least 4");
  PstVerdict verdict = pst_check(chain);
  if (!verdict.t0)
    throw invalid_input_error("pruning requires a mirror-symmetric transfer chain");
  Eigensystem es = eigendecompose(chain);
  Spectrum full(es.values);
  if (!full.is_symmetric(tol::spectrum_sym * std::max(1.0, full.span())))
    throw invalid_input_error("pruning requires a symmetric spectrum");
  const double j1 = chain.couplings[0];
  const double j2 = chain.couplings[1];
  const double lam_max = full.values.back();
  const double gap_sq = lam_max * lam_max - j1 * j1;
  if (!(gap_sq > 0)) throw numerical_error("degenerate extremal gap in pruning");
  PruneResult out;
  out.predicted_j1_sq = j1 * j1 - j1 * j1 * j2 * j2 / gap_sq;
  std::vector<double> inner(full.values.begin() + 1, full.values.end() - 1);
  out.chain = chain_from_spectrum(Spectrum(std::move(inner)));
  out.chain.label = chain.label.empty() ? "pruned" : chain.label + " [pruned]";
  return out;
}

}  // namespace pst
