// Shared test utilities. Oracles here are deliberately independent of the
// library's tridiagonal code paths: dense matrices, full dense
// eigensolves, and spectra built constructively from known gap structure.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pst/chain.hpp"

namespace testutil {

inline Eigen::MatrixXd dense_h(const pst::ChainSpec& chain) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(chain.n, chain.n);
  for (int i = 0; i < chain.n; ++i) h(i, i) = chain.diagonal[i];
  for (int i = 0; i + 1 < chain.n; ++i) h(i, i + 1) = h(i + 1, i) = chain.couplings[i];
  return h;
}

// Symmetric spectrum whose consecutive gaps are odd multiples of g by
// construction. At least one multiplier is 1 so the base gap is exactly g.
inline std::vector<double> random_odd_gap_spectrum(std::mt19937_64& engine, int n, double g) {
  std::uniform_int_distribution<int> pick(0, 2);
  const int half = n / 2;
  std::vector<int> mult(half, 1);
  for (int i = 0; i < half; ++i) mult[i] = 2 * pick(engine) + 1;  // 1, 3, or 5
  mult[static_cast<std::size_t>(pick(engine)) % mult.size()] = 1;
  std::vector<double> pos(half);
  double x = (n % 2 == 0) ? g * mult[0] / 2.0 : g * mult[0];
  pos[0] = x;
  for (int i = 1; i < half; ++i) {
    x += g * mult[i];
    pos[i] = x;
  }
  std::vector<double> values;
  for (int i = half - 1; i >= 0; --i) values.push_back(-pos[i]);
  if (n % 2 == 1) values.push_back(0.0);
  for (int i = 0; i < half; ++i) values.push_back(pos[i]);
  return values;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr merged
};

inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return result;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
  const int status = ::pclose(pipe);
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return result;
}

}  // namespace testutil
