// Copyright 2026 The encwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Reference computations used only by the tests. None of these share code
// paths with the library routines they check.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

namespace encwalk::oracle {

/// Sum over all n! permutations.
inline std::complex<double> naive_permanent(const Eigen::MatrixXcd& a) {
  const auto n = static_cast<int>(a.rows());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::complex<double> total(0.0, 0.0);
  do {
    std::complex<double> prod(1.0, 0.0);
    for (int i = 0; i < n; ++i) prod *= a(i, perm[static_cast<std::size_t>(i)]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Eigen::MatrixXcd random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = {n(rng), n(rng)};
  return m;
}

/// Pearson chi-square goodness of fit. Outcomes with expected count below
/// 5 are pooled into one bin. Returns true when the statistic stays below
/// the (1 - alpha) quantile.
inline bool chi_square_passes(const std::vector<double>& probabilities, const std::vector<std::uint64_t>& counts,
                              double alpha, double* statistic = nullptr) {
  std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  double stat = 0.0;
  int bins = 0;
  double pooled_exp = 0.0;
  double pooled_obs = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double e = probabilities[i] * static_cast<double>(total);
    const auto o = static_cast<double>(counts[i]);
    if (e < 5.0) {
      pooled_exp += e;
      pooled_obs += o;
      continue;
    }
    stat += (o - e) * (o - e) / e;
    ++bins;
  }
  if (pooled_exp >= 5.0) {
    stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++bins;
  } else if (pooled_obs > 0.0 && pooled_exp < 1e-9) {
    return false;  // mass where there should be none
  }
  if (statistic) *statistic = stat;
  if (bins < 2) return true;
  boost::math::chi_squared dist(bins - 1);
  return stat < boost::math::quantile(boost::math::complement(dist, alpha));
}

/// psi <- (S C) psi, t times, starting from a single walker in `start`.
inline Eigen::VectorXcd propagate_walker(const Eigen::MatrixXcd& step, const Eigen::MatrixXcd& coin,
                                         Eigen::Index start, std::size_t t) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(step.rows());
  psi(start) = 1.0;
  for (std::size_t i = 0; i < t; ++i) psi = step * (coin * psi);
  return psi;
}

}  // namespace encwalk::oracle
