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


// Non-interacting photons in linear-optical networks.
//
// Convention: an interferometer U maps creation operators as
//   a_i^dagger -> sum_j U(i, j) a_j^dagger,
// so a single photon entering mode i leaves in mode j with amplitude U(i, j),
// and a network that applies A and then B has matrix A * B.

#pragma once

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "encwalk/errors.hpp"
#include "encwalk/linalg.hpp"

namespace encwalk {

using Rng = std::mt19937_64;

/// Photon counts per mode.
class FockBasisState {
 public:
  FockBasisState() = default;
  explicit FockBasisState(std::vector<int> occupations) : occupations_(std::move(occupations)) {
    for (int n : occupations_) {
      if (n < 0) throw ValidationError("FockBasisState: negative occupation");
    }
  }
  FockBasisState(std::initializer_list<int> occupations)
      : FockBasisState(std::vector<int>(occupations)) {}

  static FockBasisState vacuum(std::size_t modes) { return FockBasisState(std::vector<int>(modes, 0)); }

  std::size_t mode_count() const { return occupations_.size(); }
  int total_photons() const { return std::accumulate(occupations_.begin(), occupations_.end(), 0); }
  int operator[](std::size_t i) const { return occupations_[i]; }
  const std::vector<int>& occupations() const { return occupations_; }

  auto operator<=>(const FockBasisState&) const = default;

  /// "20" style when every count is a single digit, otherwise "10.2.0".
  std::string to_string() const {
    const bool compact = std::all_of(occupations_.begin(), occupations_.end(), [](int n) { return n < 10; });
    std::string s;
    for (std::size_t i = 0; i < occupations_.size(); ++i) {
      if (!compact && i > 0) s += '.';
      s += std::to_string(occupations_[i]);
    }
    return s;
  }

  /// Inverse of to_string; also accepts comma separators.
  static FockBasisState parse(const std::string& text) {
    std::vector<int> occ;
    const bool separated = text.find_first_of(".,") != std::string::npos;
    if (separated) {
      std::string cur;
      for (char ch : text + ",") {
        if (ch == '.' || ch == ',') {
          if (cur.empty()) throw ValidationError("bad occupation string '" + text + "'");
          occ.push_back(std::stoi(cur));
          cur.clear();
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
          cur += ch;
        } else {
          throw ValidationError("bad occupation string '" + text + "'");
        }
      }
    } else {
      for (char ch : text) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
          throw ValidationError("bad occupation string '" + text + "'");
        }
        occ.push_back(ch - '0');
      }
    }
    return FockBasisState(std::move(occ));
  }

 private:
  std::vector<int> occupations_;
};

inline void to_json(nlohmann::json& j, const FockBasisState& s) { j = s.occupations(); }
inline void from_json(const nlohmann::json& j, FockBasisState& s) {
  s = FockBasisState(j.get<std::vector<int>>());
}

/// Permanent by Ryser's formula with Gray-code subset order, O(2^n n).
/// The 0x0 permanent is 1.
inline Complex permanent(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw ValidationError("permanent: matrix is " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()) + ", expected square");
  }
  const auto n = static_cast<int>(a.rows());
  if (n == 0) return Complex(1.0, 0.0);
  if (n > 40) throw ResourceError("permanent: n = " + std::to_string(n) + " exceeds limit 40");

  std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  Complex total(0.0, 0.0);
  std::uint64_t subset = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < count; ++g) {
    const int col = std::countr_zero(g);
    subset ^= std::uint64_t{1} << col;
    const bool added = (subset >> col) & 1U;
    for (int i = 0; i < n; ++i) {
      if (added) {
        row_sums[static_cast<std::size_t>(i)] += a(i, col);
      } else {
        row_sums[static_cast<std::size_t>(i)] -= a(i, col);
      }
    }
    Complex prod = row_sums[0];
    for (int i = 1; i < n; ++i) prod *= row_sums[static_cast<std::size_t>(i)];
    if (std::popcount(subset) % 2 == 1) {
      total -= prod;
    } else {
      total += prod;
    }
  }
  return (n % 2 == 1) ? -total : total;
}

/// m x m unitary acting on mode creation operators.
class Interferometer {
 public:
  /// Validates unitarity to `tol`.
  explicit Interferometer(ComplexMatrix u, double tol = kInputUnitarityTol) : u_(std::move(u)) {
    if (u_.rows() == 0) throw ValidationError("Interferometer: empty matrix");
    if (u_.rows() != u_.cols()) throw ValidationError("Interferometer: matrix is not square");
    const double err = unitarity_error(u_);
    if (!(err <= tol)) {
      throw ValidationError("Interferometer: matrix is not unitary (max |U^dag U - I| = " +
                            std::to_string(err) + ")");
    }
  }

  static Interferometer identity(std::size_t m) {
    return Interferometer(ComplexMatrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
  }

  /// The 50:50 mixer [[1, 1], [1, -1]] / sqrt(2).
  static Interferometer balanced_splitter() {
    ComplexMatrix u(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    u << r, r, r, -r;
    return Interferometer(std::move(u));
  }

  std::size_t mode_count() const { return static_cast<std::size_t>(u_.rows()); }
  const ComplexMatrix& matrix() const { return u_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return u_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  ComplexMatrix u_;
};

/// Haar-random unitary: QR of a complex Gaussian matrix, with the phases of
/// diag(R) folded back into Q.
inline Interferometer haar_unitary(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw ValidationError("haar_unitary: mode count must be at least 1");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  return Interferometer(std::move(q), kUnitarityTol);
}

/// Number of ways to place p photons in m modes, C(m + p - 1, p), saturating
/// at uint64 max.
inline std::uint64_t fock_space_size(std::size_t m, int p) {
  if (m == 0) return p == 0 ? 1 : 0;
  std::uint64_t result = 1;
  for (int i = 1; i <= p; ++i) {
    // result * (m - 1 + i) / i stays integral at every step.
    const std::uint64_t num = static_cast<std::uint64_t>(m) - 1 + static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
    const std::uint64_t r = result / g;
    const std::uint64_t den = static_cast<std::uint64_t>(i) / g;
    const std::uint64_t n2 = num / den;
    if (n2 != 0 && r > std::numeric_limits<std::uint64_t>::max() / n2) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = r * n2;
  }
  return result;
}

inline constexpr std::uint64_t kDefaultStateCap = 2'000'000;

/// All occupation vectors with `photons` photons over `modes` modes, in
/// ascending lexicographic order.
inline std::vector<FockBasisState> enumerate_fock_states(std::size_t modes, int photons,
                                                         std::uint64_t cap = kDefaultStateCap) {
  if (photons < 0) throw ValidationError("enumerate_fock_states: negative photon number");
  const std::uint64_t size = fock_space_size(modes, photons);
  if (size > cap) {
    throw ResourceError("output space of " + std::to_string(size) + " configurations exceeds cap " +
                        std::to_string(cap) + " (raise --max-states)");
  }
  std::vector<FockBasisState> out;
  if (modes == 0) {
    if (photons == 0) out.emplace_back();
    return out;
  }
  out.reserve(static_cast<std::size_t>(size));
  std::vector<int> x(modes, 0);
  x.back() = photons;
  while (true) {
    out.emplace_back(x);
    std::size_t r = modes - 1;
    while (r >= 1 && x[r] == 0) --r;
    if (r == 0) break;
    int rest = -1;
    for (std::size_t k = r; k < modes; ++k) {
      rest += x[k];
      x[k] = 0;
    }
    ++x[r - 1];
    x.back() = rest;
  }
  return out;
}

inline double factorial_product(const FockBasisState& s) {
  double f = 1.0;
  for (int n : s.occupations()) f *= std::tgamma(static_cast<double>(n) + 1.0);
  return f;
}

/// gamma_S = per(U_{S,T}) / sqrt(prod s_i! prod t_j!), where U_{S,T} repeats
/// row i of U s_i times and column j t_j times.
inline Complex output_amplitude(const Interferometer& u, const FockBasisState& input,
                                const FockBasisState& output) {
  const std::size_t m = u.mode_count();
  if (input.mode_count() != m || output.mode_count() != m) {
    throw ValidationError("output_amplitude: state has " + std::to_string(input.mode_count()) + "/" +
                          std::to_string(output.mode_count()) + " modes, interferometer has " +
                          std::to_string(m));
  }
  const int p = input.total_photons();
  if (output.total_photons() != p) {
    throw ValidationError("output_amplitude: photon number not conserved (" + std::to_string(p) +
                          " in, " + std::to_string(output.total_photons()) + " out)");
  }
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  rows.reserve(static_cast<std::size_t>(p));
  cols.reserve(static_cast<std::size_t>(p));
  for (std::size_t i = 0; i < m; ++i) {
    rows.insert(rows.end(), static_cast<std::size_t>(input[i]), i);
    cols.insert(cols.end(), static_cast<std::size_t>(output[i]), i);
  }
  ComplexMatrix sub(p, p);
  for (int r = 0; r < p; ++r) {
    for (int c = 0; c < p; ++c) {
      sub(r, c) = u(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
    }
  }
  return permanent(sub) / std::sqrt(factorial_product(input) * factorial_product(output));
}

/// Distribution over Fock configurations. Amplitudes are present for pure
/// output states and empty for marginals.
struct OutputDistribution {
  std::vector<FockBasisState> states;
  std::vector<double> probabilities;
  std::vector<Complex> amplitudes;

  std::size_t size() const { return states.size(); }

  /// Probability of `s`; zero for configurations not listed.
  double probability(const FockBasisState& s) const {
    const auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || *it != s) return 0.0;
    return probabilities[static_cast<std::size_t>(it - states.begin())];
  }

  double total() const { return std::accumulate(probabilities.begin(), probabilities.end(), 0.0); }
};

/// Total-variation distance, half the L1 distance over the union of supports.
inline double total_variation(const OutputDistribution& a, const OutputDistribution& b) {
  std::map<FockBasisState, double> diff;
  for (std::size_t i = 0; i < a.size(); ++i) diff[a.states[i]] += a.probabilities[i];
  for (std::size_t i = 0; i < b.size(); ++i) diff[b.states[i]] -= b.probabilities[i];
  double sum = 0.0;
  for (const auto& [s, d] : diff) sum += std::abs(d);
  return 0.5 * sum;
}

struct EnumerationOptions {
  std::uint64_t state_cap = kDefaultStateCap;
  unsigned threads = 1;
};

/// Exact output distribution. States are listed in ascending lexicographic
/// order; the result does not depend on the thread count.
inline OutputDistribution output_distribution(const Interferometer& u, const FockBasisState& input,
                                              const EnumerationOptions& opts = {}) {
  if (input.mode_count() != u.mode_count()) {
    throw ValidationError("output_distribution: input has " + std::to_string(input.mode_count()) +
                          " modes, interferometer has " + std::to_string(u.mode_count()));
  }
  OutputDistribution dist;
  dist.states = enumerate_fock_states(u.mode_count(), input.total_photons(), opts.state_cap);
  const std::size_t n = dist.states.size();
  dist.amplitudes.resize(n);
  dist.probabilities.resize(n);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      dist.amplitudes[i] = output_amplitude(u, input, dist.states[i]);
      dist.probabilities[i] = std::norm(dist.amplitudes[i]);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t b = std::min(n, t * chunk);
      const std::size_t e = std::min(n, b + chunk);
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return dist;
}

/// Inverse-CDF sampler over an exact distribution.
class DistributionSampler {
 public:
  explicit DistributionSampler(OutputDistribution dist) : dist_(std::move(dist)) {
    cdf_.resize(dist_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < dist_.size(); ++i) {
      acc += dist_.probabilities[i];
      cdf_[i] = acc;
    }
    if (dist_.size() == 0 || !(acc > 0.0)) throw ValidationError("DistributionSampler: empty distribution");
  }

  const FockBasisState& operator()(Rng& rng) const { return dist_.states[sample_index(rng)]; }

  std::size_t sample_index(Rng& rng) const {
    std::uniform_real_distribution<double> uni(0.0, cdf_.back());
    const double u = uni(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    // Never land on a zero-width interval.
    auto idx = static_cast<std::size_t>(it - cdf_.begin());
    while (dist_.probabilities[idx] <= 0.0 && idx > 0) --idx;
    return idx;
  }

  const OutputDistribution& distribution() const { return dist_; }

 private:
  OutputDistribution dist_;
  std::vector<double> cdf_;
};

inline FockBasisState sample_output(const Interferometer& u, const FockBasisState& input, Rng& rng,
                                    const EnumerationOptions& opts = {}) {
  DistributionSampler sampler(output_distribution(u, input, opts));
  return sampler(rng);
}

}  // namespace encwalk
