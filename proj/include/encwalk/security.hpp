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


// Information-theoretic security of the rotation-key encryption and the
// random-basis attack.
//
// Brute-force density matrices live on the m-qubit polarisation space,
// with qubit 0 as the most significant tensor factor. Input index i maps to
// qubit states |H> where bit j of i is 0 and |V> where it is 1, bit j being
// qubit j. All entropies are in bits.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "encwalk/errors.hpp"
#include "encwalk/fock.hpp"
#include "encwalk/linalg.hpp"
#include "encwalk/protocol.hpp"

namespace encwalk {

inline constexpr double kDensityTol = 1e-12;
inline constexpr double kNegativeEigenTol = 1e-10;
inline constexpr double kEigenClamp = 1e-14;

class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols()) throw ValidationError("DensityMatrix: must be square and nonempty");
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kDensityTol) throw NumericalError("DensityMatrix: not Hermitian (" + std::to_string(herm) + ")");
    const double tr = rho_.trace().real();
    if (std::abs(tr - 1.0) > kDensityTol) throw NumericalError("DensityMatrix: trace " + std::to_string(tr) + " != 1");
  }

  Eigen::Index dimension() const { return rho_.rows(); }
  const ComplexMatrix& matrix() const { return rho_; }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const {
    if (rho_.imag().cwiseAbs().maxCoeff() == 0.0) {
      const Eigen::MatrixXd re = rho_.real();
      return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(re, Eigen::EigenvaluesOnly).eigenvalues();
    }
    return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(rho_, Eigen::EigenvaluesOnly).eigenvalues();
  }

  /// -Tr(rho log2 rho). Eigenvalues below 1e-14 count as zero; anything below
  /// -1e-10 is an error.
  double entropy_bits() const { return entropy_of_spectrum(eigenvalues()); }

  double purity() const { return (rho_ * rho_).trace().real(); }

  static double entropy_of_spectrum(const Eigen::VectorXd& ev) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      const double lam = ev(i);
      if (lam < -kNegativeEigenTol) {
        throw NumericalError("density matrix eigenvalue " + std::to_string(lam) + " is negative");
      }
      if (lam > kEigenClamp) s -= lam * std::log2(lam);
    }
    return s;
  }

 private:
  ComplexMatrix rho_;
};

namespace detail {

/// cos and sin of (j mod d)*pi/d, exact at 0 and pi/2. Callers only rely
/// on this for angles in [0, pi) or through even powers.
inline std::pair<double, double> grid_cos_sin(long long j, long long d) {
  const long long r = ((j % d) + d) % d;
  if (r == 0) return {1.0, 0.0};
  if (2 * r == d) return {0.0, 1.0};
  const double theta = static_cast<double>(r) * std::numbers::pi / static_cast<double>(d);
  return {std::cos(theta), std::sin(theta)};
}

/// exp(2 pi i r / d), exact at multiples of a quarter turn.
inline Complex unit_root(long long r, long long d) {
  const long long q = ((r % d) + d) % d;
  if (q == 0) return {1.0, 0.0};
  if (2 * q == d) return {-1.0, 0.0};
  if (4 * q == d) return {0.0, 1.0};
  if (4 * q == 3 * d) return {0.0, -1.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(q) / static_cast<double>(d));
}

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

inline double binomial_pmf_half(int m, int a) { return std::exp(log_binomial(m, a) - m * std::numbers::ln2); }

}  // namespace detail

inline constexpr int kBruteForceMaxQubits = 12;

/// (1/d) sum_k (R(k pi/d)|P_i>)(<P_i|R(-k pi/d)) on 2^m dimensions.
inline DensityMatrix rho_i_bruteforce(std::uint64_t i, int m, int d) {
  if (m < 1) throw ValidationError("rho_i_bruteforce: m must be at least 1");
  if (d < 1) throw ValidationError("rho_i_bruteforce: d must be at least 1");
  if (m > kBruteForceMaxQubits) {
    throw ResourceError("rho_i_bruteforce: m = " + std::to_string(m) + " exceeds the 2^" +
                        std::to_string(kBruteForceMaxQubits) + " dimension cap");
  }
  if (i >= (std::uint64_t{1} << m)) throw ValidationError("rho_i_bruteforce: input index out of range");
  const Eigen::Index dim = Eigen::Index{1} << m;
  Eigen::MatrixXd psi(dim, d);
  for (int k = 0; k < d; ++k) {
    const auto [c, s] = detail::grid_cos_sin(k, d);
    // R|H> = (c, s), R|V> = (-s, c).
    const double h_amp[2] = {c, s};
    const double v_amp[2] = {-s, c};
    for (Eigen::Index b = 0; b < dim; ++b) {
      double amp = 1.0;
      for (int j = 0; j < m; ++j) {
        const int out_bit = static_cast<int>((b >> (m - 1 - j)) & 1);
        const bool is_v = (i >> j) & 1U;
        amp *= is_v ? v_amp[out_bit] : h_amp[out_bit];
        if (amp == 0.0) break;
      }
      psi(b, k) = amp;
    }
  }
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  rho.selfadjointView<Eigen::Lower>().rankUpdate(psi, 1.0 / d);
  const Eigen::MatrixXd full = rho.selfadjointView<Eigen::Lower>();
  return DensityMatrix(full.cast<Complex>());
}

/// rho_0 in the symmetric (Dicke) basis |l>_m built from
/// |0> = (|H> + i|V>)/sqrt2, |1> = (|H> - i|V>)/sqrt2.
/// Entry (a, b) = 2^-m sqrt(C(m,a) C(m,b)) (1/d) sum_k exp(2i (a - b) k pi/d).
inline DensityMatrix rho0_symmetric(int m, int d) {
  if (m < 1) throw ValidationError("rho0_symmetric: m must be at least 1");
  if (d < 1) throw ValidationError("rho0_symmetric: d must be at least 1");
  const Eigen::Index n = m + 1;
  ComplexMatrix rho(n, n);
  for (int a = 0; a <= m; ++a) {
    for (int b = 0; b <= m; ++b) {
      Complex phase_avg(0.0, 0.0);
      for (int k = 0; k < d; ++k) phase_avg += detail::unit_root(static_cast<long long>(a - b) * k, d);
      phase_avg /= static_cast<double>(d);
      const double w = std::exp(0.5 * (detail::log_binomial(m, a) + detail::log_binomial(m, b)) - m * std::numbers::ln2);
      rho(a, b) = w * phase_avg;
    }
  }
  // Enforce exact Hermiticity against rounding in the phase sums.
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  ComplexMatrix normalized = herm / herm.trace().real();
  return DensityMatrix(std::move(normalized));
}

/// (1/2^m) sum_i rho_i.
inline DensityMatrix ensemble_average_density(int m, int d) {
  if (m > 8) throw ResourceError("ensemble_average_density: m = " + std::to_string(m) + " exceeds cap 8");
  const Eigen::Index dim = Eigen::Index{1} << m;
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) sum += rho_i_bruteforce(i, m, d).matrix();
  return DensityMatrix(sum / static_cast<double>(dim));
}

/// Shannon entropy of Binomial(m, 1/2) in bits.
inline double binomial_entropy(int m) {
  if (m < 1) throw ValidationError("binomial_entropy: m must be at least 1");
  double h = 0.0;
  for (int a = 0; a <= m; ++a) {
    const double p = detail::binomial_pmf_half(m, a);
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

struct HolevoOptions {
  int max_m = 10;
};

/// chi = S(rho) - mean_i S(rho_i) with S(rho) = m (rho is maximally mixed)
/// and S(rho_i) the same for every i; a second input index is computed as a
/// consistency check.
inline double holevo_exact(int m, int d, const HolevoOptions& opts = {}) {
  if (m < 1) throw ValidationError("holevo_exact: m must be at least 1");
  if (d < 1) throw ValidationError("holevo_exact: d must be at least 1");
  if (m > opts.max_m) {
    throw ResourceError("holevo_exact: m = " + std::to_string(m) + " exceeds exact-mode cap " +
                        std::to_string(opts.max_m) + " (raise --max-m)");
  }
  const double s0 = rho_i_bruteforce(0, m, d).entropy_bits();
  if (m > 1) {
    std::uint64_t probe = 0;
    for (int j = 0; j < m; j += 2) probe |= std::uint64_t{1} << j;
    const double s_probe = rho_i_bruteforce(probe, m, d).entropy_bits();
    if (std::abs(s_probe - s0) > 1e-8) {
      throw NumericalError("holevo_exact: entropy of rho_i depends on i (" + std::to_string(s0) + " vs " +
                           std::to_string(s_probe) + ")");
    }
  }
  return std::max(0.0, static_cast<double>(m) - s0);
}

/// m - (1/2) log2(pi e m / 2).
inline double holevo_asymptotic(int m) {
  if (m < 1) throw ValidationError("holevo_asymptotic: m must be at least 1");
  return m - 0.5 * std::log2(std::numbers::pi * std::numbers::e * m / 2.0);
}

/// Largest eigenvalue of the large-d rho_i, 2^-m C(m, floor(m/2)).
inline double max_eigenvalue_rho(int m) {
  if (m < 1) throw ValidationError("max_eigenvalue_rho: m must be at least 1");
  return detail::binomial_pmf_half(m, m / 2);
}

inline double max_eigenvalue_asymptotic(double m) { return std::sqrt(2.0 / (std::numbers::pi * m)); }

/// sqrt(8 / (pi m)); exceeds 1 (and says nothing) for m < 8/pi.
inline double guess_probability_bound(double m) {
  if (!(m > 0.0)) throw ValidationError("guess_probability_bound: m must be positive");
  return std::sqrt(8.0 / (std::numbers::pi * m));
}

/// (1/d) sum_j cos^{2m}(j pi / d).
inline double p_av(int m, int d) {
  if (m < 1) throw ValidationError("p_av: m must be at least 1");
  if (d < 1) throw ValidationError("p_av: d must be at least 1");
  double sum = 0.0;
  for (int j = 0; j < d; ++j) sum += std::pow(detail::grid_cos_sin(j, d).first, 2 * m);
  return sum / d;
}

/// Gamma(m + 1/2) / (sqrt(pi) m!).
inline double p_av_limit_d(int m) {
  if (m < 1) throw ValidationError("p_av_limit_d: m must be at least 1");
  return std::exp(std::lgamma(m + 0.5) - std::lgamma(m + 1.0)) / std::sqrt(std::numbers::pi);
}

/// Mean of sin^{2h} cos^{2(m-h)} over the key grid theta_j = j pi/d.
inline double average_overlap(int h, int m, int d) {
  if (m < 1) throw ValidationError("average_overlap: m must be at least 1");
  if (d < 1) throw ValidationError("average_overlap: d must be at least 1");
  if (h < 0 || h > m) {
    throw ValidationError("average_overlap: Hamming distance " + std::to_string(h) + " outside [0, " +
                          std::to_string(m) + "]");
  }
  double sum = 0.0;
  for (int j = 0; j < d; ++j) {
    const auto [c, s] = detail::grid_cos_sin(j, d);
    sum += std::pow(s, 2 * h) * std::pow(c, 2 * (m - h));
  }
  return sum / d;
}

struct OverlapCell {
  int m = 0;
  int h = 0;
  double overlap = 0.0;
  double log_overlap = 0.0;  // -inf when overlap is exactly 0
};

inline constexpr int kOverlapGridMaxM = 64;

inline std::vector<OverlapCell> overlap_grid(int m_max, int d, bool log2 = false) {
  if (m_max < 1 || m_max > kOverlapGridMaxM) {
    throw ValidationError("overlap_grid: m_max must be in [1, " + std::to_string(kOverlapGridMaxM) + "]");
  }
  if (d < 1) throw ValidationError("overlap_grid: d must be at least 1");
  std::vector<OverlapCell> cells;
  for (int m = 1; m <= m_max; ++m) {
    for (int h = 0; h <= m; ++h) {
      const double v = average_overlap(h, m, d);
      const double lg = v > 0.0 ? (log2 ? std::log2(v) : std::log(v)) : -INFINITY;
      cells.push_back({m, h, v, lg});
    }
  }
  return cells;
}

struct RegionCell {
  int d = 0;
  int m = 0;
  double p_av = 0.0;
  std::optional<double> epsilon;  // tightest eps with p_av < eps, if any
};

/// One cell per (d, m); epsilon_class is the smallest supplied eps that
/// p_av falls strictly below.
inline std::vector<RegionCell> confidence_regions(const std::vector<int>& d_values, const std::vector<int>& m_values,
                                                  std::vector<double> epsilons) {
  if (d_values.empty() || m_values.empty()) throw ValidationError("confidence_regions: empty range");
  if (epsilons.empty()) throw ValidationError("confidence_regions: no epsilon thresholds");
  for (double e : epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw ValidationError("confidence_regions: epsilon " + std::to_string(e) + " outside (0, 1)");
  }
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<RegionCell> cells;
  cells.reserve(d_values.size() * m_values.size());
  for (int d : d_values) {
    for (int m : m_values) {
      RegionCell c{d, m, p_av(m, d), std::nullopt};
      for (double e : epsilons) {
        if (c.p_av < e) {
          c.epsilon = e;
          break;
        }
      }
      cells.push_back(c);
    }
  }
  return cells;
}

struct AttackResult {
  int m = 0;
  int d = 0;
  std::uint64_t trials = 0;
  std::uint64_t exact_matches = 0;
  std::uint64_t match_or_complement = 0;

  double exact_rate() const { return static_cast<double>(exact_matches) / static_cast<double>(trials); }
  double complement_rate() const { return static_cast<double>(match_or_complement) / static_cast<double>(trials); }
  double exact_se() const { return std::sqrt(exact_rate() * (1.0 - exact_rate()) / static_cast<double>(trials)); }
  double complement_se() const {
    return std::sqrt(complement_rate() * (1.0 - complement_rate()) / static_cast<double>(trials));
  }
};

inline constexpr std::uint64_t kAttackShardTrials = 1U << 16;

/// Random-basis attack. Each trial: Alice's key k and Bob's basis j are
/// uniform on the grid; each photon reads back its own bit with probability
/// cos^2((k - j) pi/d) and the flipped bit otherwise. Trials are split into
/// fixed shards seeded from (seed, shard), so results do not depend on the
/// thread count.
inline AttackResult random_attack_mc(int m, int d, const LogicalInput& bits, std::uint64_t trials, std::uint64_t seed,
                                     unsigned threads = 1) {
  if (m < 1) throw ValidationError("random_attack_mc: m must be at least 1");
  if (d < 1) throw ValidationError("random_attack_mc: d must be at least 1");
  if (trials < 1) throw ValidationError("random_attack_mc: trials must be at least 1");
  if (bits.size() != static_cast<std::size_t>(m)) throw ValidationError("random_attack_mc: input length differs from m");

  // Per-photon agreement probability for each relative offset (k - j) mod d.
  std::vector<double> agree(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r) {
    const double c = detail::grid_cos_sin(r, d).first;
    agree[static_cast<std::size_t>(r)] = c * c;
  }

  const std::uint64_t shards = (trials + kAttackShardTrials - 1) / kAttackShardTrials;
  std::vector<std::uint64_t> exact(shards, 0);
  std::vector<std::uint64_t> either(shards, 0);
  auto run_shard = [&](std::uint64_t shard) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
    Rng rng(seq);
    std::uniform_int_distribution<int> key(0, d - 1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const std::uint64_t begin = shard * kAttackShardTrials;
    const std::uint64_t end = std::min(trials, begin + kAttackShardTrials);
    for (std::uint64_t t = begin; t < end; ++t) {
      const int alice = key(rng);
      const int bob = key(rng);
      const double p = agree[static_cast<std::size_t>(((alice - bob) % d + d) % d)];
      bool all_same = true;
      bool all_flipped = true;
      for (int j = 0; j < m; ++j) {
        const bool same = uni(rng) < p;  // Bob reads bits[j], else its flip
        all_same = all_same && same;
        all_flipped = all_flipped && !same;
      }
      exact[shard] += all_same ? 1 : 0;
      either[shard] += (all_same || all_flipped) ? 1 : 0;
    }
  };

  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(shards, 1024))));
  if (workers == 1) {
    for (std::uint64_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::uint64_t s = w; s < shards; s += workers) run_shard(s);
      });
    }
    for (auto& th : pool) th.join();
  }

  AttackResult r{m, d, trials, 0, 0};
  for (std::uint64_t s = 0; s < shards; ++s) {
    r.exact_matches += exact[s];
    r.match_or_complement += either[s];
  }
  return r;
}

inline AttackResult random_attack_mc(int m, int d, const LogicalInput& bits, std::uint64_t trials, Rng& rng,
                                     unsigned threads = 1) {
  return random_attack_mc(m, d, bits, trials, static_cast<std::uint64_t>(rng()), threads);
}

}  // namespace encwalk
