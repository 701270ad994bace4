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


#include "encwalk/security.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

using namespace encwalk;

// Reference values below were computed with 30-digit arithmetic directly
// from the defining sums.

namespace {

Eigen::VectorXd top(const Eigen::VectorXd& ascending, Eigen::Index n) { return ascending.tail(n).reverse(); }

}  // namespace

TEST(RhoBruteforce, pure_without_encryption) {
  const auto rho = rho_i_bruteforce(0, 1, 1);
  EXPECT_NEAR(rho.matrix()(0, 0).real(), 1.0, 1e-15);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-15);
}

TEST(RhoBruteforce, single_photon_fully_mixed) {
  const auto ev = rho_i_bruteforce(0, 1, 64).eigenvalues();
  EXPECT_NEAR(ev(0), 0.5, 1e-6);
  EXPECT_NEAR(ev(1), 0.5, 1e-6);
}

TEST(RhoBruteforce, valid_density_matrices) {
  for (int m = 1; m <= 5; ++m) {
    for (int d : {1, 3, 16}) {
      for (std::uint64_t i : {std::uint64_t{0}, (std::uint64_t{1} << m) - 1, std::uint64_t{1}}) {
        const auto rho = rho_i_bruteforce(i, m, d);
        EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
        EXPECT_LT((rho.matrix() - rho.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_GE(rho.eigenvalues().minCoeff(), -1e-10);
      }
    }
  }
}

TEST(RhoBruteforce, caps_and_ranges) {
  EXPECT_THROW(rho_i_bruteforce(0, 13, 2), ResourceError);
  EXPECT_THROW(rho_i_bruteforce(4, 2, 2), ValidationError);
  EXPECT_THROW(rho_i_bruteforce(0, 2, 0), ValidationError);
}

TEST(RhoSymmetric, unencrypted_is_rank_one) {
  const auto ev = rho0_symmetric(1, 1).eigenvalues();
  EXPECT_NEAR(ev(0), 0.0, 1e-15);
  EXPECT_NEAR(ev(1), 1.0, 1e-15);
}

TEST(RhoSymmetric, large_d_is_binomial_diagonal) {
  const auto rho = rho0_symmetric(4, 1024);
  const double want[] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};
  for (int a = 0; a <= 4; ++a) EXPECT_NEAR(rho.matrix()(a, a).real(), want[a], 1e-3);
  // Cross terms vanish exactly once d exceeds m.
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      if (a != b) EXPECT_LT(std::abs(rho.matrix()(a, b)), 1e-15);
}

TEST(RhoSymmetric, spectrum_matches_bruteforce) {
  for (int m = 1; m <= 6; ++m) {
    for (int d : {1, 2, 3, 4, 16, 128}) {
      const Eigen::VectorXd sym = rho0_symmetric(m, d).eigenvalues();
      const Eigen::VectorXd full = rho_i_bruteforce(0, m, d).eigenvalues();
      EXPECT_LT((top(sym, m + 1) - top(full, m + 1)).cwiseAbs().maxCoeff(), 1e-10) << "m=" << m << " d=" << d;
      // Everything outside the symmetric subspace is empty.
      if (full.size() > m + 1) EXPECT_LT(full.head(full.size() - (m + 1)).cwiseAbs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Ensemble, average_is_maximally_mixed) {
  for (int m = 1; m <= 5; ++m) {
    for (int d : {1, 2, 7}) {
      const auto ev = ensemble_average_density(m, d).eigenvalues();
      EXPECT_LT((ev.array() - std::ldexp(1.0, -m)).abs().maxCoeff(), 1e-10);
    }
  }
}

TEST(Ensemble, entropy_independent_of_input) {
  std::mt19937_64 rng(8);
  for (int m = 1; m <= 6; ++m) {
    for (int d : {2, 5, 32}) {
      const double s0 = rho_i_bruteforce(0, m, d).entropy_bits();
      std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << m) - 1);
      for (int r = 0; r < 5; ++r) EXPECT_NEAR(rho_i_bruteforce(pick(rng), m, d).entropy_bits(), s0, 1e-10);
    }
  }
}

TEST(BinomialEntropy, values) {
  EXPECT_NEAR(binomial_entropy(1), 1.0, 1e-15);
  EXPECT_NEAR(binomial_entropy(2), 1.5, 1e-15);
  EXPECT_NEAR(binomial_entropy(5), 2.19819241104309779887, 1e-12);
  EXPECT_NEAR(binomial_entropy(100), 4.36901140922301575562, 1e-10);
  EXPECT_NEAR(binomial_entropy(100), 0.5 * std::log2(std::numbers::pi * std::numbers::e * 100 / 2), 0.01);
}

TEST(HolevoExact, special_values) {
  for (int m = 1; m <= 6; ++m) EXPECT_NEAR(holevo_exact(m, 1), m, 1e-10);
  EXPECT_LT(holevo_exact(1, 64), 0.01);
  EXPECT_NEAR(holevo_exact(2, 256), 0.5, 0.01);
}

TEST(HolevoExact, approaches_binomial_form_for_large_d) {
  for (int m = 1; m <= 6; ++m) EXPECT_NEAR(holevo_exact(m, 1024), m - binomial_entropy(m), 0.01);
}

TEST(HolevoExact, monotone_in_divisions) {
  // Coarser key grids hide less.
  for (int m = 2; m <= 4; ++m) EXPECT_GT(holevo_exact(m, 2), holevo_exact(m, 64));
}

TEST(HolevoExact, cap) {
  EXPECT_THROW(holevo_exact(11, 2), ResourceError);
  EXPECT_NO_THROW(holevo_exact(3, 2, {.max_m = 3}));
  EXPECT_THROW(holevo_exact(4, 2, {.max_m = 3}), ResourceError);
}

TEST(HolevoAsymptotic, closed_form) {
  EXPECT_NEAR(holevo_asymptotic(4), 1.95290441481935889730, 1e-12);
  EXPECT_NEAR(holevo_asymptotic(1), -0.04709558518064110270, 1e-12);
}

TEST(HolevoAsymptotic, gap_to_exact_shrinks) {
  double prev = INFINITY;
  for (int m : {4, 6, 8, 10}) {
    const double gap = std::abs(holevo_exact(m, 1024) - holevo_asymptotic(m));
    EXPECT_LT(gap, prev) << "m=" << m;
    prev = gap;
  }
}

TEST(MaxEigenvalue, exact_and_asymptotic) {
  EXPECT_DOUBLE_EQ(max_eigenvalue_rho(1), 0.5);
  EXPECT_NEAR(max_eigenvalue_rho(2), 0.5, 1e-15);
  EXPECT_NEAR(max_eigenvalue_rho(1000) / max_eigenvalue_asymptotic(1000), 1.0, 1e-3);
  // Agrees with the top eigenvalue of the large-d state.
  for (int m = 1; m <= 6; ++m) EXPECT_NEAR(rho0_symmetric(m, 512).eigenvalues().maxCoeff(), max_eigenvalue_rho(m), 1e-12);
}

TEST(GuessBound, values_and_monotone) {
  EXPECT_NEAR(guess_probability_bound(100), 0.15957691216057307118, 1e-15);
  EXPECT_NEAR(guess_probability_bound(8.0 / std::numbers::pi), 1.0, 1e-15);
  for (int m = 1; m < 200; ++m) EXPECT_GT(guess_probability_bound(m), guess_probability_bound(m + 1));
  EXPECT_THROW(guess_probability_bound(0.0), ValidationError);
}

TEST(PAv, values) {
  EXPECT_DOUBLE_EQ(p_av(5, 1), 1.0);
  EXPECT_DOUBLE_EQ(p_av(1, 2), 0.5);
  EXPECT_NEAR(p_av(4, 16), 0.2734375, 1e-15);
  EXPECT_NEAR(p_av(8, 64), 0.196380615234375, 1e-14);
  EXPECT_NEAR(p_av(3, 5), 0.3125, 1e-15);
  EXPECT_NEAR(p_av(200, 8), 0.125000000000004406, 1e-15);
  EXPECT_LT(std::abs(p_av(200, 8) - 1.0 / 8), 1e-3);
  EXPECT_NEAR(p_av(1, 4096), 0.5, 1e-4);
}

TEST(PAv, limit_in_divisions) {
  EXPECT_NEAR(p_av_limit_d(1), 0.5, 1e-15);
  for (int m = 1; m <= 20; ++m) EXPECT_NEAR(p_av(m, 8192), p_av_limit_d(m), 1e-6);
  EXPECT_NEAR(p_av_limit_d(10000) * std::sqrt(std::numbers::pi * 10000), 1.0, 0.005);
}

TEST(PAv, below_guessing_bound) {
  for (int m = 4; m <= 64; ++m) EXPECT_LE(p_av_limit_d(m), guess_probability_bound(m));
}

TEST(AverageOverlap, values_and_minimum) {
  for (int m = 1; m <= 10; ++m) EXPECT_NEAR(average_overlap(0, m, 37), p_av(m, 37), 1e-15);
  EXPECT_NEAR(average_overlap(10, 20, 1024), 1.68034603120759129524e-7, 1e-19);
  EXPECT_NEAR(average_overlap(3, 7, 12), 0.00244140625, 1e-16);
  EXPECT_NEAR(average_overlap(1, 1, 4096), 0.5, 1e-4);
  int argmin = 0;
  for (int h = 1; h <= 20; ++h)
    if (average_overlap(h, 20, 1024) < average_overlap(argmin, 20, 1024)) argmin = h;
  EXPECT_EQ(argmin, 10);
  EXPECT_THROW(average_overlap(3, 2, 8), ValidationError);
}

TEST(OverlapGrid, shape_and_sentinel) {
  const auto grid = overlap_grid(30, 1024);
  EXPECT_EQ(grid.size(), 30u * 33u / 2u);
  EXPECT_EQ(grid[0].m, 1);
  EXPECT_EQ(grid[0].h, 0);
  EXPECT_NEAR(grid[0].log_overlap, std::log(0.5), 1e-3);
  const auto coarse = overlap_grid(2, 1);
  EXPECT_TRUE(std::isinf(coarse[1].log_overlap) && coarse[1].log_overlap < 0);
  EXPECT_NEAR(overlap_grid(1, 1024, true)[0].log_overlap, -1.0, 1e-12);
  EXPECT_THROW(overlap_grid(65, 8), ValidationError);
}

TEST(ConfidenceRegions, classification) {
  std::vector<int> ds;
  std::vector<int> ms;
  for (int d = 1; d <= 32; ++d) ds.push_back(d);
  for (int m = 1; m <= 60; ++m) ms.push_back(m);
  const auto cells = confidence_regions(ds, ms, {0.5, 0.1, 0.01});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (c.d == 1) EXPECT_FALSE(c.epsilon.has_value());
    if (c.epsilon) EXPECT_LT(c.p_av, *c.epsilon);
    if (i > 0 && cells[i - 1].d == c.d) {
      EXPECT_LE(c.p_av, cells[i - 1].p_av);
      const double prev = cells[i - 1].epsilon.value_or(2.0);
      EXPECT_LE(c.epsilon.value_or(2.0), prev);
    }
  }
  EXPECT_THROW(confidence_regions(ds, ms, {1.5}), ValidationError);
  EXPECT_THROW(confidence_regions(ds, ms, {0.0}), ValidationError);
  EXPECT_THROW(confidence_regions({}, ms, {0.5}), ValidationError);
}

TEST(RandomAttack, no_encryption_always_succeeds) {
  const auto r = random_attack_mc(5, 1, LogicalInput::parse("10110"), 1000, 1);
  EXPECT_EQ(r.exact_matches, 1000u);
}

TEST(RandomAttack, single_photon_matches_or_complements) {
  for (int d : {2, 7, 64}) {
    const auto r = random_attack_mc(1, d, LogicalInput::parse("1"), 5000, 3);
    EXPECT_EQ(r.match_or_complement, 5000u);
  }
}

TEST(RandomAttack, agrees_with_p_av) {
  const int m = 4;
  const int d = 16;
  const std::uint64_t trials = 1000000;
  const auto r = random_attack_mc(m, d, LogicalInput::parse("0110"), trials, 7);
  const double p = p_av(m, d);
  EXPECT_LT(std::abs(r.exact_rate() - p), 4 * std::sqrt(p * (1 - p) / trials));
}

TEST(RandomAttack, thread_count_invariant) {
  const auto bits = LogicalInput::parse("101");
  const auto a = random_attack_mc(3, 8, bits, 300000, 11, 1);
  const auto b = random_attack_mc(3, 8, bits, 300000, 11, 4);
  EXPECT_EQ(a.exact_matches, b.exact_matches);
  EXPECT_EQ(a.match_or_complement, b.match_or_complement);
}

TEST(RandomAttack, validation) {
  EXPECT_THROW(random_attack_mc(2, 4, LogicalInput::parse("1"), 10, 1), ValidationError);
  EXPECT_THROW(random_attack_mc(1, 4, LogicalInput::parse("1"), 0, 1), ValidationError);
}
