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


#include "encwalk/fock.hpp"

#include <cmath>
#include <map>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace encwalk;

namespace {

ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (const auto& v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

}  // namespace

TEST(Permanent, small_closed_forms) {
  EXPECT_EQ(permanent(ComplexMatrix::Identity(2, 2)), Complex(1.0));
  EXPECT_NEAR(std::abs(permanent(mat({{1, 2}, {3, 4}})) - 10.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(permanent(ComplexMatrix::Ones(3, 3)) - 6.0), 0.0, 1e-14);
  EXPECT_EQ(permanent(ComplexMatrix(0, 0)), Complex(1.0));
}

TEST(Permanent, rejects_non_square) { EXPECT_THROW(permanent(ComplexMatrix::Ones(2, 3)), ValidationError); }

TEST(Permanent, matches_permutation_sum) {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const ComplexMatrix a = oracle::random_complex(n, n, rng);
      const Complex want = oracle::naive_permanent(a);
      const Complex got = permanent(a);
      EXPECT_LE(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want))) << "n=" << n;
    }
  }
}

TEST(Permanent, sixteen_by_sixteen_all_ones) {
  // per(J_n) = n!
  EXPECT_NEAR(permanent(ComplexMatrix::Ones(16, 16)).real() / std::tgamma(17.0), 1.0, 1e-9);
}

TEST(HaarUnitary, unitary_and_deterministic) {
  const auto a = haar_unitary(4, 99);
  const auto b = haar_unitary(4, 99);
  EXPECT_EQ(max_abs_diff(a.matrix(), b.matrix()), 0.0);
  EXPECT_LT(unitarity_error(a.matrix()), 1e-12);
  EXPECT_GT(max_abs_diff(a.matrix(), haar_unitary(4, 100).matrix()), 1e-3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_LT(unitarity_error(haar_unitary(1 + seed % 9, seed).matrix()), 1e-12);
  }
}

TEST(HaarUnitary, one_mode_is_a_phase) { EXPECT_NEAR(std::abs(haar_unitary(1, 5)(0, 0)), 1.0, 1e-15); }

TEST(HaarUnitary, zero_modes_rejected) { EXPECT_THROW(haar_unitary(0, 1), ValidationError); }

TEST(HaarUnitary, first_moment_looks_haar) {
  // E|U_00|^2 = 1/m for Haar measure.
  double acc = 0.0;
  const int n = 4000;
  for (int s = 0; s < n; ++s) acc += std::norm(haar_unitary(3, static_cast<std::uint64_t>(s))(0, 0));
  EXPECT_NEAR(acc / n, 1.0 / 3.0, 0.02);
}

TEST(Interferometer, rejects_non_unitary) {
  EXPECT_THROW(Interferometer(mat({{1, 1}, {0, 1}})), ValidationError);
  EXPECT_THROW(Interferometer(ComplexMatrix(0, 0)), ValidationError);
}

TEST(OutputAmplitude, identity_and_hong_ou_mandel) {
  const auto bs = Interferometer::balanced_splitter();
  EXPECT_NEAR(std::abs(output_amplitude(Interferometer::identity(2), {1, 0}, {1, 0}) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(output_amplitude(bs, {1, 1}, {1, 1})), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(output_amplitude(bs, {1, 1}, {2, 0})), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(OutputAmplitude, photon_number_mismatch) {
  EXPECT_THROW(output_amplitude(Interferometer::identity(2), {1, 0}, {1, 1}), ValidationError);
  EXPECT_THROW(output_amplitude(Interferometer::identity(2), {1, 0, 0}, {1, 0, 0}), ValidationError);
}

TEST(Enumeration, lexicographic_and_counted) {
  const auto states = enumerate_fock_states(3, 2);
  ASSERT_EQ(states.size(), 6u);
  EXPECT_EQ(states.front(), FockBasisState({0, 0, 2}));
  EXPECT_EQ(states.back(), FockBasisState({2, 0, 0}));
  EXPECT_TRUE(std::is_sorted(states.begin(), states.end()));
  EXPECT_EQ(fock_space_size(8, 8), 6435u);
  EXPECT_EQ(enumerate_fock_states(5, 0).size(), 1u);
}

TEST(Enumeration, cap_is_enforced) {
  EXPECT_THROW(enumerate_fock_states(30, 10, 1000), ResourceError);
  try {
    enumerate_fock_states(30, 10, 1000);
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos);
  }
}

TEST(OutputDistribution, identity_is_deterministic) {
  const auto d = output_distribution(Interferometer::identity(4), {0, 1, 1, 0});
  EXPECT_DOUBLE_EQ(d.probability({0, 1, 1, 0}), 1.0);
  EXPECT_NEAR(d.total(), 1.0, 1e-15);
}

TEST(OutputDistribution, hong_ou_mandel) {
  const auto d = output_distribution(Interferometer::balanced_splitter(), {1, 1});
  EXPECT_NEAR(d.probability({2, 0}), 0.5, 1e-15);
  EXPECT_NEAR(d.probability({0, 2}), 0.5, 1e-15);
  EXPECT_NEAR(d.probability({1, 1}), 0.0, 1e-15);
}

TEST(OutputDistribution, vacuum_input) {
  const auto d = output_distribution(haar_unitary(3, 1), FockBasisState::vacuum(3));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_DOUBLE_EQ(d.probabilities[0], 1.0);
}

TEST(OutputDistribution, normalized_for_haar_inputs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = haar_unitary(4 + seed % 3, seed);
    std::vector<int> occ(u.mode_count(), 0);
    occ[0] = 1;
    occ[1] = 1;
    occ[2] = seed % 2 == 0 ? 1 : 0;
    EXPECT_NEAR(output_distribution(u, FockBasisState(occ)).total(), 1.0, 1e-10);
  }
  // Bunched input too.
  EXPECT_NEAR(output_distribution(haar_unitary(3, 8), {2, 0, 1}).total(), 1.0, 1e-10);
}

TEST(OutputDistribution, single_photon_is_matrix_entry) {
  for (std::size_t m = 1; m <= 8; ++m) {
    const auto u = haar_unitary(m, 1000 + m);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<int> in(m, 0);
      in[i] = 1;
      const auto d = output_distribution(u, FockBasisState(in));
      for (std::size_t j = 0; j < m; ++j) {
        std::vector<int> out(m, 0);
        out[j] = 1;
        EXPECT_NEAR(d.probability(FockBasisState(out)), std::norm(u(i, j)), 1e-14);
      }
    }
  }
}

TEST(OutputDistribution, thread_count_does_not_change_results) {
  const auto u = haar_unitary(6, 3);
  const FockBasisState in{1, 1, 1, 0, 1, 0};
  const auto a = output_distribution(u, in, {.threads = 1});
  const auto b = output_distribution(u, in, {.threads = 3});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.probabilities[i], b.probabilities[i]);
}

TEST(Sampling, identity_always_returns_input) {
  Rng rng(1);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sample_output(Interferometer::identity(2), {1, 0}, rng), FockBasisState({1, 0}));
}

TEST(Sampling, never_draws_coincidences_after_balanced_splitter) {
  DistributionSampler sampler(output_distribution(Interferometer::balanced_splitter(), {1, 1}));
  Rng rng(42);
  int coincidences = 0;
  for (int i = 0; i < 10000; ++i) coincidences += sampler(rng) == FockBasisState({1, 1}) ? 1 : 0;
  EXPECT_EQ(coincidences, 0);
}

TEST(Sampling, chi_square_against_exact_distribution) {
  const auto dist = output_distribution(haar_unitary(3, 11), {1, 1, 0});
  DistributionSampler sampler(dist);
  Rng rng(7);
  std::vector<std::uint64_t> counts(dist.size(), 0);
  for (int i = 0; i < 100000; ++i) ++counts[sampler.sample_index(rng)];
  double stat = 0.0;
  EXPECT_TRUE(oracle::chi_square_passes(dist.probabilities, counts, 0.001, &stat)) << "chi2=" << stat;
}

TEST(Sampling, deterministic_per_seed) {
  const auto u = haar_unitary(4, 2);
  Rng a(5);
  Rng b(5);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(sample_output(u, {1, 0, 1, 0}, a), sample_output(u, {1, 0, 1, 0}, b));
}

TEST(Json, matrix_and_state_round_trip) {
  const auto u = haar_unitary(3, 4);
  EXPECT_EQ(max_abs_diff(matrix_from_json(matrix_to_json(u.matrix())), u.matrix()), 0.0);
  const nlohmann::json j = FockBasisState({0, 2, 1});
  EXPECT_EQ(j.dump(), "[0,2,1]");
  EXPECT_EQ(j.get<FockBasisState>(), FockBasisState({0, 2, 1}));
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse("[[[1,0]],[[1,0],[0,0]]]")), ValidationError);
}

TEST(FockBasisState, parse_and_print) {
  EXPECT_EQ(FockBasisState::parse("0110").to_string(), "0110");
  EXPECT_EQ(FockBasisState::parse("10,0,2").to_string(), "10.0.2");
  EXPECT_THROW(FockBasisState::parse("1a"), ValidationError);
  EXPECT_THROW(FockBasisState({1, -1}), ValidationError);
}
