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


// Polarisation-rotation encryption of boson-sampling inputs.
//
// Logical mode j is the physical mode pair (2j, 2j + 1) = (H_j, V_j). A
// logical photon is an H photon, an empty logical mode a V photon, so every
// encoded state carries exactly m photons. Alice rotates each pair by the key
// angle k*pi/d, Bob runs his network identically on both polarisations, and
// Alice undoes the rotation and keeps only the H occupations.

#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "encwalk/errors.hpp"
#include "encwalk/fock.hpp"
#include "encwalk/linalg.hpp"
#include "encwalk/state_vector.hpp"

namespace encwalk {

class PolarizationKey {
 public:
  PolarizationKey(int k, int d) : k_(k), d_(d) {
    if (d < 1) throw ValidationError("PolarizationKey: divisions d must be at least 1");
    if (k < 0 || k >= d) {
      throw ValidationError("PolarizationKey: k = " + std::to_string(k) + " outside [0, " + std::to_string(d - 1) + "]");
    }
  }
  int k() const { return k_; }
  int d() const { return d_; }
  double angle() const { return k_ * std::numbers::pi / d_; }

 private:
  int k_;
  int d_;
};

/// k uniform on {0, ..., d - 1}.
inline PolarizationKey keygen(int d, Rng& rng) {
  if (d < 1) throw ValidationError("keygen: divisions d must be at least 1");
  std::uniform_int_distribution<int> pick(0, d - 1);
  return PolarizationKey(pick(rng), d);
}

/// Bit j = 1 means a photon in logical mode j.
class LogicalInput {
 public:
  explicit LogicalInput(std::vector<int> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw ValidationError("LogicalInput: need at least one mode");
    for (int b : bits_) {
      if (b != 0 && b != 1) throw ValidationError("LogicalInput: bits must be 0 or 1");
    }
  }

  static LogicalInput parse(const std::string& text) {
    std::vector<int> bits;
    for (char ch : text) {
      if (ch != '0' && ch != '1') throw ValidationError("LogicalInput: '" + text + "' is not a bitstring");
      bits.push_back(ch - '0');
    }
    return LogicalInput(std::move(bits));
  }

  std::size_t size() const { return bits_.size(); }
  int operator[](std::size_t j) const { return bits_[j]; }
  const std::vector<int>& bits() const { return bits_; }
  int photon_count() const {
    int p = 0;
    for (int b : bits_) p += b;
    return p;
  }
  std::string to_string() const {
    std::string s;
    for (int b : bits_) s += static_cast<char>('0' + b);
    return s;
  }
  /// The unencoded boson-sampling input |b_1, ..., b_m>.
  FockBasisState as_fock_state() const { return FockBasisState(bits_); }

 private:
  std::vector<int> bits_;
};

/// R(theta) = [[cos, -sin], [sin, cos]] acting on (H, V) amplitude columns.
inline Eigen::Matrix2d rotation_matrix(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

/// m photons over 2m interleaved H/V modes.
class PolarizedState {
 public:
  explicit PolarizedState(FockStateVector v) : v_(std::move(v)) {
    if (v_.mode_count() % 2 != 0 || v_.mode_count() == 0) {
      throw ValidationError("PolarizedState: need an even, nonzero number of physical modes");
    }
    if (static_cast<std::size_t>(v_.photons()) != v_.mode_count() / 2) {
      throw ValidationError("PolarizedState: photon count must equal the logical mode count");
    }
    if (std::abs(v_.norm() - 1.0) > 1e-12) throw ValidationError("PolarizedState: state is not normalized");
  }

  std::size_t logical_modes() const { return v_.mode_count() / 2; }
  const FockStateVector& vector() const { return v_; }

  /// Applies R(theta) to every (H_j, V_j) pair.
  PolarizedState rotated(double theta) const {
    // On creation operators R acts as its transpose: H^dag -> cos H^dag + sin V^dag.
    const ComplexMatrix t = rotation_matrix(theta).transpose().cast<Complex>();
    FockStateVector out = v_;
    for (std::size_t j = 0; j < logical_modes(); ++j) out.apply_two_mode(2 * j, 2 * j + 1, t);
    return PolarizedState(std::move(out));
  }

 private:
  FockStateVector v_;
};

/// H_j for bit 1, V_j for bit 0.
inline PolarizedState encode_input(const LogicalInput& bits) {
  std::vector<int> occ(2 * bits.size(), 0);
  for (std::size_t j = 0; j < bits.size(); ++j) occ[2 * j + (bits[j] == 1 ? 0 : 1)] = 1;
  return PolarizedState(FockStateVector::basis_state(FockBasisState(std::move(occ))));
}

inline PolarizedState encrypt(const PolarizedState& state, const PolarizationKey& key) {
  return state.rotated(key.angle());
}

/// U on the H modes and U on the V modes, interleaved: L(2i+s, 2j+s) = U(i, j).
inline Interferometer lift_network(const Interferometer& u) {
  const auto m = static_cast<Eigen::Index>(u.mode_count());
  ComplexMatrix l = ComplexMatrix::Zero(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      l(2 * i, 2 * j) = u.matrix()(i, j);
      l(2 * i + 1, 2 * j + 1) = u.matrix()(i, j);
    }
  }
  return Interferometer(std::move(l), kInputUnitarityTol);
}

/// Bob's side of the protocol. It sees only the received state and his own
/// network.
inline PolarizedState bob_evaluate(const PolarizedState& received, const Interferometer& u) {
  if (received.logical_modes() != u.mode_count()) {
    throw ValidationError("bob_evaluate: state has " + std::to_string(received.logical_modes()) +
                          " logical modes, network has " + std::to_string(u.mode_count()));
  }
  return PolarizedState(evolve(received.vector(), lift_network(u)));
}

/// Undoes the key rotation, then reports the distribution of H occupations
/// with V photons discarded. Any key may be supplied; a wrong key yields the
/// distribution an eavesdropper or careless receiver would see.
inline OutputDistribution decrypt_measure(const PolarizedState& output, const PolarizationKey& key) {
  const PolarizedState plain = output.rotated(-key.angle());
  const FockStateVector& v = plain.vector();
  const std::size_t m = plain.logical_modes();
  std::map<FockBasisState, double> marginal;
  std::vector<int> h(m);
  for (std::size_t i = 0; i < v.basis().size(); ++i) {
    const auto& occ = v.basis().state(i).occupations();
    for (std::size_t j = 0; j < m; ++j) h[j] = occ[2 * j];
    marginal[FockBasisState(h)] += std::norm(v.amplitudes()(static_cast<Eigen::Index>(i)));
  }
  OutputDistribution d;
  for (const auto& [s, p] : marginal) {
    d.states.push_back(s);
    d.probabilities.push_back(p);
  }
  return d;
}

/// Record of one protocol round. `messages` holds exactly the two states that
/// cross between the parties.
struct Transcript {
  LogicalInput alice_in;
  int d = 1;
  int key = 0;
  std::vector<PolarizedState> messages;
  FockBasisState result;

  nlohmann::json to_json(bool redact_key = false) const {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto& s : messages) msgs.push_back(state_to_json(s.vector()));
    nlohmann::json j;
    j["alice_in"] = alice_in.to_string();
    j["d"] = d;
    if (!redact_key) j["key"] = key;
    j["messages"] = std::move(msgs);
    j["result"] = result.occupations();
    return j;
  }
};

struct RoundResult {
  FockBasisState pattern;
  Transcript transcript;
};

/// keygen -> encode -> encrypt -> Bob -> decrypt_measure -> sample.
inline RoundResult run_round(const LogicalInput& bits, int d, const Interferometer& u, Rng& rng) {
  if (bits.size() != u.mode_count()) {
    throw ValidationError("run_round: input has " + std::to_string(bits.size()) + " modes, network has " +
                          std::to_string(u.mode_count()));
  }
  const PolarizationKey key = keygen(d, rng);
  PolarizedState to_bob = encrypt(encode_input(bits), key);
  PolarizedState to_alice = bob_evaluate(to_bob, u);
  const DistributionSampler sampler(decrypt_measure(to_alice, key));
  FockBasisState pattern = sampler(rng);
  Transcript t{bits, d, key.k(), {std::move(to_bob), std::move(to_alice)}, pattern};
  return RoundResult{std::move(pattern), std::move(t)};
}

/// (1/d) sum_k |psi_k><psi_k| for the encrypted encodings of `bits`, over the
/// basis of the encoded state.
inline ComplexMatrix encrypted_ensemble_density(const LogicalInput& bits, int d) {
  const PolarizedState base = encode_input(bits);
  const auto n = static_cast<Eigen::Index>(base.vector().basis().size());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < d; ++k) {
    const Eigen::VectorXcd psi = encrypt(base, PolarizationKey(k, d)).vector().amplitudes();
    rho += psi * psi.adjoint();
  }
  return rho / static_cast<double>(d);
}

}  // namespace encwalk
