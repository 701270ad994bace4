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


// Pure states with a fixed photon number, stored as dense amplitudes over the
// lexicographically enumerated Fock basis, and their evolution through
// networks one two-mode element at a time.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "encwalk/errors.hpp"
#include "encwalk/fock.hpp"
#include "encwalk/linalg.hpp"
#include "encwalk/reck.hpp"

namespace encwalk {

class FockBasis {
 public:
  FockBasis(std::size_t modes, int photons, std::uint64_t cap = kDefaultStateCap)
      : modes_(modes), photons_(photons), states_(enumerate_fock_states(modes, photons, cap)) {
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i].occupations(), i);
  }

  std::size_t modes() const { return modes_; }
  int photons() const { return photons_; }
  std::size_t size() const { return states_.size(); }
  const FockBasisState& state(std::size_t i) const { return states_[i]; }
  const std::vector<FockBasisState>& states() const { return states_; }

  std::size_t index_of(const std::vector<int>& occupations) const {
    const auto it = index_.find(occupations);
    if (it == index_.end()) throw ValidationError("FockBasis: configuration not in basis");
    return it->second;
  }

 private:
  std::size_t modes_;
  int photons_;
  std::vector<FockBasisState> states_;
  std::map<std::vector<int>, std::size_t> index_;
};

class FockStateVector {
 public:
  FockStateVector(std::shared_ptr<const FockBasis> basis, Eigen::VectorXcd amplitudes)
      : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != basis_->size()) {
      throw ValidationError("FockStateVector: amplitude count does not match basis size");
    }
  }

  static FockStateVector basis_state(const FockBasisState& s, std::uint64_t cap = kDefaultStateCap) {
    auto basis = std::make_shared<const FockBasis>(s.mode_count(), s.total_photons(), cap);
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
    amps(static_cast<Eigen::Index>(basis->index_of(s.occupations()))) = 1.0;
    return FockStateVector(std::move(basis), std::move(amps));
  }

  const FockBasis& basis() const { return *basis_; }
  const std::shared_ptr<const FockBasis>& basis_ptr() const { return basis_; }
  std::size_t mode_count() const { return basis_->modes(); }
  int photons() const { return basis_->photons(); }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex amplitude(const FockBasisState& s) const {
    return amps_(static_cast<Eigen::Index>(basis_->index_of(s.occupations())));
  }
  double norm() const { return amps_.norm(); }

  Complex inner(const FockStateVector& other) const {
    if (other.basis_->modes() != basis_->modes() || other.basis_->photons() != basis_->photons()) {
      throw ValidationError("FockStateVector::inner: different spaces");
    }
    return amps_.dot(other.amps_);
  }

  /// Applies a two-mode transformation on (mode_a, mode_b) given in the
  /// creation-operator convention:
  ///   a^dag -> t(0,0) a^dag + t(0,1) b^dag,  b^dag -> t(1,0) a^dag + t(1,1) b^dag.
  void apply_two_mode(std::size_t mode_a, std::size_t mode_b, const ComplexMatrix& t) {
    const std::size_t m = basis_->modes();
    if (mode_a >= m || mode_b >= m || mode_a == mode_b || t.rows() != 2 || t.cols() != 2) {
      throw ValidationError("apply_two_mode: bad mode pair or block shape");
    }
    const int p = basis_->photons();
    // transfer[N](u, x): amplitude of (u, N-u) from (x, N-x).
    std::vector<ComplexMatrix> transfer;
    transfer.reserve(static_cast<std::size_t>(p) + 1);
    for (int total = 0; total <= p; ++total) transfer.push_back(two_mode_transfer(t, total));

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(amps_.size());
    std::vector<int> occ;
    for (std::size_t i = 0; i < basis_->size(); ++i) {
      const Complex amp = amps_(static_cast<Eigen::Index>(i));
      if (amp == Complex(0.0, 0.0)) continue;
      occ = basis_->state(i).occupations();
      const int x = occ[mode_a];
      const int total = x + occ[mode_b];
      const ComplexMatrix& tr = transfer[static_cast<std::size_t>(total)];
      for (int u = 0; u <= total; ++u) {
        const Complex c = tr(u, x);
        if (c == Complex(0.0, 0.0)) continue;
        occ[mode_a] = u;
        occ[mode_b] = total - u;
        out(static_cast<Eigen::Index>(basis_->index_of(occ))) += c * amp;
      }
    }
    amps_ = std::move(out);
  }

  void apply_phase(std::size_t mode, double phase) {
    if (mode >= basis_->modes()) throw ValidationError("apply_phase: mode out of range");
    for (std::size_t i = 0; i < basis_->size(); ++i) {
      const int n = basis_->state(i)[mode];
      if (n != 0) amps_(static_cast<Eigen::Index>(i)) *= std::polar(1.0, phase * n);
    }
  }

  void apply(const NetworkElement& e) {
    if (const auto* mix = std::get_if<MixerElement>(&e)) {
      apply_two_mode(mix->mode, mix->mode + 1, mix->block());
    } else {
      const auto& ph = std::get<PhaseElement>(e);
      apply_phase(ph.mode, ph.phase);
    }
  }

  void apply(const ReckNetwork& net) {
    if (net.mode_count != basis_->modes()) throw ValidationError("apply: network mode count mismatch");
    for (const auto& e : net.elements) apply(e);
  }

  /// Probability distribution over the basis (states in basis order).
  OutputDistribution distribution() const {
    OutputDistribution d;
    d.states = basis_->states();
    d.amplitudes.assign(amps_.data(), amps_.data() + amps_.size());
    d.probabilities.resize(d.states.size());
    for (std::size_t i = 0; i < d.states.size(); ++i) d.probabilities[i] = std::norm(d.amplitudes[i]);
    return d;
  }

 private:
  static ComplexMatrix two_mode_transfer(const ComplexMatrix& t, int total) {
    const auto n = static_cast<Eigen::Index>(total) + 1;
    ComplexMatrix tr = ComplexMatrix::Zero(n, n);
    std::vector<double> fact(static_cast<std::size_t>(total) + 1, 1.0);
    for (int i = 1; i <= total; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i) - 1] * i;
    auto binom = [&](int a, int b) {
      return fact[static_cast<std::size_t>(a)] / (fact[static_cast<std::size_t>(b)] * fact[static_cast<std::size_t>(a - b)]);
    };
    auto ipow = [](Complex z, int e) {
      Complex r(1.0, 0.0);
      for (int i = 0; i < e; ++i) r *= z;
      return r;
    };
    for (int x = 0; x <= total; ++x) {
      const int y = total - x;
      // (t00 a + t01 b)^x (t10 a + t11 b)^y, k of a from the first, l from the second.
      for (int k = 0; k <= x; ++k) {
        for (int l = 0; l <= y; ++l) {
          const int u = k + l;
          const Complex coeff = binom(x, k) * binom(y, l) * ipow(t(0, 0), k) * ipow(t(0, 1), x - k) *
                                ipow(t(1, 0), l) * ipow(t(1, 1), y - l);
          tr(u, x) += coeff * std::sqrt(fact[static_cast<std::size_t>(u)] * fact[static_cast<std::size_t>(total - u)] /
                                        (fact[static_cast<std::size_t>(x)] * fact[static_cast<std::size_t>(y)]));
        }
      }
    }
    return tr;
  }

  std::shared_ptr<const FockBasis> basis_;
  Eigen::VectorXcd amps_;
};

/// Evolves a state through an interferometer by applying its triangular
/// decomposition element by element.
inline FockStateVector evolve(FockStateVector state, const Interferometer& u) {
  if (state.mode_count() != u.mode_count()) {
    throw ValidationError("evolve: state has " + std::to_string(state.mode_count()) +
                          " modes, interferometer has " + std::to_string(u.mode_count()));
  }
  state.apply(reck_decompose(u));
  return state;
}

/// Nonzero amplitudes as [[occupations, [re, im]], ...] in basis order.
inline nlohmann::json state_to_json(const FockStateVector& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (std::size_t i = 0; i < s.basis().size(); ++i) {
    const Complex a = s.amplitudes()(static_cast<Eigen::Index>(i));
    if (a == Complex(0.0, 0.0)) continue;
    amps.push_back({s.basis().state(i).occupations(), {a.real(), a.imag()}});
  }
  return {{"modes", s.mode_count()}, {"photons", s.photons()}, {"amplitudes", std::move(amps)}};
}

}  // namespace encwalk
