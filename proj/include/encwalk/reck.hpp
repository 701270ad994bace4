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


// Triangular (Reck-style) decomposition of an interferometer into nearest-
// neighbour two-mode mixers and single-mode phase shifts.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "encwalk/errors.hpp"
#include "encwalk/fock.hpp"
#include "encwalk/linalg.hpp"

namespace encwalk {

/// Mixer on modes (mode, mode + 1) with matrix
///   [[e^{i phase} cos(angle), -sin(angle)],
///    [e^{i phase} sin(angle),  cos(angle)]].
struct MixerElement {
  std::size_t mode = 0;
  double angle = 0.0;
  double phase = 0.0;

  ComplexMatrix block() const {
    ComplexMatrix t(2, 2);
    const Complex e = std::polar(1.0, phase);
    t << e * std::cos(angle), -std::sin(angle), e * std::sin(angle), std::cos(angle);
    return t;
  }
};

struct PhaseElement {
  std::size_t mode = 0;
  double phase = 0.0;
};

using NetworkElement = std::variant<MixerElement, PhaseElement>;

/// Elements listed in the order light meets them: the interferometer is the
/// left-to-right matrix product of the embedded element matrices.
struct ReckNetwork {
  std::size_t mode_count = 0;
  std::vector<NetworkElement> elements;

  std::size_t mixer_count() const {
    std::size_t n = 0;
    for (const auto& e : elements) n += std::holds_alternative<MixerElement>(e) ? 1 : 0;
    return n;
  }
};

/// Right-multiplies `u` by the embedded element matrix.
inline void apply_element_right(ComplexMatrix& u, const NetworkElement& element) {
  if (const auto* mix = std::get_if<MixerElement>(&element)) {
    const auto i = static_cast<Eigen::Index>(mix->mode);
    const ComplexMatrix t = mix->block();
    const ComplexMatrix cols = u.middleCols(i, 2) * t;
    u.middleCols(i, 2) = cols;
  } else {
    const auto& ph = std::get<PhaseElement>(element);
    u.col(static_cast<Eigen::Index>(ph.mode)) *= std::polar(1.0, ph.phase);
  }
}

inline Interferometer reck_recompose(const ReckNetwork& net, std::size_t m) {
  if (m == 0) throw ValidationError("reck_recompose: mode count must be at least 1");
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix u = ComplexMatrix::Identity(n, n);
  for (const auto& e : net.elements) {
    if (const auto* mix = std::get_if<MixerElement>(&e)) {
      if (mix->mode + 1 >= m) {
        throw ValidationError("reck_recompose: mixer on modes (" + std::to_string(mix->mode) + ", " +
                              std::to_string(mix->mode + 1) + ") out of range for " + std::to_string(m) +
                              " modes");
      }
    } else if (std::get<PhaseElement>(e).mode >= m) {
      throw ValidationError("reck_recompose: phase on mode " + std::to_string(std::get<PhaseElement>(e).mode) +
                            " out of range for " + std::to_string(m) + " modes");
    }
    apply_element_right(u, e);
  }
  return Interferometer(std::move(u), kInputUnitarityTol);
}

/// Nulls the strictly lower triangle row by row, bottom row first, with
/// column mixers; what remains is a diagonal of phases D, so
/// U = D * T_n * ... * T_1.
inline ReckNetwork reck_decompose(const Interferometer& interferometer) {
  ComplexMatrix u = interferometer.matrix();
  const auto m = static_cast<Eigen::Index>(u.rows());
  if (!(unitarity_error(u) <= kInputUnitarityTol)) {
    throw ValidationError("reck_decompose: input is not unitary");
  }
  std::vector<MixerElement> mixers;
  mixers.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
  for (Eigen::Index row = m - 1; row >= 1; --row) {
    for (Eigen::Index col = 0; col < row; ++col) {
      const Complex a = u(row, col);
      const Complex b = u(row, col + 1);
      MixerElement t;
      t.mode = static_cast<std::size_t>(col);
      if (std::abs(a) > 0.0) {
        t.angle = std::atan2(std::abs(a), std::abs(b));
        t.phase = (std::abs(b) > 0.0) ? std::arg(a) - std::arg(b) : std::arg(a);
      }
      // u <- u * T^dagger zeroes u(row, col).
      const ComplexMatrix cols = u.middleCols(col, 2) * t.block().adjoint();
      u.middleCols(col, 2) = cols;
      u(row, col) = 0.0;
      mixers.push_back(t);
    }
  }
  ReckNetwork net;
  net.mode_count = static_cast<std::size_t>(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    net.elements.emplace_back(PhaseElement{static_cast<std::size_t>(i), std::arg(u(i, i))});
  }
  for (auto it = mixers.rbegin(); it != mixers.rend(); ++it) net.elements.emplace_back(*it);
  return net;
}

}  // namespace encwalk
