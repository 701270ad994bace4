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


#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "encwalk/errors.hpp"

namespace encwalk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Construction-time unitarity tolerance for matrices this library builds.
inline constexpr double kUnitarityTol = 1e-12;
/// Acceptance tolerance for unitaries supplied by callers.
inline constexpr double kInputUnitarityTol = 1e-10;

/// max_ij |(U^dagger U - I)_ij|
inline double unitarity_error(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  const ComplexMatrix gram = u.adjoint() * u;
  return (gram - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

// Matrices travel as row-major nested arrays of [re, im] pairs.
inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("matrix JSON must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return ComplexMatrix(0, 0);
  if (!j[0].is_array()) throw ValidationError("matrix JSON rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix JSON is ragged at row " + std::to_string(r));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ValidationError("matrix entries must be [re, im] pairs");
      }
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
        throw ValidationError("matrix entries must be finite");
      }
    }
  }
  return m;
}

}  // namespace encwalk
