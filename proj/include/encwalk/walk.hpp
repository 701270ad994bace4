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


// Discrete-time multi-walker quantum walks compiled to interferometers.
//
// Each (vertex, coin direction) slot is one optical mode. The coin C and the
// step S act on single-walker state vectors, psi -> S C psi, so a walk of t
// steps is W = (S C)^t in the state-vector picture. In the creation-operator
// convention of fock.hpp the corresponding interferometer is W^T: a walker
// starting in mode i ends in mode j with amplitude W(j, i).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "encwalk/errors.hpp"
#include "encwalk/fock.hpp"
#include "encwalk/linalg.hpp"

namespace encwalk {

struct Slot {
  std::size_t vertex = 0;
  std::size_t direction = 0;
  auto operator<=>(const Slot&) const = default;
};

/// slots[v][c] is the slot a walker at (v, c) moves to under the step.
class WalkGraph {
 public:
  explicit WalkGraph(std::vector<std::vector<Slot>> slots) : slots_(std::move(slots)) {
    if (slots_.empty()) throw ValidationError("WalkGraph: no vertices");
    offsets_.reserve(slots_.size() + 1);
    offsets_.push_back(0);
    for (std::size_t v = 0; v < slots_.size(); ++v) {
      if (slots_[v].empty()) throw ValidationError("WalkGraph: vertex " + std::to_string(v) + " has degree 0");
      offsets_.push_back(offsets_.back() + slots_[v].size());
    }
    std::vector<bool> hit(offsets_.back(), false);
    for (std::size_t v = 0; v < slots_.size(); ++v) {
      for (std::size_t c = 0; c < slots_[v].size(); ++c) {
        const Slot& s = slots_[v][c];
        if (s.vertex >= slots_.size() || s.direction >= slots_[s.vertex].size()) {
          throw ValidationError("WalkGraph: slot (" + std::to_string(v) + ", " + std::to_string(c) +
                                ") targets a nonexistent slot");
        }
        const std::size_t target = offsets_[s.vertex] + s.direction;
        if (hit[target]) {
          throw ValidationError("WalkGraph: step mapping is not a permutation (slot (" +
                                std::to_string(s.vertex) + ", " + std::to_string(s.direction) +
                                ") targeted twice)");
        }
        hit[target] = true;
      }
    }
  }

  /// Reflecting line: direction 0 moves left, 1 moves right, and each end
  /// turns the walker around in place.
  static WalkGraph line(std::size_t n) {
    if (n == 0) throw ValidationError("WalkGraph::line: need at least one vertex");
    std::vector<std::vector<Slot>> s(n, std::vector<Slot>(2));
    for (std::size_t v = 0; v < n; ++v) {
      s[v][0] = v == 0 ? Slot{0, 1} : Slot{v - 1, 0};
      s[v][1] = v + 1 == n ? Slot{n - 1, 0} : Slot{v + 1, 1};
    }
    return WalkGraph(std::move(s));
  }

  static WalkGraph cycle(std::size_t n) {
    if (n == 0) throw ValidationError("WalkGraph::cycle: need at least one vertex");
    std::vector<std::vector<Slot>> s(n, std::vector<Slot>(2));
    for (std::size_t v = 0; v < n; ++v) {
      s[v][0] = Slot{(v + n - 1) % n, 0};
      s[v][1] = Slot{(v + 1) % n, 1};
    }
    return WalkGraph(std::move(s));
  }

  std::size_t vertex_count() const { return slots_.size(); }
  std::size_t degree(std::size_t v) const { return slots_.at(v).size(); }
  std::size_t mode_count() const { return offsets_.back(); }
  const Slot& target(std::size_t v, std::size_t c) const { return slots_.at(v).at(c); }
  const std::vector<std::vector<Slot>>& slots() const { return slots_; }

  std::size_t mode_index(std::size_t v, std::size_t c) const {
    if (v >= slots_.size()) {
      throw ValidationError("mode_index: vertex " + std::to_string(v) + " out of range");
    }
    if (c >= slots_[v].size()) {
      throw ValidationError("mode_index: direction " + std::to_string(c) + " out of range at vertex " +
                            std::to_string(v));
    }
    return offsets_[v] + c;
  }

  Slot slot_of(std::size_t mode) const {
    if (mode >= mode_count()) throw ValidationError("slot_of: mode out of range");
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), mode);
    const auto v = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return Slot{v, mode - offsets_[v]};
  }

  /// Step operator on single-walker state vectors: S(target, source) = 1.
  ComplexMatrix step_matrix() const {
    const auto n = static_cast<Eigen::Index>(mode_count());
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (std::size_t v = 0; v < slots_.size(); ++v) {
      for (std::size_t c = 0; c < slots_[v].size(); ++c) {
        const Slot& t = slots_[v][c];
        s(static_cast<Eigen::Index>(mode_index(t.vertex, t.direction)), static_cast<Eigen::Index>(mode_index(v, c))) = 1.0;
      }
    }
    return s;
  }

 private:
  std::vector<std::vector<Slot>> slots_;
  std::vector<std::size_t> offsets_;
};

inline std::size_t mode_index(std::size_t v, std::size_t c, const WalkGraph& g) { return g.mode_index(v, c); }

inline ComplexMatrix hadamard_coin() {
  ComplexMatrix h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return h;
}

/// Graph, one coin block per vertex (block(c', c) mixes direction c into c'),
/// and a step count.
class WalkSpec {
 public:
  WalkSpec(WalkGraph graph, std::vector<ComplexMatrix> coins, std::size_t steps)
      : graph_(std::move(graph)), coins_(std::move(coins)), steps_(steps) {
    if (coins_.size() != graph_.vertex_count()) {
      throw ValidationError("WalkSpec: expected " + std::to_string(graph_.vertex_count()) + " coin blocks, got " +
                            std::to_string(coins_.size()));
    }
    for (std::size_t v = 0; v < coins_.size(); ++v) {
      const auto d = static_cast<Eigen::Index>(graph_.degree(v));
      if (coins_[v].rows() != d || coins_[v].cols() != d) {
        throw ValidationError("WalkSpec: coin block at vertex " + std::to_string(v) + " must be " +
                              std::to_string(d) + "x" + std::to_string(d));
      }
      if (!(unitarity_error(coins_[v]) <= kUnitarityTol)) {
        throw ValidationError("WalkSpec: coin block at vertex " + std::to_string(v) + " is not unitary");
      }
    }
  }

  /// Same coin at every vertex.
  static WalkSpec uniform(WalkGraph graph, const ComplexMatrix& coin, std::size_t steps) {
    std::vector<ComplexMatrix> coins(graph.vertex_count(), coin);
    return WalkSpec(std::move(graph), std::move(coins), steps);
  }

  const WalkGraph& graph() const { return graph_; }
  const std::vector<ComplexMatrix>& coins() const { return coins_; }
  std::size_t steps() const { return steps_; }
  std::size_t mode_count() const { return graph_.mode_count(); }

  WalkSpec with_steps(std::size_t t) const { return WalkSpec(graph_, coins_, t); }

  ComplexMatrix coin_matrix() const {
    const auto n = static_cast<Eigen::Index>(mode_count());
    ComplexMatrix c = ComplexMatrix::Zero(n, n);
    for (std::size_t v = 0; v < coins_.size(); ++v) {
      const auto off = static_cast<Eigen::Index>(graph_.mode_index(v, 0));
      const auto d = coins_[v].rows();
      c.block(off, off, d, d) = coins_[v];
    }
    return c;
  }

 private:
  WalkGraph graph_;
  std::vector<ComplexMatrix> coins_;
  std::size_t steps_;
};

/// (S C)^t acting on single-walker state vectors.
inline ComplexMatrix walk_operator(const WalkSpec& spec) {
  const ComplexMatrix sc = spec.graph().step_matrix() * spec.coin_matrix();
  const auto n = static_cast<Eigen::Index>(spec.mode_count());
  ComplexMatrix result = ComplexMatrix::Identity(n, n);
  ComplexMatrix base = sc;
  for (std::size_t t = spec.steps(); t > 0; t >>= 1) {
    if (t & 1U) result = result * base;
    if (t > 1) base = base * base;
  }
  return result;
}

/// The walk as an interferometer on creation operators: (S C)^t transposed.
inline Interferometer walk_unitary(const WalkSpec& spec) {
  return Interferometer(walk_operator(spec).transpose(), kUnitarityTol);
}

inline OutputDistribution walk_distribution(const WalkSpec& spec, const FockBasisState& walkers,
                                            const EnumerationOptions& opts = {}) {
  return output_distribution(walk_unitary(spec), walkers, opts);
}

inline nlohmann::json graph_to_json(const WalkGraph& g) {
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& vs : g.slots()) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& s : vs) row.push_back({s.vertex, s.direction});
    slots.push_back(std::move(row));
  }
  return {{"vertices", g.vertex_count()}, {"slots", std::move(slots)}};
}

inline WalkGraph graph_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("slots")) throw ValidationError("walk graph JSON needs a 'slots' array");
  std::vector<std::vector<Slot>> slots;
  for (const auto& row : j.at("slots")) {
    std::vector<Slot> vs;
    for (const auto& s : row) {
      if (!s.is_array() || s.size() != 2) throw ValidationError("walk graph slots must be [vertex, slot] pairs");
      vs.push_back(Slot{s[0].get<std::size_t>(), s[1].get<std::size_t>()});
    }
    slots.push_back(std::move(vs));
  }
  if (j.contains("vertices") && j.at("vertices").get<std::size_t>() != slots.size()) {
    throw ValidationError("walk graph JSON: 'vertices' disagrees with the slot table");
  }
  return WalkGraph(std::move(slots));
}

/// {"graph": {...}, "coins": [matrix, ...], "steps": t}
inline nlohmann::json walk_to_json(const WalkSpec& spec) {
  nlohmann::json coins = nlohmann::json::array();
  for (const auto& c : spec.coins()) coins.push_back(matrix_to_json(c));
  return {{"graph", graph_to_json(spec.graph())}, {"coins", std::move(coins)}, {"steps", spec.steps()}};
}

inline WalkSpec walk_from_json(const nlohmann::json& j) {
  WalkGraph g = graph_from_json(j.at("graph"));
  std::vector<ComplexMatrix> coins;
  for (const auto& c : j.at("coins")) coins.push_back(matrix_from_json(c));
  return WalkSpec(std::move(g), std::move(coins), j.value("steps", std::size_t{0}));
}

}  // namespace encwalk
