// Copyright 2026 The qsubst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <random>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "qsubst/circuit.hpp"
#include "qsubst/gates.hpp"
#include "qsubst/matrix.hpp"

namespace fixtures {

inline qsubst::ComplexMatrix to_matrix(const oracle::Mat& m) {
  std::vector<qsubst::Complex> e;
  for (const auto& row : m) e.insert(e.end(), row.begin(), row.end());
  return qsubst::ComplexMatrix(m.size(), std::move(e));
}

inline oracle::Mat from_matrix(const qsubst::ComplexMatrix& m) {
  oracle::Mat out(m.dim(), std::vector<oracle::C>(m.dim()));
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = 0; c < m.dim(); ++c) out[r][c] = m(r, c);
  return out;
}

// Every built-in gate, for decoding hand-written grids.
inline const qsubst::GateSet& builtins() {
  static const qsubst::GateSet gs = [] {
    std::vector<qsubst::GatePtr> v;
    for (const std::string& n : qsubst::builtin_gate_names()) v.push_back(qsubst::builtin_gate(n));
    return qsubst::GateSet(std::move(v));
  }();
  return gs;
}

inline qsubst::CircuitGrid grid(const std::string& encoding) {
  return qsubst::decode(encoding, builtins());
}

// Time-ordered oracle operations of a grid, read straight off its cells.
inline std::vector<oracle::Op> ops_of(const qsubst::CircuitGrid& c) {
  std::vector<oracle::Op> ops;
  for (const qsubst::Layer& l : c.layers()) {
    for (int q = 0; q < c.qubits(); ++q) {
      const qsubst::Cell& cell = l[q];
      if (!cell.is_half()) {
        ops.push_back({from_matrix(cell.gate->matrix), {q}});
      } else if (*cell.role == qsubst::HalfRole::First) {
        ops.push_back({from_matrix(cell.gate->matrix), {q, cell.partner}});
      }
    }
  }
  return ops;
}

inline oracle::Mat simulate(const qsubst::CircuitGrid& c) {
  return oracle::simulate(ops_of(c), c.qubits());
}

// Random valid grid over `gates`. Each free qubit gets a two-qubit gate with
// probability `pair_rate` when a free partner exists.
inline qsubst::CircuitGrid random_grid(std::mt19937& rng, int qubits, int depth,
                                       const qsubst::GateSet& gates,
                                       double pair_rate = 0.3) {
  std::vector<qsubst::GatePtr> ones, twos;
  for (const auto& g : gates.gates()) (g->arity == 1 ? ones : twos).push_back(g);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  qsubst::CircuitGrid c(qubits);
  for (int l = 0; l < depth; ++l) {
    qsubst::Layer layer(static_cast<std::size_t>(qubits));
    std::vector<bool> taken(static_cast<std::size_t>(qubits), false);
    for (int q = 0; q < qubits; ++q) {
      if (taken[q]) continue;
      std::vector<int> free;
      for (int b = 0; b < qubits; ++b)
        if (b != q && !taken[b]) free.push_back(b);
      if (!twos.empty() && !free.empty() && coin(rng) < pair_rate) {
        const int b = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
        const auto& g = twos[std::uniform_int_distribution<std::size_t>(0, twos.size() - 1)(rng)];
        const bool first = coin(rng) < 0.5;
        using qsubst::HalfRole;
        layer[q] = qsubst::Cell::half(g, first ? HalfRole::First : HalfRole::Second, b);
        layer[b] = qsubst::Cell::half(g, first ? HalfRole::Second : HalfRole::First, q);
        taken[q] = taken[b] = true;
      } else {
        layer[q] = qsubst::Cell::single(
            ones[std::uniform_int_distribution<std::size_t>(0, ones.size() - 1)(rng)]);
        taken[q] = true;
      }
    }
    c.append_layer(std::move(layer));
  }
  return c;
}

}  // namespace fixtures
