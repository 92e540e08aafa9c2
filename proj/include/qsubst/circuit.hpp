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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsubst/gates.hpp"
#include "qsubst/matrix.hpp"

namespace qsubst {

/// A circuit grid violates one of its structural rules (unpaired or
/// mismatched two-qubit halves, wrong arity, bad shape).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Which half of a two-qubit gate a cell holds. `First` is the control of a
/// controlled gate (CXC), `Second` the target (CXT).
enum class HalfRole { First, Second };

/// One position of the grid: either a single-qubit gate, or one half of a
/// two-qubit gate together with the qubit holding the other half.
struct Cell {
  GatePtr gate;
  std::optional<HalfRole> role;
  int partner = -1;

  static Cell single(GatePtr g) { return Cell{std::move(g), std::nullopt, -1}; }
  static Cell half(GatePtr g, HalfRole r, int partner) {
    return Cell{std::move(g), r, partner};
  }

  bool is_half() const { return role.has_value(); }
  bool is_identity() const;

  friend bool operator==(const Cell& a, const Cell& b) {
    return a.role == b.role && a.partner == b.partner &&
           (a.gate == b.gate ||
            (a.gate && b.gate && a.gate->name == b.gate->name));
  }
};

using Layer = std::vector<Cell>;

/// A circuit as a grid of `depth` layers by `qubits` cells. Empty positions
/// hold the identity gate.
class CircuitGrid {
 public:
  explicit CircuitGrid(int qubits);
  /// Throws StructuralError if any layer does not have exactly `qubits` cells.
  CircuitGrid(int qubits, std::vector<Layer> layers);

  /// `depth` layers of identity.
  static CircuitGrid identity(int qubits, int depth, const GatePtr& id);

  int qubits() const { return qubits_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(int l) const { return layers_.at(l); }
  const Cell& cell(int l, int q) const { return layers_.at(l).at(q); }

  void set_cell(int l, int q, Cell c) { layers_.at(l).at(q) = std::move(c); }
  void append_layer(Layer layer);
  /// Drops every layer whose cells are all identity.
  void erase_identity_layers();

  friend bool operator==(const CircuitGrid&, const CircuitGrid&) = default;

 private:
  int qubits_;
  std::vector<Layer> layers_;
};

/// One broken structural rule, located by layer and qubit.
struct Violation {
  int layer;
  int qubit;
  std::string rule;
};

/// Empty iff every two-qubit half has its partner in the same layer with the
/// same gate and the opposite role, every cell holds a gate of matching
/// arity, and every partner index is in range and not the cell itself.
std::vector<Violation> validate(const CircuitGrid& c);
std::vector<Violation> validate_layer(const Layer& layer, int layer_index = 0);

/// Unitary of one layer on `qubits` qubits (qubit 0 most significant).
ComplexMatrix layer_unitary(const Layer& layer, int qubits);

/// U = L_m ... L_2 L_1, the first layer being applied first.
ComplexMatrix circuit_unitary(const CircuitGrid& c);

/// Number of layers that hold at least one non-identity cell.
int effective_depth(const CircuitGrid& c);
bool is_identity_layer(const Layer& layer);

/// Text form: layers joined by '|', cells by ','. A single-qubit cell is the
/// gate name; a two-qubit half is "NAME:C:p" or "NAME:T:p" with p the
/// partner qubit.
std::string encode(const CircuitGrid& c);
std::string encode_layer(const Layer& layer);

class DecodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Inverse of encode, resolving names against `gates`. Throws DecodeError
/// for unknown gates or a ragged grid.
CircuitGrid decode(std::string_view text, const GateSet& gates);

}  // namespace qsubst
