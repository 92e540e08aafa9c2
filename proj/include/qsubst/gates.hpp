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
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsubst/angle.hpp"
#include "qsubst/matrix.hpp"

namespace qsubst {

/// Bad gate definition, unknown gate name, or malformed gate set.
class GateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A named gate with a fixed matrix acting on one or two qubits.
///
/// For two-qubit gates the matrix is written on the ordered pair
/// (first, second) with `first` as the more significant factor, so CX has
/// its control on `first`.
struct GateDef {
  std::string name;
  int arity = 1;
  ComplexMatrix matrix{2};
  /// OpenQASM 2.0 spelling including parameters, e.g. "h" or "u1(pi/2)".
  /// Empty if the gate has no QASM rendering.
  std::string qasm;
  /// True if emitting this gate requires a `gate` definition block.
  bool qasm_needs_definition = false;
  /// Set by make_gate when the matrix is I2 (within 1e-12).
  bool identity = false;
};

using GatePtr = std::shared_ptr<const GateDef>;

/// Checks arity, matrix size and unitarity (within `tol`) before wrapping.
GatePtr make_gate(std::string name, int arity, ComplexMatrix matrix,
                  std::string qasm = {}, bool qasm_needs_definition = false,
                  double tol = 1e-10);

/// Built-in gates: I X Y Z H S Sdg T Tdg (one qubit) and CX CY CZ SWAP
/// iSWAP (two qubits). Also accepts the lowercase QASM spellings ("id",
/// "sdg", "cx", ...). Returns nullptr for anything else.
GatePtr builtin_gate(std::string_view name);
const std::vector<std::string>& builtin_gate_names();

/// One-qubit gate family with a fixed number of angle parameters.
struct ParamGateTemplate {
  std::string name;       // "U1"
  std::string qasm_name;  // "u1"
  int angle_count = 1;
  std::function<ComplexMatrix(std::span<const double>)> builder;
};

const ParamGateTemplate& u1_template();
const ParamGateTemplate& u2_template();
const ParamGateTemplate& u3_template();
/// Case-insensitive lookup of "U1"/"U2"/"U3"; nullptr if not a template.
const ParamGateTemplate* find_param_template(std::string_view name);

/// Fixes the angles of a template. The gate is named deterministically from
/// the exact angles, e.g. "U1[pi/2]" or "U3[pi/2;0;pi]".
GatePtr instantiate_param_gate(const ParamGateTemplate& tmpl,
                               std::span<const Angle> angles);

/// Built-in name, QASM alias, or instantiated-template name such as
/// "U2[0;pi]". Throws GateError if the name is not recognised.
GatePtr resolve_gate(std::string_view name);

/// Ordered collection of gates with unique names. Always holds exactly one
/// single-qubit identity gate.
class GateSet {
 public:
  explicit GateSet(std::vector<GatePtr> gates);

  /// Like the constructor, but prepends the built-in I if no identity gate
  /// is present.
  static GateSet with_identity(std::vector<GatePtr> gates);

  /// Comma-separated gate names, or a preset id ("standard", "ibm-legacy").
  static GateSet parse(std::string_view spec);
  static GateSet preset(std::string_view id);

  const std::vector<GatePtr>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  const GatePtr& identity() const { return gates_[identity_index_]; }
  GatePtr find(std::string_view name) const;

  /// g: number of single-qubit gates, identity included.
  std::size_t single_qubit_count() const;
  /// t: number of two-qubit gates.
  std::size_t two_qubit_count() const;

 private:
  std::vector<GatePtr> gates_;
  std::size_t identity_index_ = 0;
};

inline bool is_identity_gate(const GateDef& g) { return g.identity; }

}  // namespace qsubst
