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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsubst/angle.hpp"
#include "qsubst/circuit.hpp"

namespace qsubst {

/// Diagnostic for QASM input outside the supported subset.
class QasmError : public std::runtime_error {
 public:
  enum class Kind {
    Syntax,
    UnsupportedVersion,
    UnsupportedGate,
    UnsupportedStatement,
    OperandOutOfRange,
    Measurement,
  };

  QasmError(Kind kind, int line, int column, const std::string& message);

  Kind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int line_;
  int column_;
};

/// One gate statement, e.g. `u1(pi/2) q[0];` or `cx q[0],q[1];`.
struct GateApplication {
  std::string gate;
  std::vector<Angle> angles;
  std::vector<int> qubits;
  int line = 0;
  int column = 0;
};

struct QasmProgram {
  std::string register_name;
  int register_size = 0;
  std::vector<GateApplication> gates;
};

/// Parses the supported OpenQASM 2.0 subset: the version header, optional
/// includes, a single qreg, the built-in `iswap` definition block, and gate
/// statements from {id, x, y, z, h, s, sdg, t, tdg, cx, cy, cz, swap,
/// iswap, u1, u2, u3} with literal angle expressions.
QasmProgram parse_program(std::string_view text);

/// Schedules the gates into layers as soon as possible: each gate lands in
/// the earliest layer after the last one used on any of its qubits.
CircuitGrid to_grid(const QasmProgram& program);

CircuitGrid parse_qasm(std::string_view text);

/// Layers in order, qubits ascending, identity cells omitted. Throws
/// std::invalid_argument naming the gate if a gate has no QASM form.
std::string emit_qasm(const CircuitGrid& c);

}  // namespace qsubst
