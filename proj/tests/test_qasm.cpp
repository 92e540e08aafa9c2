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

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "qsubst/qasm.hpp"

using namespace qsubst;
using fixtures::grid;

namespace {

const std::string kHeader = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";

std::string program(int n, const std::string& body) {
  return kHeader + "qreg q[" + std::to_string(n) + "];\n" + body;
}

QasmError::Kind error_kind(const std::string& text, int* line = nullptr, int* col = nullptr) {
  try {
    parse_qasm(text);
  } catch (const QasmError& e) {
    if (line) *line = e.line();
    if (col) *col = e.column();
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return QasmError::Kind::Syntax;
}

}  // namespace

TEST(QasmParse, TwoHadamardsStack) {
  const CircuitGrid c = parse_qasm(program(1, "h q[0]; h q[0];"));
  EXPECT_EQ(encode(c), "H|H");
  EXPECT_EQ(c.depth(), 2);
}

TEST(QasmParse, SandwichPacksZsIntoOneLayer) {
  const CircuitGrid c = parse_qasm(
      program(2, "h q[1];\ncx q[0],q[1];\nz q[0];\nz q[1];\ncx q[0],q[1];\nh q[1];\n"));
  EXPECT_EQ(encode(c), "I,H|CX:C:1,CX:T:0|Z,Z|CX:C:1,CX:T:0|I,H");
}

TEST(QasmParse, SingleCX) {
  EXPECT_EQ(parse_qasm(program(2, "cx q[0],q[1];")), grid("CX:C:1,CX:T:0"));
  EXPECT_EQ(parse_qasm(program(2, "cx q[1],q[0];")), grid("CX:T:1,CX:C:0"));
}

TEST(QasmParse, AsapSchedulingUsesEarliestFreeLayer) {
  const CircuitGrid c = parse_qasm(program(3, "h q[0]; h q[0]; x q[2]; cx q[1],q[2]; y q[0];"));
  EXPECT_EQ(encode(c), "H,I,X|H,CX:C:2,CX:T:1|Y,I,I");
}

TEST(QasmParse, AllGateTokens) {
  const CircuitGrid c = parse_qasm(program(
      2, "id q[0]; x q[0]; y q[0]; z q[0]; h q[0]; s q[0]; sdg q[0]; t q[0]; tdg q[0];\n"
         "cx q[0],q[1]; cy q[0],q[1]; cz q[0],q[1]; swap q[0],q[1]; iswap q[0],q[1];\n"
         "u1(pi/2) q[1]; u2(0,pi) q[1]; u3(pi, 0, pi) q[1];\n"));
  EXPECT_EQ(encode(c),
            "X,I|Y,I|Z,I|H,I|S,I|Sdg,I|T,I|Tdg,I|CX:C:1,CX:T:0|CY:C:1,CY:T:0|"
            "CZ:C:1,CZ:T:0|SWAP:C:1,SWAP:T:0|iSWAP:C:1,iSWAP:T:0|I,U1[pi/2]|I,U2[0;pi]|"
            "I,U3[pi;0;pi]");
}

TEST(QasmParse, CommentsIncludesAndIswapDefinition) {
  const std::string text =
      "// leading comment\nOPENQASM 2.0;\ninclude \"qelib1.inc\"; // trailing\n"
      "gate iswap a,b { s a; s b; h a; cx a,b; cx b,a; h b; }\n"
      "qreg r[2];\niswap r[0],r[1];\n";
  const QasmProgram p = parse_program(text);
  EXPECT_EQ(p.register_name, "r");
  EXPECT_EQ(p.register_size, 2);
  ASSERT_EQ(p.gates.size(), 1u);
  EXPECT_EQ(p.gates[0].line, 6);
  EXPECT_EQ(p.gates[0].column, 1);
  EXPECT_EQ(encode(to_grid(p)), "iSWAP:C:1,iSWAP:T:0");
}

TEST(QasmParse, ProgramRecordsAngles) {
  const QasmProgram p = parse_program(program(1, "u3(pi/2, -pi/4, 0.5) q[0];"));
  ASSERT_EQ(p.gates.size(), 1u);
  EXPECT_EQ(p.gates[0].gate, "u3");
  EXPECT_EQ(p.gates[0].angles,
            (std::vector<Angle>{Angle::pi_times(1, 2), Angle::pi_times(-1, 4),
                                Angle(Rational(), Rational(1, 2))}));
  EXPECT_EQ(p.gates[0].qubits, std::vector<int>{0});
}

TEST(QasmErrors, DistinctKinds) {
  using K = QasmError::Kind;
  EXPECT_EQ(error_kind("qreg q[1];\nx q[0];\n"), K::Syntax);
  EXPECT_EQ(error_kind("OPENQASM 3.0;\nqubit[1] q;\n"), K::UnsupportedVersion);
  EXPECT_EQ(error_kind(program(1, "rx(pi) q[0];")), K::UnsupportedGate);
  EXPECT_EQ(error_kind(program(1, "ccx q[0],q[1],q[2];")), K::UnsupportedGate);
  EXPECT_EQ(error_kind(program(1, "creg c[1];")), K::UnsupportedStatement);
  EXPECT_EQ(error_kind(program(1, "barrier q[0];")), K::UnsupportedStatement);
  EXPECT_EQ(error_kind(program(1, "reset q[0];")), K::UnsupportedStatement);
  EXPECT_EQ(error_kind(program(1, "x q;")), K::UnsupportedStatement);
  EXPECT_EQ(error_kind(program(1, "qreg r[1];")), K::UnsupportedStatement);
  EXPECT_EQ(error_kind(program(1, "measure q[0] -> c[0];")), K::Measurement);
  EXPECT_EQ(error_kind(program(2, "x q[2];")), K::OperandOutOfRange);
  EXPECT_EQ(error_kind(kHeader + "gate foo a { x a; }\nqreg q[1];\n"), K::UnsupportedGate);
}

TEST(QasmErrors, SyntaxProblems) {
  using K = QasmError::Kind;
  EXPECT_EQ(error_kind(program(2, "cx q[0],q[0];")), K::Syntax);
  EXPECT_EQ(error_kind(program(2, "cx q[0];")), K::Syntax);
  EXPECT_EQ(error_kind(program(1, "u1 q[0];")), K::Syntax);
  EXPECT_EQ(error_kind(program(1, "h(pi) q[0];")), K::Syntax);
  EXPECT_EQ(error_kind(program(1, "u1(theta) q[0];")), K::Syntax);
  EXPECT_EQ(error_kind(program(1, "u1(pi q[0];")), K::Syntax);
  EXPECT_EQ(error_kind(program(1, "x r[0];")), K::Syntax);
  EXPECT_EQ(error_kind(program(1, "x q[0]")), K::Syntax);
  EXPECT_EQ(error_kind(kHeader + "x q[0];\nqreg q[1];\n"), K::Syntax);
  EXPECT_EQ(error_kind(kHeader), K::Syntax);
  EXPECT_EQ(error_kind(kHeader + "include \"qelib1.inc;\n"), K::Syntax);
}

TEST(QasmErrors, LineAndColumn) {
  int line = 0, col = 0;
  error_kind(program(2, "h q[0];\n  cx q[0],q[7];\n"), &line, &col);
  EXPECT_EQ(line, 5);
  EXPECT_EQ(col, 13);
  error_kind(program(1, "h q[0];\nu1(pi/0) q[0];\n"), &line, &col);
  EXPECT_EQ(line, 5);
  EXPECT_EQ(col, 8);
  error_kind("OPENQASM 3;\n", &line, &col);
  EXPECT_EQ(line, 1);
  EXPECT_EQ(col, 10);
  try {
    parse_qasm(program(1, "measure q[0] -> c[0];"));
  } catch (const QasmError& e) {
    EXPECT_EQ(std::string(e.what()), "qasm:4:1: measurement is not supported");
  }
}

TEST(QasmEmit, SingleX) {
  const CircuitGrid c = grid("I,X");
  EXPECT_EQ(emit_qasm(c), kHeader + "qreg q[2];\nx q[1];\n");
}

TEST(QasmEmit, TwoQubitGateOnceAtFirstHalf) {
  EXPECT_EQ(emit_qasm(grid("CX:T:1,CX:C:0,I|H,CZ:T:2,CZ:C:1")),
            kHeader + "qreg q[3];\ncx q[1],q[0];\nh q[0];\ncz q[2],q[1];\n");
}

TEST(QasmEmit, IswapBringsItsDefinition) {
  const std::string text = emit_qasm(grid("iSWAP:C:1,iSWAP:T:0"));
  EXPECT_EQ(text, kHeader + "gate iswap a,b { s a; s b; h a; cx a,b; cx b,a; h b; }\n" +
                      "qreg q[2];\niswap q[0],q[1];\n");
  EXPECT_EQ(parse_qasm(text), grid("iSWAP:C:1,iSWAP:T:0"));
}

TEST(QasmEmit, SingleXParsesToDepthOne) {
  const CircuitGrid c = parse_qasm(emit_qasm(grid("I,I|I,X|I,I")));
  EXPECT_EQ(c.depth(), 1);
  EXPECT_EQ(encode(c), "I,X");
}

TEST(QasmEmit, GateWithoutQasmFormIsNamed) {
  const GatePtr v = make_gate("V", 1, fixtures::to_matrix(oracle::X()));
  const CircuitGrid c(1, {Layer{Cell::single(v)}});
  try {
    emit_qasm(c);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("V"), std::string::npos);
  }
}

TEST(QasmEmit, EmptyCircuit) {
  EXPECT_EQ(emit_qasm(CircuitGrid(2)), kHeader + "qreg q[2];\n");
  EXPECT_EQ(parse_qasm(emit_qasm(CircuitGrid(2))).depth(), 0);
}

TEST(QasmProperty, RoundTripPreservesUnitary) {
  std::mt19937 rng(51);
  const GateSet gs = GateSet::parse("X,Y,Z,H,S,Sdg,T,Tdg,U1[pi/4],U2[pi/2;-pi],U3[pi/3;0;pi],CX,CY,CZ,SWAP,iSWAP");
  for (int trial = 0; trial < 200; ++trial) {
    const CircuitGrid c = fixtures::random_grid(rng, 2 + trial % 2, 4, gs, 0.4);
    const std::string text = emit_qasm(c);
    const CircuitGrid back = parse_qasm(text);
    ASSERT_EQ(back.qubits(), c.qubits());
    ASSERT_LE(max_abs_diff(circuit_unitary(back), circuit_unitary(c)), 1e-12) << text;
    ASSERT_LE(back.depth(), c.depth());
    ASSERT_EQ(emit_qasm(c), text);
  }
}

TEST(QasmProperty, AsapKeepsGateCountAndBoundsDepth) {
  std::mt19937 rng(52);
  const char* ones[] = {"x", "h", "s", "t"};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 4;
    std::string body;
    int lines = 0;
    for (int k = 0; k < 1 + trial % 9; ++k) {
      const int a = static_cast<int>(rng() % n);
      if (n > 1 && rng() % 3 == 0) {
        const int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
        body += "cx q[" + std::to_string(a) + "],q[" + std::to_string(b) + "];\n";
      } else {
        body += std::string(ones[rng() % 4]) + " q[" + std::to_string(a) + "];\n";
      }
      ++lines;
    }
    const QasmProgram p = parse_program(program(n, body));
    const CircuitGrid c = to_grid(p);
    int gates = 0;
    for (const Layer& l : c.layers())
      for (const Cell& cell : l) gates += cell.is_identity() ? 0 : 1;
    int expected = 0;
    for (const auto& g : p.gates) expected += static_cast<int>(g.qubits.size());
    ASSERT_EQ(gates, expected);
    ASSERT_LE(c.depth(), lines);
    // The schedule must not reorder gates that share a qubit.
    std::vector<oracle::Op> ops;
    for (const auto& g : p.gates) {
      const oracle::Mat m = g.gate == "x"   ? oracle::X()
                            : g.gate == "h" ? oracle::H()
                            : g.gate == "s" ? oracle::S()
                            : g.gate == "t" ? oracle::T()
                                            : oracle::CX();
      ops.push_back({m, g.qubits});
    }
    ASSERT_LE(max_abs_diff(circuit_unitary(c), fixtures::to_matrix(oracle::simulate(ops, n))), 1e-12);
  }
}
