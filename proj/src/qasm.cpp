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

#include "qsubst/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>

namespace qsubst {

namespace {

using Kind = QasmError::Kind;

// The iSWAP decomposition written out when a circuit uses iswap.
constexpr std::string_view kIswapDefinition =
    "gate iswap a,b { s a; s b; h a; cx a,b; cx b,a; h b; }\n";

struct GateInfo {
  int arity;
  int angles;
};

const std::map<std::string, GateInfo, std::less<>>& supported_gates() {
  static const std::map<std::string, GateInfo, std::less<>> table = {
      {"id", {1, 0}},  {"x", {1, 0}},     {"y", {1, 0}},     {"z", {1, 0}},
      {"h", {1, 0}},   {"s", {1, 0}},     {"sdg", {1, 0}},   {"t", {1, 0}},
      {"tdg", {1, 0}}, {"cx", {2, 0}},    {"cy", {2, 0}},    {"cz", {2, 0}},
      {"swap", {2, 0}}, {"iswap", {2, 0}}, {"u1", {1, 1}},   {"u2", {1, 2}},
      {"u3", {1, 3}},
  };
  return table;
}

enum class Tok { Ident, Number, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  const Token& peek() {
    if (!peeked_) peeked_ = scan();
    return *peeked_;
  }

  Token next() {
    Token t = peek();
    peeked_.reset();
    return t;
  }

  // Raw source text up to the ')' matching an already-consumed '('.
  // Returns the pieces separated by top-level commas with their offsets.
  std::vector<std::pair<std::string_view, std::size_t>> raw_arguments(
      const Token& open) {
    peeked_.reset();
    std::vector<std::pair<std::string_view, std::size_t>> out;
    int depth = 0;
    std::size_t start = pos_;
    for (; pos_ < src_.size(); ++pos_) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        line_start_ = pos_ + 1;
      } else if (c == '(') {
        ++depth;
      } else if (c == ')' && depth-- == 0) {
        out.emplace_back(src_.substr(start, pos_ - start), start);
        ++pos_;
        return out;
      } else if (c == ',' && depth == 0) {
        out.emplace_back(src_.substr(start, pos_ - start), start);
        start = pos_ + 1;
      }
    }
    throw QasmError(Kind::Syntax, open.line, open.column, "unclosed '('");
  }

  std::pair<int, int> position_of(std::size_t offset) const {
    int line = 1;
    std::size_t line_start = 0;
    for (std::size_t k = 0; k < offset && k < src_.size(); ++k) {
      if (src_[k] == '\n') {
        ++line;
        line_start = k + 1;
      }
    }
    return {line, static_cast<int>(offset - line_start) + 1};
  }

 private:
  Token scan() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    t.column = static_cast<int>(pos_ - line_start_) + 1;
    t.offset = pos_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        ++pos_;
      }
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '.')) {
        ++pos_;
      }
      t.kind = Tok::Number;
      t.text = std::string(src_.substr(start, pos_ - start));
    } else if (c == '"') {
      const std::size_t end = src_.find('"', pos_ + 1);
      if (end == std::string_view::npos || src_.substr(pos_, end - pos_).find('\n') !=
                                               std::string_view::npos) {
        throw QasmError(Kind::Syntax, t.line, t.column, "unterminated string");
      }
      t.kind = Tok::String;
      t.text = std::string(src_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
    } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      t.kind = Tok::Symbol;
      t.text = "->";
      pos_ += 2;
    } else {
      t.kind = Tok::Symbol;
      t.text = std::string(1, c);
      ++pos_;
    }
    return t;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        line_start_ = ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::size_t line_start_ = 0;
  std::optional<Token> peeked_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  QasmProgram parse() {
    header();
    while (lex_.peek().kind != Tok::End) statement();
    if (!have_register_) {
      throw QasmError(Kind::Syntax, 1, 1, "no qreg declared");
    }
    return std::move(program_);
  }

 private:
  [[noreturn]] static void fail(Kind kind, const Token& at, const std::string& what) {
    throw QasmError(kind, at.line, at.column, what);
  }

  Token expect_symbol(std::string_view sym) {
    Token t = lex_.next();
    if (t.kind != Tok::Symbol || t.text != sym) {
      fail(Kind::Syntax, t, "expected '" + std::string(sym) + "'" +
                                (t.kind == Tok::End ? " before end of input"
                                                    : ", found '" + t.text + "'"));
    }
    return t;
  }

  Token expect_ident() {
    Token t = lex_.next();
    if (t.kind != Tok::Ident) fail(Kind::Syntax, t, "expected an identifier");
    return t;
  }

  int expect_int() {
    Token t = lex_.next();
    if (t.kind != Tok::Number ||
        t.text.find_first_not_of("0123456789") != std::string::npos ||
        t.text.size() > 9) {
      fail(Kind::Syntax, t, "expected a non-negative integer");
    }
    return std::stoi(t.text);
  }

  void header() {
    Token t = lex_.next();
    if (t.kind != Tok::Ident || t.text != "OPENQASM") {
      fail(Kind::Syntax, t, "expected 'OPENQASM 2.0;' header");
    }
    Token v = lex_.next();
    if (v.kind != Tok::Number) fail(Kind::Syntax, v, "expected a version number");
    if (v.text != "2.0" && v.text != "2") {
      fail(Kind::UnsupportedVersion, v,
           "OpenQASM version " + v.text + " is not supported (only 2.0)");
    }
    expect_symbol(";");
  }

  void statement() {
    Token t = lex_.next();
    if (t.kind != Tok::Ident) fail(Kind::Syntax, t, "expected a statement");
    if (t.text == "include") {
      Token s = lex_.next();
      if (s.kind != Tok::String) fail(Kind::Syntax, s, "expected a file name");
      expect_symbol(";");
    } else if (t.text == "qreg") {
      if (have_register_) {
        fail(Kind::UnsupportedStatement, t, "only one qreg is supported");
      }
      program_.register_name = expect_ident().text;
      expect_symbol("[");
      program_.register_size = expect_int();
      expect_symbol("]");
      expect_symbol(";");
      if (program_.register_size < 1) fail(Kind::Syntax, t, "qreg must be non-empty");
      have_register_ = true;
    } else if (t.text == "measure") {
      fail(Kind::Measurement, t, "measurement is not supported");
    } else if (t.text == "creg" || t.text == "barrier" || t.text == "reset" ||
               t.text == "if" || t.text == "opaque") {
      fail(Kind::UnsupportedStatement, t, "'" + t.text + "' is not supported");
    } else if (t.text == "gate") {
      definition(t);
    } else {
      application(t);
    }
  }

  // Only the iswap block that emit_qasm writes is accepted; its body is
  // skipped because iswap is built in.
  void definition(const Token& at) {
    Token name = expect_ident();
    if (name.text != "iswap") {
      fail(Kind::UnsupportedGate, name,
           "gate definitions are only supported for iswap");
    }
    for (;;) {
      Token t = lex_.next();
      if (t.kind == Tok::End) fail(Kind::Syntax, at, "unterminated gate definition");
      if (t.kind == Tok::Symbol && t.text == "{") break;
    }
    for (;;) {
      Token t = lex_.next();
      if (t.kind == Tok::End) fail(Kind::Syntax, at, "unterminated gate definition");
      if (t.kind == Tok::Symbol && t.text == "}") return;
    }
  }

  void application(const Token& name) {
    const auto& table = supported_gates();
    auto it = table.find(name.text);
    if (it == table.end()) {
      fail(Kind::UnsupportedGate, name, "unsupported gate '" + name.text + "'");
    }
    if (!have_register_) fail(Kind::Syntax, name, "gate used before qreg");
    GateApplication app;
    app.gate = name.text;
    app.line = name.line;
    app.column = name.column;

    if (lex_.peek().kind == Tok::Symbol && lex_.peek().text == "(") {
      const Token open = lex_.next();
      for (const auto& [text, offset] : lex_.raw_arguments(open)) {
        try {
          app.angles.push_back(Angle::parse(text));
        } catch (const AngleParseError& e) {
          const auto [line, col] = lex_.position_of(offset + e.offset());
          throw QasmError(Kind::Syntax, line, col, e.what());
        }
      }
    }
    if (static_cast<int>(app.angles.size()) != it->second.angles) {
      fail(Kind::Syntax, name, "gate '" + name.text + "' takes " +
                                   std::to_string(it->second.angles) +
                                   " parameter(s)");
    }

    for (;;) {
      Token reg = expect_ident();
      if (reg.text != program_.register_name) {
        fail(Kind::Syntax, reg, "unknown register '" + reg.text + "'");
      }
      if (lex_.peek().kind != Tok::Symbol || lex_.peek().text != "[") {
        fail(Kind::UnsupportedStatement, reg,
             "whole-register gate applications are not supported");
      }
      expect_symbol("[");
      const Token idx_tok = lex_.peek();
      const int idx = expect_int();
      expect_symbol("]");
      if (idx >= program_.register_size) {
        fail(Kind::OperandOutOfRange, idx_tok,
             "qubit index " + std::to_string(idx) + " out of range for " +
                 program_.register_name + "[" +
                 std::to_string(program_.register_size) + "]");
      }
      if (std::find(app.qubits.begin(), app.qubits.end(), idx) != app.qubits.end()) {
        fail(Kind::Syntax, idx_tok, "repeated qubit operand");
      }
      app.qubits.push_back(idx);
      Token sep = lex_.next();
      if (sep.kind == Tok::Symbol && sep.text == ";") break;
      if (sep.kind != Tok::Symbol || sep.text != ",") {
        fail(Kind::Syntax, sep, "expected ',' or ';'");
      }
    }
    if (static_cast<int>(app.qubits.size()) != it->second.arity) {
      fail(Kind::Syntax, name, "gate '" + name.text + "' takes " +
                                   std::to_string(it->second.arity) +
                                   " qubit operand(s)");
    }
    program_.gates.push_back(std::move(app));
  }

  Lexer lex_;
  QasmProgram program_;
  bool have_register_ = false;
};

}  // namespace

QasmError::QasmError(Kind kind, int line, int column, const std::string& message)
    : std::runtime_error("qasm:" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

QasmProgram parse_program(std::string_view text) { return Parser(text).parse(); }

CircuitGrid to_grid(const QasmProgram& program) {
  const int n = program.register_size;
  const GatePtr id = builtin_gate("I");
  CircuitGrid grid(n);
  std::vector<int> frontier(static_cast<std::size_t>(n), 0);
  std::map<std::string, GatePtr> instantiated;

  for (const GateApplication& app : program.gates) {
    if (app.gate == "id") continue;
    GatePtr g;
    if (const ParamGateTemplate* tmpl = find_param_template(app.gate)) {
      g = instantiate_param_gate(*tmpl, app.angles);
      auto [it, fresh] = instantiated.emplace(g->name, g);
      g = it->second;
    } else {
      g = builtin_gate(app.gate);
    }
    int layer = 0;
    for (int q : app.qubits) layer = std::max(layer, frontier[q]);
    while (grid.depth() <= layer) {
      grid.append_layer(Layer(static_cast<std::size_t>(n), Cell::single(id)));
    }
    if (app.qubits.size() == 1) {
      grid.set_cell(layer, app.qubits[0], Cell::single(g));
    } else {
      const int a = app.qubits[0];
      const int b = app.qubits[1];
      grid.set_cell(layer, a, Cell::half(g, HalfRole::First, b));
      grid.set_cell(layer, b, Cell::half(g, HalfRole::Second, a));
    }
    for (int q : app.qubits) frontier[q] = layer + 1;
  }
  return grid;
}

CircuitGrid parse_qasm(std::string_view text) { return to_grid(parse_program(text)); }

std::string emit_qasm(const CircuitGrid& c) {
  bool needs_iswap = false;
  for (const Layer& l : c.layers()) {
    for (const Cell& cell : l) {
      if (cell.is_identity()) continue;
      if (cell.gate->qasm.empty()) {
        throw std::invalid_argument("gate " + cell.gate->name +
                                    " has no QASM rendering");
      }
      needs_iswap = needs_iswap || cell.gate->qasm_needs_definition;
    }
  }
  std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (needs_iswap) out += kIswapDefinition;
  out += "qreg q[" + std::to_string(c.qubits()) + "];\n";
  for (const Layer& l : c.layers()) {
    for (int q = 0; q < c.qubits(); ++q) {
      const Cell& cell = l[q];
      if (cell.is_identity()) continue;
      if (!cell.is_half()) {
        out += cell.gate->qasm + " q[" + std::to_string(q) + "];\n";
      } else if (*cell.role == HalfRole::First) {
        out += cell.gate->qasm + " q[" + std::to_string(q) + "],q[" +
               std::to_string(cell.partner) + "];\n";
      }
    }
  }
  return out;
}

}  // namespace qsubst
