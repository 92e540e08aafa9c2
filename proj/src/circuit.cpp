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

#include "qsubst/circuit.hpp"

#include <algorithm>

namespace qsubst {

namespace {

std::size_t bit_of(std::size_t state, int qubit, int qubits) {
  return (state >> (qubits - 1 - qubit)) & 1U;
}

std::size_t with_bit(std::size_t state, int qubit, int qubits, std::size_t v) {
  const std::size_t mask = std::size_t{1} << (qubits - 1 - qubit);
  return v ? (state | mask) : (state & ~mask);
}

// Embeds a 4x4 gate acting on the ordered pair (first, second) into the
// full 2^qubits space by mapping basis-state indices.
ComplexMatrix embed_two_qubit(const ComplexMatrix& g, int first, int second,
                              int qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<Complex> e(dim * dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t in = 2 * bit_of(col, first, qubits) + bit_of(col, second, qubits);
    for (std::size_t out = 0; out < 4; ++out) {
      std::size_t row = with_bit(col, first, qubits, out >> 1);
      row = with_bit(row, second, qubits, out & 1U);
      e[row * dim + col] = g(out, in);
    }
  }
  return ComplexMatrix(dim, std::move(e));
}

std::string describe(const std::vector<Violation>& v) {
  std::string out;
  for (const Violation& x : v) {
    if (!out.empty()) out += "; ";
    out += "layer " + std::to_string(x.layer) + " qubit " +
           std::to_string(x.qubit) + ": " + x.rule;
  }
  return out;
}

}  // namespace

bool Cell::is_identity() const {
  return !is_half() && gate && is_identity_gate(*gate);
}

CircuitGrid::CircuitGrid(int qubits) : qubits_(qubits) {
  if (qubits < 1) throw StructuralError("circuit needs at least one qubit");
}

CircuitGrid::CircuitGrid(int qubits, std::vector<Layer> layers)
    : CircuitGrid(qubits) {
  for (Layer& l : layers) append_layer(std::move(l));
}

CircuitGrid CircuitGrid::identity(int qubits, int depth, const GatePtr& id) {
  CircuitGrid c(qubits);
  for (int l = 0; l < depth; ++l) {
    c.append_layer(Layer(static_cast<std::size_t>(qubits), Cell::single(id)));
  }
  return c;
}

void CircuitGrid::append_layer(Layer layer) {
  if (layer.size() != static_cast<std::size_t>(qubits_)) {
    throw StructuralError("layer has " + std::to_string(layer.size()) +
                          " cells, circuit has " + std::to_string(qubits_) +
                          " qubits");
  }
  layers_.push_back(std::move(layer));
}

void CircuitGrid::erase_identity_layers() {
  std::erase_if(layers_, [](const Layer& l) { return is_identity_layer(l); });
}

std::vector<Violation> validate_layer(const Layer& layer, int layer_index) {
  std::vector<Violation> out;
  const int n = static_cast<int>(layer.size());
  for (int q = 0; q < n; ++q) {
    const Cell& c = layer[q];
    auto flag = [&](std::string rule) {
      out.push_back(Violation{layer_index, q, std::move(rule)});
    };
    if (!c.gate) {
      flag("empty cell");
      continue;
    }
    if (!c.is_half()) {
      if (c.gate->arity != 1) flag("two-qubit gate without half role");
      continue;
    }
    if (c.gate->arity != 2) {
      flag("single-qubit gate used as a two-qubit half");
      continue;
    }
    if (c.partner == q) {
      flag("partner is the cell itself");
      continue;
    }
    if (c.partner < 0 || c.partner >= n) {
      flag("partner out of range");
      continue;
    }
    const Cell& p = layer[c.partner];
    if (!p.is_half() || p.partner != q) {
      flag("unpaired two-qubit half");
    } else if (!p.gate || p.gate->name != c.gate->name) {
      flag("two-qubit halves name different gates");
    } else if (*p.role == *c.role) {
      flag("duplicate role");
    }
  }
  return out;
}

std::vector<Violation> validate(const CircuitGrid& c) {
  std::vector<Violation> out;
  for (int l = 0; l < c.depth(); ++l) {
    auto v = validate_layer(c.layer(l), l);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

ComplexMatrix layer_unitary(const Layer& layer, int qubits) {
  if (layer.size() != static_cast<std::size_t>(qubits)) {
    throw StructuralError("layer width does not match qubit count");
  }
  if (auto v = validate_layer(layer); !v.empty()) {
    throw StructuralError(describe(v));
  }
  const ComplexMatrix id2 = ComplexMatrix::identity(2);
  std::optional<ComplexMatrix> acc;
  for (const Cell& c : layer) {
    const ComplexMatrix& m = c.is_half() ? id2 : c.gate->matrix;
    acc = acc ? kron(*acc, m) : m;
  }
  ComplexMatrix u = *acc;
  for (int q = 0; q < qubits; ++q) {
    const Cell& c = layer[q];
    if (c.is_half() && *c.role == HalfRole::First) {
      u = matmul(embed_two_qubit(c.gate->matrix, q, c.partner, qubits), u);
    }
  }
  return u;
}

ComplexMatrix circuit_unitary(const CircuitGrid& c) {
  ComplexMatrix u = ComplexMatrix::identity(std::size_t{1} << c.qubits());
  for (const Layer& l : c.layers()) u = matmul(layer_unitary(l, c.qubits()), u);
  return u;
}

bool is_identity_layer(const Layer& layer) {
  return std::all_of(layer.begin(), layer.end(),
                     [](const Cell& c) { return c.is_identity(); });
}

int effective_depth(const CircuitGrid& c) {
  return static_cast<int>(std::count_if(
      c.layers().begin(), c.layers().end(),
      [](const Layer& l) { return !is_identity_layer(l); }));
}

std::string encode_layer(const Layer& layer) {
  std::string out;
  for (std::size_t q = 0; q < layer.size(); ++q) {
    const Cell& c = layer[q];
    if (q) out += ',';
    out += c.gate ? c.gate->name : "?";
    if (c.is_half()) {
      out += *c.role == HalfRole::First ? ":C:" : ":T:";
      out += std::to_string(c.partner);
    }
  }
  return out;
}

std::string encode(const CircuitGrid& c) {
  std::string out;
  for (int l = 0; l < c.depth(); ++l) {
    if (l) out += '|';
    out += encode_layer(c.layer(l));
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto k = s.find(sep);
    parts.push_back(s.substr(0, k));
    if (k == std::string_view::npos) return parts;
    s.remove_prefix(k + 1);
  }
}

Cell decode_cell(std::string_view tok, const GateSet& gates) {
  const auto parts = split(tok, ':');
  auto lookup = [&](std::string_view name) {
    GatePtr g = gates.find(name);
    if (!g) throw DecodeError("unknown gate '" + std::string(name) + "'");
    return g;
  };
  if (parts.size() == 1) return Cell::single(lookup(parts[0]));
  if (parts.size() != 3 || (parts[1] != "C" && parts[1] != "T") ||
      parts[2].empty() ||
      parts[2].find_first_not_of("0123456789") != std::string_view::npos) {
    throw DecodeError("malformed cell '" + std::string(tok) + "'");
  }
  return Cell::half(lookup(parts[0]),
                    parts[1] == "C" ? HalfRole::First : HalfRole::Second,
                    std::stoi(std::string(parts[2])));
}

}  // namespace

CircuitGrid decode(std::string_view text, const GateSet& gates) {
  if (text.empty()) throw DecodeError("empty circuit encoding");
  std::vector<Layer> layers;
  for (std::string_view layer_text : split(text, '|')) {
    Layer layer;
    for (std::string_view tok : split(layer_text, ',')) {
      layer.push_back(decode_cell(tok, gates));
    }
    if (!layers.empty() && layer.size() != layers.front().size()) {
      throw DecodeError("ragged circuit encoding");
    }
    layers.push_back(std::move(layer));
  }
  const int n = static_cast<int>(layers.front().size());
  return CircuitGrid(n, std::move(layers));
}

}  // namespace qsubst
