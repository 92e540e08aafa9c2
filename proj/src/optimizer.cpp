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

#include "qsubst/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

namespace qsubst {

namespace {

bool inside(const TileWindow& w, int qubit) {
  return qubit >= w.qubit_offset && qubit < w.qubit_offset + w.qubits;
}

int non_identity_cells(const CircuitGrid& c) {
  int n = 0;
  for (const Layer& l : c.layers()) {
    for (const Cell& cell : l) n += cell.is_identity() ? 0 : 1;
  }
  return n;
}

CircuitGrid trim(const CircuitGrid& padded, int qubits, int depth) {
  CircuitGrid out(qubits);
  for (int l = 0; l < depth; ++l) {
    const Layer& src = padded.layer(l);
    out.append_layer(Layer(src.begin(), src.begin() + qubits));
  }
  return out;
}

}  // namespace

std::vector<TileWindow> extract_tiles(const CircuitGrid& c, const TileSpec& spec) {
  if (spec.qubits < 1 || spec.depth < 1) {
    throw TileError("tile dimensions must be positive");
  }
  if (spec.qubits > c.qubits() || spec.depth > c.depth()) {
    throw TileError("tile " + std::to_string(spec.qubits) + "x" +
                    std::to_string(spec.depth) + " does not fit a circuit of " +
                    std::to_string(c.qubits()) + " qubits and depth " +
                    std::to_string(c.depth()));
  }
  std::vector<TileWindow> out;
  out.reserve(static_cast<std::size_t>((c.qubits() - spec.qubits + 1) *
                                       (c.depth() - spec.depth + 1)));
  for (int l = 0; l + spec.depth <= c.depth(); ++l) {
    for (int q = 0; q + spec.qubits <= c.qubits(); ++q) {
      out.push_back(TileWindow{q, l, spec.qubits, spec.depth});
    }
  }
  return out;
}

TileClass classify_tile(const CircuitGrid& c, const TileWindow& w) {
  bool cut = false;
  for (int l = 0; l < w.depth; ++l) {
    const bool boundary = l == 0 || l == w.depth - 1;
    for (int q = w.qubit_offset; q < w.qubit_offset + w.qubits; ++q) {
      const Cell& cell = c.cell(w.layer_offset + l, q);
      if (!cell.is_half() || inside(w, cell.partner)) continue;
      if (!boundary) return TileClass::Invalid;
      cut = true;
    }
  }
  return cut ? TileClass::ValidWithCut : TileClass::Valid;
}

Tile normalize_cut_tile(const CircuitGrid& c, const TileWindow& w) {
  if (classify_tile(c, w) == TileClass::Invalid) {
    throw TileError("cannot normalize an invalid tile");
  }
  static const GatePtr kIdentity = builtin_gate("I");
  Tile t{w, CircuitGrid(w.qubits), {}};
  for (int l = 0; l < w.depth; ++l) {
    Layer layer;
    layer.reserve(static_cast<std::size_t>(w.qubits));
    for (int q = 0; q < w.qubits; ++q) {
      const Cell& cell = c.cell(w.layer_offset + l, w.qubit_offset + q);
      if (!cell.is_half()) {
        layer.push_back(cell);
      } else if (inside(w, cell.partner)) {
        layer.push_back(Cell::half(cell.gate, *cell.role,
                                   cell.partner - w.qubit_offset));
      } else {
        t.cuts.push_back(CutPosition{l, q, cell});
        layer.push_back(Cell::single(kIdentity));
      }
    }
    t.sub.append_layer(std::move(layer));
  }
  return t;
}

int depth_cost(const CircuitGrid& c) { return effective_depth(c); }

int cost(const std::string& encoding, const GateSet& gates) {
  return depth_cost(decode(encoding, gates));
}

CircuitGrid pad_to_database(const CircuitGrid& sub, const IdentityDatabase& db) {
  const int n = db.meta().qubits;
  const int d = db.meta().depth;
  if (sub.qubits() > n || sub.depth() > d) {
    throw TileError("tile is larger than the database circuits");
  }
  CircuitGrid out = CircuitGrid::identity(n, d, db.gates().identity());
  for (int l = 0; l < sub.depth(); ++l) {
    for (int q = 0; q < sub.qubits(); ++q) out.set_cell(l, q, sub.cell(l, q));
  }
  return out;
}

std::vector<std::string> lookup(const Tile& t, const IdentityDatabase& db) {
  const CircuitGrid padded = pad_to_database(t.sub, db);
  const std::string self = encode(padded);
  const std::optional<Fingerprint> stored = db.find(self);
  const Fingerprint fp =
      stored ? *stored : fingerprint(circuit_unitary(padded), db.meta().dp);
  std::vector<std::string> out;
  if (const auto* bucket = db.bucket(fp)) {
    for (const std::string& enc : *bucket) {
      if (enc != self) out.push_back(enc);
    }
  }
  return out;
}

std::optional<Selection> select_substitution(
    const CircuitGrid& c, const Tile& t,
    const std::vector<std::string>& candidates, const IdentityDatabase& db,
    const SelectOptions& options) {
  const bool default_cost = !options.cost;
  const CostFunction cost_of = default_cost ? CostFunction(depth_cost) : options.cost;
  const int tile_cost = cost_of(t.sub);
  const int before = effective_depth(c);
  const int rows = t.sub.qubits();
  const int cols = t.sub.depth();
  const double tol = 2.0 * std::pow(10.0, -db.meta().dp) *
                     static_cast<double>(std::size_t{1} << db.meta().qubits);

  std::optional<ComplexMatrix> tile_unitary;
  std::optional<Selection> best;
  auto key = [](const Selection& s, int cells) {
    return std::make_tuple(s.cost, s.spliced_depth, cells, s.encoding);
  };
  int best_cells = 0;

  for (const std::string& enc : candidates) {
    const CircuitGrid padded = decode(enc, db.gates());
    if (default_cost) {
      const int d = effective_depth(padded);
      if (d >= tile_cost || (best && d > best->cost)) continue;
    }
    bool admissible = true;
    for (int l = 0; l < padded.depth() && admissible; ++l) {
      for (int q = 0; q < padded.qubits() && admissible; ++q) {
        const Cell& cell = padded.cell(l, q);
        if ((l >= cols || q >= rows) && !cell.is_identity()) admissible = false;
        if (options.neighbors_only && cell.is_half() &&
            std::abs(cell.partner - q) != 1) {
          admissible = false;
        }
      }
    }
    for (const CutPosition& cut : t.cuts) {
      if (!padded.cell(cut.layer, cut.qubit).is_identity()) admissible = false;
    }
    if (!admissible) continue;

    CircuitGrid replacement = trim(padded, rows, cols);
    const int c_cost = cost_of(replacement);
    if (c_cost >= tile_cost) continue;

    if (!tile_unitary) tile_unitary = circuit_unitary(pad_to_database(t.sub, db));
    if (max_abs_diff(*tile_unitary, circuit_unitary(padded)) > tol) {
      if (options.collisions != nullptr) ++*options.collisions;
      continue;
    }

    const int spliced = effective_depth(apply_substitution(c, t, replacement));
    if (spliced > before) continue;

    Selection s{enc, std::move(replacement), c_cost, tile_cost, spliced};
    const int cells = non_identity_cells(s.replacement);
    if (!best || key(s, cells) < key(*best, best_cells)) {
      best = std::move(s);
      best_cells = cells;
    }
  }
  return best;
}

CircuitGrid apply_substitution(const CircuitGrid& c, const Tile& t,
                               const CircuitGrid& replacement) {
  const TileWindow& w = t.window;
  if (replacement.qubits() != w.qubits || replacement.depth() != w.depth) {
    throw std::logic_error("replacement shape does not match the tile");
  }
  CircuitGrid out = c;
  for (int l = 0; l < w.depth; ++l) {
    for (int q = 0; q < w.qubits; ++q) {
      Cell cell = replacement.cell(l, q);
      if (cell.is_half()) cell.partner += w.qubit_offset;
      out.set_cell(w.layer_offset + l, w.qubit_offset + q, std::move(cell));
    }
  }
  for (const CutPosition& cut : t.cuts) {
    out.set_cell(w.layer_offset + cut.layer, w.qubit_offset + cut.qubit,
                 cut.original);
  }
  if (!validate(out).empty()) {
    throw std::logic_error("substitution produced an invalid circuit: " +
                           validate(out).front().rule);
  }
  out.erase_identity_layers();
  return out;
}

std::pair<CircuitGrid, OptimizeReport> optimize(const CircuitGrid& c,
                                                const IdentityDatabase& db,
                                                const TileSpec& spec,
                                                const OptimizeOptions& options) {
  if (spec.qubits < 1 || spec.depth < 1 || spec.qubits > db.meta().qubits ||
      spec.depth > db.meta().depth) {
    throw TileError("tile " + std::to_string(spec.qubits) + "x" +
                    std::to_string(spec.depth) +
                    " must fit within the database bounds " +
                    std::to_string(db.meta().qubits) + "x" +
                    std::to_string(db.meta().depth));
  }
  if (options.iterations < 1) throw TileError("iterations must be positive");
  if (auto v = validate(c); !v.empty()) {
    throw StructuralError("input circuit is invalid: " + v.front().rule);
  }

  OptimizeReport report;
  report.initial_depth = effective_depth(c);
  SelectOptions select{options.neighbors_only, options.cost,
                       &report.collisions_skipped};
  CircuitGrid work = c;

  for (int iter = 1; iter <= options.iterations; ++iter) {
    report.iterations = iter;
    bool changed = false;
    for (std::size_t idx = 0;; ++idx) {
      if (work.depth() == 0) break;
      const TileSpec fit{std::min(spec.qubits, work.qubits()),
                         std::min(spec.depth, work.depth())};
      const std::vector<TileWindow> windows = extract_tiles(work, fit);
      if (idx >= windows.size()) break;
      const TileWindow& w = windows[idx];
      if (classify_tile(work, w) == TileClass::Invalid) continue;

      const Tile tile = normalize_cut_tile(work, w);
      const auto candidates = lookup(tile, db);
      if (candidates.empty()) continue;
      auto chosen = select_substitution(work, tile, candidates, db, select);
      if (!chosen) continue;

      report.substitutions.push_back(SubstitutionRecord{
          iter, w, encode(tile.sub), chosen->encoding, chosen->tile_cost,
          chosen->cost});
      work = apply_substitution(work, tile, chosen->replacement);
      changed = true;
    }
    if (!changed) break;
  }

  report.final_depth = effective_depth(work);
  if (c.qubits() <= options.verify_max_qubits) {
    report.residual = max_abs_diff(circuit_unitary(c), circuit_unitary(work));
  }
  return {std::move(work), std::move(report)};
}

}  // namespace qsubst
