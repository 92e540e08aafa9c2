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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsubst/circuit.hpp"
#include "qsubst/generator.hpp"

namespace qsubst {

/// Tile shape: `qubits` rows by `depth` layers.
struct TileSpec {
  int qubits = 1;
  int depth = 1;
};

/// Position of an i x j window inside a circuit.
struct TileWindow {
  int qubit_offset = 0;
  int layer_offset = 0;
  int qubits = 1;
  int depth = 1;
};

enum class TileClass { Valid, ValidWithCut, Invalid };

/// A two-qubit half whose partner lies outside the tile, replaced by the
/// identity inside the tile. Coordinates are tile-relative.
struct CutPosition {
  int layer;
  int qubit;
  Cell original;
};

/// A window cut out of a circuit and made self-contained.
struct Tile {
  TileWindow window;
  CircuitGrid sub;
  std::vector<CutPosition> cuts;
};

class TileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// All (n-i+1)(m-j+1) windows, ordered by layer offset then qubit offset.
/// Throws TileError if the spec does not fit the circuit.
std::vector<TileWindow> extract_tiles(const CircuitGrid& c, const TileSpec& spec);

/// Invalid if a two-qubit half with its partner outside the window sits in
/// an interior layer of the window; ValidWithCut if such halves only sit in
/// the window's first or last layer; Valid otherwise.
TileClass classify_tile(const CircuitGrid& c, const TileWindow& w);

/// Copies the window out, replacing boundary-cut halves by the identity and
/// recording them. Throws TileError for an Invalid window.
Tile normalize_cut_tile(const CircuitGrid& c, const TileWindow& w);

/// Cost of a candidate circuit; lower is better.
using CostFunction = std::function<int(const CircuitGrid&)>;

/// Effective depth, the default cost.
int depth_cost(const CircuitGrid& c);
/// Cost of an encoded circuit over `gates`. Throws DecodeError.
int cost(const std::string& encoding, const GateSet& gates);

/// Shapes `sub` to the database's qubits x depth by appending identity rows
/// and layers. Throws TileError if `sub` is larger than the database.
CircuitGrid pad_to_database(const CircuitGrid& sub, const IdentityDatabase& db);

/// Equivalent circuits for the tile, excluding the tile itself. Uses the
/// stored fingerprint when the tile is a database circuit and otherwise
/// fingerprints the tile's unitary directly.
std::vector<std::string> lookup(const Tile& t, const IdentityDatabase& db);

struct SelectOptions {
  bool neighbors_only = false;
  /// Defaults to depth_cost when empty.
  CostFunction cost;
  /// Incremented for every candidate rejected by the unitary re-check.
  int* collisions = nullptr;
};

struct Selection {
  std::string encoding;
  /// Candidate trimmed to the tile's shape.
  CircuitGrid replacement;
  int cost;
  int tile_cost;
  /// Effective depth of the whole circuit once the candidate is spliced in.
  int spliced_depth;
};

/// Picks the cheapest admissible candidate, or nothing.
///
/// A candidate is admissible if it keeps the identity at every cut position
/// and in the padding outside the tile's real shape, only pairs neighbouring
/// qubits when `neighbors_only` is set, is strictly cheaper than the tile,
/// and does not make the whole circuit deeper once spliced. Among those the
/// lowest cost wins, then the shallowest spliced circuit, then the fewest
/// non-identity cells, then the smallest encoding.
std::optional<Selection> select_substitution(
    const CircuitGrid& c, const Tile& t,
    const std::vector<std::string>& candidates, const IdentityDatabase& db,
    const SelectOptions& options = {});

/// Writes `replacement` over the tile's window, restores the cut halves and
/// drops identity-only layers. Throws std::logic_error if the result fails
/// validate(), which indicates a bug in candidate filtering.
CircuitGrid apply_substitution(const CircuitGrid& c, const Tile& t,
                               const CircuitGrid& replacement);

struct SubstitutionRecord {
  int iteration;
  TileWindow window;
  std::string tile_encoding;
  std::string chosen_encoding;
  int cost_before;
  int cost_after;
};

struct OptimizeReport {
  int initial_depth = 0;
  int final_depth = 0;
  int iterations = 0;
  std::vector<SubstitutionRecord> substitutions;
  /// Candidates skipped because their unitary did not match the tile's
  /// despite an equal fingerprint.
  int collisions_skipped = 0;
  /// max_abs_diff between input and output unitaries; empty when the
  /// circuit is too wide to simulate.
  std::optional<double> residual;
};

struct OptimizeOptions {
  int iterations = 10;
  bool neighbors_only = false;
  CostFunction cost;
  /// Residual is computed up to this many qubits.
  int verify_max_qubits = 10;
};

/// Repeated tile sweeps (at most options.iterations, stopping early once a
/// sweep changes nothing). Tiles larger than the circuit are clamped to it.
std::pair<CircuitGrid, OptimizeReport> optimize(
    const CircuitGrid& c, const IdentityDatabase& db, const TileSpec& spec,
    const OptimizeOptions& options = {});

}  // namespace qsubst
