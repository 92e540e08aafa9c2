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

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "oracle.hpp"
#include "qsubst/optimizer.hpp"

using namespace qsubst;
using fixtures::grid;
using fixtures::to_matrix;

namespace {

IdentityDatabase make_db(int n, int d, const std::string& gates, bool nbr = false) {
  GeneratorConfig cfg;
  cfg.qubits = n;
  cfg.depth = d;
  cfg.gates = GateSet::parse(gates);
  cfg.neighbors_only = nbr;
  return build_database(cfg);
}

const IdentityDatabase& hxzc_db() {
  static const IdentityDatabase db = make_db(2, 3, "H,X,Z,CX");
  return db;
}

const IdentityDatabase& pauli_db() {
  static const IdentityDatabase db = make_db(2, 3, "X,Y,H,CX");
  return db;
}

// The window over qubits 1-2, layers 0-2 holds a CX target in its
// middle layer.
const char* kCrossing = "H,Y,S|CX:C:1,CX:T:0,H|I,X,I|S,S,H";
// The same circuit with Y on qubit 1 in the last layer; the window
// over layers 1-3 starts with the cut CX target.
const char* kBoundaryCut = "H,Y,S|CX:C:1,CX:T:0,H|I,X,I|S,Y,H";
// Circuit whose window over qubits 1-2, layers 1-3 normalizes to
// [[I,Y],[X,H],[X,H]].
const char* kPauliTile = "H,Y,S|CX:C:1,CX:T:0,Y|I,X,H|I,X,H";

const char* kCandidateI = "I,Y|I,H|I,H";
const char* kCandidateII = "I,Y|X,I|X,I";
const char* kCandidateIII = "I,Y|I,I|I,I";

double residual(const CircuitGrid& a, const CircuitGrid& b) {
  return oracle::diff(fixtures::simulate(a), fixtures::simulate(b));
}

}  // namespace

TEST(ExtractTiles, CountFormula) {
  const GatePtr id = builtin_gate("I");
  EXPECT_EQ(extract_tiles(CircuitGrid::identity(3, 3, id), {2, 2}).size(), 4u);
  EXPECT_EQ(extract_tiles(CircuitGrid::identity(2, 4, id), {2, 4}).size(), 1u);
  EXPECT_EQ(extract_tiles(CircuitGrid::identity(2, 7, id), {2, 3}).size(), 5u);
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 6; ++m)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= m; ++j) {
          ASSERT_EQ(extract_tiles(CircuitGrid::identity(n, m, id), {i, j}).size(),
                    static_cast<std::size_t>((n - i + 1) * (m - j + 1)));
        }
}

TEST(ExtractTiles, OrderAndErrors) {
  const CircuitGrid c = CircuitGrid::identity(3, 3, builtin_gate("I"));
  const auto w = extract_tiles(c, {2, 2});
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(std::make_pair(w[0].layer_offset, w[0].qubit_offset), std::make_pair(0, 0));
  EXPECT_EQ(std::make_pair(w[1].layer_offset, w[1].qubit_offset), std::make_pair(0, 1));
  EXPECT_EQ(std::make_pair(w[2].layer_offset, w[2].qubit_offset), std::make_pair(1, 0));
  EXPECT_THROW(extract_tiles(c, {4, 1}), TileError);
  EXPECT_THROW(extract_tiles(c, {1, 4}), TileError);
  EXPECT_THROW(extract_tiles(c, {0, 1}), TileError);
}

TEST(ClassifyTile, CrossingAndCutWindows) {
  EXPECT_EQ(classify_tile(grid(kCrossing), {1, 0, 2, 3}), TileClass::Invalid);
  EXPECT_EQ(classify_tile(grid(kBoundaryCut), {1, 1, 2, 3}), TileClass::ValidWithCut);
  EXPECT_EQ(classify_tile(grid(kBoundaryCut), {0, 0, 2, 4}), TileClass::Valid);
  EXPECT_EQ(classify_tile(grid(kBoundaryCut), {0, 2, 3, 2}), TileClass::Valid);
}

TEST(NormalizeCutTile, ReplacesCutHalfByIdentity) {
  const Tile t = normalize_cut_tile(grid(kPauliTile), {1, 1, 2, 3});
  EXPECT_EQ(encode(t.sub), "I,Y|X,H|X,H");
  ASSERT_EQ(t.cuts.size(), 1u);
  EXPECT_EQ(t.cuts[0].layer, 0);
  EXPECT_EQ(t.cuts[0].qubit, 0);
  EXPECT_EQ(t.cuts[0].original, Cell::half(builtin_gate("CX"), HalfRole::Second, 0));
  EXPECT_TRUE(validate(t.sub).empty());
}

TEST(NormalizeCutTile, ValidTileUnchangedAndInternalPairsRebased) {
  const Tile t = normalize_cut_tile(grid("H,CX:T:2,CX:C:1|X,I,I"), {1, 0, 2, 2});
  EXPECT_EQ(encode(t.sub), "CX:T:1,CX:C:0|I,I");
  EXPECT_TRUE(t.cuts.empty());
}

TEST(NormalizeCutTile, CutsAtBothEnds) {
  const Tile t = normalize_cut_tile(grid("CX:C:1,CX:T:0,I|H,H,H|CX:C:1,CX:T:0,I"), {1, 0, 2, 3});
  EXPECT_EQ(encode(t.sub), "I,I|H,H|I,I");
  ASSERT_EQ(t.cuts.size(), 2u);
  EXPECT_EQ(t.cuts[0].layer, 0);
  EXPECT_EQ(t.cuts[1].layer, 2);
}

TEST(NormalizeCutTile, InvalidThrows) {
  EXPECT_THROW(normalize_cut_tile(grid(kCrossing), {1, 0, 2, 3}), TileError);
}

TEST(Cost, CandidateCosts) {
  const GateSet& gs = fixtures::builtins();
  EXPECT_EQ(cost(kCandidateIII, gs), 1);
  EXPECT_EQ(cost(kCandidateI, gs), 3);
  EXPECT_EQ(cost(kCandidateII, gs), 3);
  EXPECT_EQ(cost("I,I|I,I", gs), 0);
  EXPECT_THROW(cost("Q", gs), DecodeError);
}

TEST(Lookup, HadamardPair) {
  const IdentityDatabase db = make_db(1, 2, "H");
  const Tile t = normalize_cut_tile(grid("H|H"), {0, 0, 1, 2});
  const auto c = lookup(t, db);
  EXPECT_EQ(c, (std::vector<std::string>{"I|I"}));
}

TEST(Lookup, NothingBesidesItself) {
  const IdentityDatabase db = make_db(1, 1, "X");
  EXPECT_TRUE(lookup(normalize_cut_tile(grid("X"), {0, 0, 1, 1}), db).empty());
}

TEST(Lookup, PauliTileCandidates) {
  const Tile t = normalize_cut_tile(grid(kPauliTile), {1, 1, 2, 3});
  const auto c = lookup(t, pauli_db());
  for (const char* want : {kCandidateI, kCandidateII, kCandidateIII}) {
    EXPECT_NE(std::find(c.begin(), c.end(), want), c.end()) << want;
  }
  EXPECT_EQ(std::find(c.begin(), c.end(), "I,Y|X,H|X,H"), c.end());
}

TEST(Lookup, GateOutsideDatabaseIsFingerprintedDirectly) {
  const IdentityDatabase db = make_db(1, 2, "Z");
  const auto c = lookup(normalize_cut_tile(grid("S|S"), {0, 0, 1, 2}), db);
  EXPECT_NE(std::find(c.begin(), c.end(), "I|Z"), c.end());
}

TEST(PadToDatabase, PadsWithIdentity) {
  const IdentityDatabase& db = hxzc_db();
  EXPECT_EQ(encode(pad_to_database(grid("H|X"), db)), "H,I|X,I|I,I");
  EXPECT_THROW(pad_to_database(grid("H,H,H"), db), TileError);
}

TEST(SelectSubstitution, PicksLowestCost) {
  const CircuitGrid c = grid(kPauliTile);
  const Tile t = normalize_cut_tile(c, {1, 1, 2, 3});
  const auto s = select_substitution(c, t, {kCandidateI, kCandidateII, kCandidateIII}, pauli_db());
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->encoding, kCandidateIII);
  EXPECT_EQ(s->cost, 1);
  EXPECT_EQ(s->tile_cost, 3);
}

TEST(SelectSubstitution, RequiresStrictImprovement) {
  const CircuitGrid c = grid("X,I|I,I");
  const IdentityDatabase db = make_db(2, 2, "X,Z");
  const Tile t = normalize_cut_tile(c, {0, 0, 2, 2});
  EXPECT_FALSE(select_substitution(c, t, {"I,I|X,I"}, db).has_value());
}

TEST(SelectSubstitution, CutPositionMustStayIdentity) {
  const CircuitGrid c = grid(kPauliTile);
  const Tile t = normalize_cut_tile(c, {1, 1, 2, 3});
  const IdentityDatabase db = make_db(2, 3, "Y,Z,X,H");
  // Equal to the tile, but places Z twice on the cut wire.
  const std::string blocked = "Z,Y|Z,I|I,I";
  ASSERT_LE(residual(grid(blocked), t.sub), 1e-12);
  EXPECT_FALSE(select_substitution(c, t, {blocked}, db).has_value());
  const auto s = select_substitution(c, t, {blocked, kCandidateIII}, db);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->encoding, kCandidateIII);
  // Restoring the cut half over the first Z would leave the second one alone.
  const CircuitGrid forced = apply_substitution(c, t, grid(blocked));
  EXPECT_GT(residual(forced, c), 0.5);
}

TEST(SelectSubstitution, PaddingMustStayIdentity) {
  // A 1x2 tile against a 2-qubit database: members acting on the padded
  // qubit are not admissible.
  const CircuitGrid c = grid("H|H");
  const Tile t = normalize_cut_tile(c, {0, 0, 1, 2});
  const IdentityDatabase db = make_db(2, 2, "H,X");
  EXPECT_FALSE(select_substitution(c, t, {"I,X|I,X|I,I"}, db).has_value());
  const auto s = select_substitution(c, t, {"I,X|I,X", "I,I|I,I"}, db);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(encode(s->replacement), "I|I");
}

TEST(SelectSubstitution, NeighboursOnlyFilter) {
  // H-conjugation reverses a CX between qubits 0 and 2.
  const CircuitGrid c = grid("H,I,H|CX:T:2,I,CX:C:0|H,I,H");
  const Tile t = normalize_cut_tile(c, {0, 0, 3, 3});
  const IdentityDatabase db = make_db(3, 3, "H,CX");
  const std::string distant = "CX:C:2,I,CX:T:0|I,I,I|I,I,I";
  ASSERT_LE(residual(grid(distant), c), 1e-12);
  EXPECT_TRUE(select_substitution(c, t, {distant}, db).has_value());
  SelectOptions nbr;
  nbr.neighbors_only = true;
  EXPECT_FALSE(select_substitution(c, t, {distant}, db, nbr).has_value());
}

TEST(SelectSubstitution, CollisionGuardSkipsWrongMember) {
  DatabaseMeta meta;
  meta.qubits = 1;
  meta.depth = 2;
  IdentityDatabase db(meta, GateSet::parse("H,X"));
  const Fingerprint id = fingerprint(ComplexMatrix::identity(2), 8);
  db.insert("H|H", id);
  db.insert("X|I", id);  // planted: not equal to the identity
  db.sort_buckets();
  const CircuitGrid c = grid("H|H");
  const Tile t = normalize_cut_tile(c, {0, 0, 1, 2});
  int collisions = 0;
  SelectOptions opts;
  opts.collisions = &collisions;
  EXPECT_FALSE(select_substitution(c, t, lookup(t, db), db, opts).has_value());
  EXPECT_EQ(collisions, 1);

  const auto [out, report] = optimize(c, db, {1, 2});
  EXPECT_EQ(encode(out), "H|H");
  EXPECT_EQ(report.collisions_skipped, 1);
  EXPECT_TRUE(report.substitutions.empty());
}

TEST(SelectSubstitution, CustomCost) {
  // Gate count instead of depth: "H|H" costs 2 cells, "I|I" none.
  const CircuitGrid c = grid("H|H");
  const IdentityDatabase db = make_db(1, 2, "H");
  const Tile t = normalize_cut_tile(c, {0, 0, 1, 2});
  SelectOptions opts;
  opts.cost = [](const CircuitGrid& g) {
    int n = 0;
    for (const Layer& l : g.layers())
      for (const Cell& cell : l) n += cell.is_identity() ? 0 : 1;
    return n;
  };
  const auto s = select_substitution(c, t, lookup(t, db), db, opts);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->cost, 0);
  EXPECT_EQ(s->tile_cost, 2);
}

TEST(ApplySubstitution, PauliTileSplice) {
  const CircuitGrid c = grid(kPauliTile);
  const Tile t = normalize_cut_tile(c, {1, 1, 2, 3});
  const auto s = select_substitution(c, t, lookup(t, pauli_db()), pauli_db());
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->encoding, kCandidateIII);
  const CircuitGrid out = apply_substitution(c, t, s->replacement);
  EXPECT_EQ(encode(out), "H,Y,S|CX:C:1,CX:T:0,Y");
  EXPECT_LE(residual(out, c), 1e-12);
}

TEST(ApplySubstitution, ShapeMismatchIsLogicError) {
  const CircuitGrid c = grid(kPauliTile);
  const Tile t = normalize_cut_tile(c, {1, 1, 2, 3});
  EXPECT_THROW(apply_substitution(c, t, grid("I,I")), std::logic_error);
}

TEST(Optimize, SandwichToSingleX) {
  const CircuitGrid in = grid("I,H|CX:C:1,CX:T:0|Z,Z|CX:C:1,CX:T:0|I,H");
  const auto [out, report] = optimize(in, hxzc_db(), {2, 3});
  EXPECT_EQ(encode(out), "I,X");
  EXPECT_EQ(report.initial_depth, 5);
  EXPECT_EQ(report.final_depth, 1);
  ASSERT_TRUE(report.residual.has_value());
  EXPECT_LE(*report.residual, 1e-6);
  EXPECT_GE(report.substitutions.size(), 2u);
  for (const auto& s : report.substitutions) EXPECT_LT(s.cost_after, s.cost_before);
}

TEST(Optimize, CZConjugationOfZ) {
  const IdentityDatabase db = make_db(2, 3, "Z,CZ");
  const auto [out, report] = optimize(grid("CZ:C:1,CZ:T:0|Z,I|CZ:C:1,CZ:T:0"), db, {2, 3});
  EXPECT_EQ(encode(out), "Z,I");
  EXPECT_EQ(report.final_depth, 1);
}

TEST(Optimize, AlreadyOptimalIsFixpoint) {
  const CircuitGrid in = grid("I,X");
  const auto [out, report] = optimize(in, hxzc_db(), {2, 3});
  EXPECT_EQ(out, in);
  EXPECT_TRUE(report.substitutions.empty());
  EXPECT_EQ(report.iterations, 1);
}

TEST(Optimize, TileLargerThanCircuitIsClamped) {
  const auto [out, report] = optimize(grid("H|H"), hxzc_db(), {2, 3});
  EXPECT_EQ(out.depth(), 0);
  EXPECT_EQ(report.final_depth, 0);
}

TEST(Optimize, RejectsBadArguments) {
  EXPECT_THROW(optimize(grid("H"), hxzc_db(), {3, 1}), TileError);
  EXPECT_THROW(optimize(grid("H"), hxzc_db(), {1, 4}), TileError);
  OptimizeOptions zero;
  zero.iterations = 0;
  EXPECT_THROW(optimize(grid("H"), hxzc_db(), {1, 1}, zero), TileError);
}

TEST(Optimize, IterationLimitIsRespected) {
  OptimizeOptions one;
  one.iterations = 1;
  const CircuitGrid in = grid("I,H|CX:C:1,CX:T:0|Z,Z|CX:C:1,CX:T:0|I,H");
  const auto [out, report] = optimize(in, hxzc_db(), {2, 3}, one);
  EXPECT_EQ(report.iterations, 1);
  EXPECT_LE(report.final_depth, report.initial_depth);
}

TEST(OptimizeProperty, SemanticPreservationAndMonotonicity) {
  std::mt19937 rng(41);
  const IdentityDatabase& db = hxzc_db();
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + trial % 6;
    const CircuitGrid in = fixtures::random_grid(rng, 2, m, db.gates());
    const auto [out, report] = optimize(in, db, {2, 3});
    ASSERT_TRUE(validate(out).empty());
    ASSERT_LE(residual(in, out), 1e-6) << encode(in);
    ASSERT_LE(effective_depth(out), effective_depth(in)) << encode(in);
  }
}

TEST(OptimizeProperty, ThreeQubitCircuitsWithCuts) {
  std::mt19937 rng(42);
  const IdentityDatabase& db = hxzc_db();
  for (int trial = 0; trial < 100; ++trial) {
    const CircuitGrid in = fixtures::random_grid(rng, 3, 2 + trial % 5, db.gates(), 0.4);
    const auto [out, report] = optimize(in, db, {2, 3});
    ASSERT_TRUE(validate(out).empty());
    ASSERT_LE(residual(in, out), 1e-6) << encode(in);
    ASSERT_LE(effective_depth(out), effective_depth(in)) << encode(in);
  }
}

TEST(OptimizeProperty, NeighboursOnlyOutput) {
  std::mt19937 rng(43);
  const IdentityDatabase db = make_db(2, 3, "H,X,Z,CX", true);
  OptimizeOptions opts;
  opts.neighbors_only = true;
  for (int trial = 0; trial < 60; ++trial) {
    CircuitGrid in = fixtures::random_grid(rng, 3, 4, db.gates(), 0.4);
    // Keep only inputs whose pairs are already adjacent.
    bool adjacent = true;
    for (const Layer& l : in.layers())
      for (int q = 0; q < 3; ++q)
        if (l[q].is_half() && std::abs(l[q].partner - q) != 1) adjacent = false;
    if (!adjacent) continue;
    const auto [out, report] = optimize(in, db, {2, 3}, opts);
    for (const Layer& l : out.layers())
      for (int q = 0; q < 3; ++q)
        if (l[q].is_half()) ASSERT_EQ(std::abs(l[q].partner - q), 1) << encode(out);
    ASSERT_LE(residual(in, out), 1e-6);
  }
}
