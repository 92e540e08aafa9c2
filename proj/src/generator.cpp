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

#include "qsubst/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qsubst {

namespace {

constexpr int kMaxQubits = 4;
constexpr int kMaxDepth = 6;

void enumerate_layers_from(int q, int n, const GateSet& gates,
                           bool neighbors_only, Layer& cur,
                           std::vector<bool>& taken, std::vector<Layer>& out) {
  if (q == n) {
    out.push_back(cur);
    return;
  }
  if (taken[q]) {
    enumerate_layers_from(q + 1, n, gates, neighbors_only, cur, taken, out);
    return;
  }
  for (const GatePtr& g : gates.gates()) {
    if (g->arity != 1) continue;
    cur[q] = Cell::single(g);
    enumerate_layers_from(q + 1, n, gates, neighbors_only, cur, taken, out);
  }
  for (const GatePtr& g : gates.gates()) {
    if (g->arity != 2) continue;
    for (int b = q + 1; b < n; ++b) {
      if (taken[b] || (neighbors_only && b != q + 1)) continue;
      taken[b] = true;
      for (HalfRole role : {HalfRole::First, HalfRole::Second}) {
        const HalfRole other =
            role == HalfRole::First ? HalfRole::Second : HalfRole::First;
        cur[q] = Cell::half(g, role, b);
        cur[b] = Cell::half(g, other, q);
        enumerate_layers_from(q + 1, n, gates, neighbors_only, cur, taken, out);
      }
      taken[b] = false;
      cur[b] = Cell::single(gates.identity());
    }
  }
}

BigInt pow_big(BigInt base, int exp) {
  BigInt out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

BigInt factorial(int n) {
  BigInt out = 1;
  for (int k = 2; k <= n; ++k) out *= k;
  return out;
}

// Number of non-identity layers of an encoded circuit, from the text alone.
int encoded_depth(const std::string& enc, const std::string& identity) {
  int depth = 0;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = std::min(enc.find('|', start), enc.size());
    bool all_identity = true;
    std::size_t cell = start;
    while (cell < end) {
      const std::size_t stop = std::min(enc.find(',', cell), end);
      if (enc.compare(cell, stop - cell, identity) != 0) {
        all_identity = false;
        break;
      }
      cell = stop + 1;
    }
    if (!all_identity) ++depth;
    if (end == enc.size()) return depth;
    start = end + 1;
  }
}

}  // namespace

ResourceGuardError::ResourceGuardError(const BigInt& circuits,
                                       std::uint64_t limit)
    : std::runtime_error("configuration enumerates " + circuits.str() +
                         " circuits, above the limit of " +
                         std::to_string(limit)),
      circuits_(circuits) {}

void check_config(const GeneratorConfig& cfg) {
  if (cfg.qubits < 1) throw ConfigError("qubits must be >= 1");
  if (cfg.depth < 1) throw ConfigError("depth must be >= 1");
  if (cfg.dp < 1 || cfg.dp > 15) throw ConfigError("dp must be in [1, 15]");
  if (!cfg.allow_large && (cfg.qubits > kMaxQubits || cfg.depth > kMaxDepth)) {
    throw ConfigError("qubits <= 4 and depth <= 6 unless overridden");
  }
}

std::vector<Layer> enumerate_layers(int qubits, const GateSet& gates,
                                    bool neighbors_only) {
  if (qubits < 1) throw ConfigError("qubits must be >= 1");
  Layer cur(static_cast<std::size_t>(qubits), Cell::single(gates.identity()));
  std::vector<bool> taken(static_cast<std::size_t>(qubits), false);
  std::vector<Layer> out;
  enumerate_layers_from(0, qubits, gates, neighbors_only, cur, taken, out);
  return out;
}

BigInt scaling_layer_count(int qubits, std::uint64_t g, std::uint64_t t) {
  if (qubits < 1) throw ConfigError("qubits must be >= 1");
  BigInt total = 0;
  for (int r = 0; 2 * r <= qubits; ++r) {
    total += factorial(qubits) / (factorial(r) * factorial(qubits - 2 * r)) *
             pow_big(g, qubits - 2 * r) * pow_big(t, r);
  }
  return total;
}

BigInt scaling_count(int qubits, int depth, std::uint64_t g, std::uint64_t t) {
  if (depth < 1) throw ConfigError("depth must be >= 1");
  return pow_big(scaling_layer_count(qubits, g, t), depth);
}

void enumerate_layer_indices(
    std::size_t layer_count, int depth,
    const std::function<bool(std::span<const std::size_t>)>& visit) {
  if (layer_count == 0 || depth < 1) return;
  std::vector<std::size_t> index(static_cast<std::size_t>(depth), 0);
  for (;;) {
    if (!visit(index)) return;
    int pos = depth - 1;
    while (pos >= 0 && ++index[pos] == layer_count) index[pos--] = 0;
    if (pos < 0) return;
  }
}

void enumerate_circuits(const GeneratorConfig& cfg,
                        const std::function<bool(const CircuitGrid&)>& visit) {
  check_config(cfg);
  const std::vector<Layer> layers =
      enumerate_layers(cfg.qubits, cfg.gates, cfg.neighbors_only);
  if (layers.empty()) return;
  CircuitGrid c(cfg.qubits);
  for (int l = 0; l < cfg.depth; ++l) c.append_layer(layers.front());
  std::vector<std::size_t> current(static_cast<std::size_t>(cfg.depth), 0);
  enumerate_layer_indices(
      layers.size(), cfg.depth, [&](std::span<const std::size_t> index) {
        for (std::size_t l = 0; l < index.size(); ++l) {
          if (index[l] == current[l]) continue;
          current[l] = index[l];
          for (int q = 0; q < cfg.qubits; ++q) {
            c.set_cell(static_cast<int>(l), q, layers[index[l]][q]);
          }
        }
        return visit(c);
      });
}

IdentityDatabase::IdentityDatabase(DatabaseMeta meta, GateSet gates)
    : meta_(std::move(meta)), gates_(std::move(gates)) {}

std::optional<Fingerprint> IdentityDatabase::find(
    const std::string& encoding) const {
  auto it = by_circuit_.find(encoding);
  if (it == by_circuit_.end()) return std::nullopt;
  return it->second;
}

const IdentityDatabase::Bucket* IdentityDatabase::bucket(
    const Fingerprint& fp) const {
  auto it = by_fingerprint_.find(fp);
  return it == by_fingerprint_.end() ? nullptr : &it->second;
}

void IdentityDatabase::insert(std::string encoding, const Fingerprint& fp) {
  auto [it, fresh] = by_circuit_.emplace(encoding, fp);
  if (!fresh) {
    throw std::logic_error("circuit '" + encoding + "' inserted twice");
  }
  by_fingerprint_[fp].push_back(std::move(encoding));
}

void IdentityDatabase::sort_buckets() {
  const std::string& id = gates_.identity()->name;
  for (auto& [fp, bucket] : by_fingerprint_) {
    std::vector<std::pair<int, std::string>> keyed;
    keyed.reserve(bucket.size());
    for (std::string& enc : bucket) {
      keyed.emplace_back(encoded_depth(enc, id), std::move(enc));
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t k = 0; k < keyed.size(); ++k) {
      bucket[k] = std::move(keyed[k].second);
    }
  }
}

bool operator==(const IdentityDatabase& a, const IdentityDatabase& b) {
  if (!(a.meta_ == b.meta_) || a.gates_.size() != b.gates_.size()) return false;
  for (std::size_t k = 0; k < a.gates_.size(); ++k) {
    const GateDef& x = *a.gates_.gates()[k];
    const GateDef& y = *b.gates_.gates()[k];
    if (x.name != y.name || x.arity != y.arity ||
        canonicalize(x.matrix, a.meta_.dp) != canonicalize(y.matrix, a.meta_.dp)) {
      return false;
    }
  }
  return a.by_circuit_ == b.by_circuit_ && a.by_fingerprint_ == b.by_fingerprint_;
}

IdentityDatabase build_database(const GeneratorConfig& cfg) {
  check_config(cfg);
  const std::vector<Layer> layers =
      enumerate_layers(cfg.qubits, cfg.gates, cfg.neighbors_only);
  const BigInt total = pow_big(BigInt(layers.size()), cfg.depth);
  if (total > cfg.max_circuits) throw ResourceGuardError(total, cfg.max_circuits);

  std::vector<ComplexMatrix> unitaries;
  std::vector<std::string> encodings;
  unitaries.reserve(layers.size());
  for (const Layer& l : layers) {
    unitaries.push_back(layer_unitary(l, cfg.qubits));
    encodings.push_back(encode_layer(l));
  }

  DatabaseMeta meta;
  meta.qubits = cfg.qubits;
  meta.depth = cfg.depth;
  meta.dp = cfg.dp;
  meta.neighbors_only = cfg.neighbors_only;
  IdentityDatabase db(meta, cfg.gates);

  // Depth-first over layer indices with prefix products, so each circuit
  // costs one matrix product.
  const auto depth = static_cast<std::size_t>(cfg.depth);
  std::vector<std::size_t> index(depth, 0);
  std::vector<ComplexMatrix> prefix;
  std::vector<std::string> prefix_enc;
  prefix.reserve(depth);
  prefix_enc.reserve(depth);
  for (;;) {
    while (prefix.size() < depth) {
      const std::size_t level = prefix.size();
      const std::size_t k = index[level];
      if (level == 0) {
        prefix.push_back(unitaries[k]);
        prefix_enc.push_back(encodings[k]);
      } else {
        prefix.push_back(matmul(unitaries[k], prefix.back()));
        prefix_enc.push_back(prefix_enc.back() + "|" + encodings[k]);
      }
    }
    db.insert(prefix_enc.back(), fingerprint(prefix.back(), cfg.dp));

    std::size_t level = depth;
    while (level > 0) {
      --level;
      prefix.pop_back();
      prefix_enc.pop_back();
      if (++index[level] < layers.size()) break;
      index[level] = 0;
      if (level == 0) {
        db.sort_buckets();
        return db;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// QIDB/1 persistence

namespace {

using Kind = DatabaseError::Kind;

[[noreturn]] void fail(Kind kind, const std::string& what) {
  throw DatabaseError(kind, "database: " + what);
}

ComplexMatrix parse_canonical(std::string_view text) {
  std::vector<std::string_view> parts;
  for (;;) {
    const auto k = text.find(';');
    parts.push_back(text.substr(0, k));
    if (k == std::string_view::npos) break;
    text.remove_prefix(k + 1);
  }
  const std::size_t dim = std::stoul(std::string(parts[0]));
  if (dim == 0 || parts.size() != dim * dim + 1) {
    fail(Kind::Malformed, "bad gate matrix");
  }
  std::vector<Complex> entries;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto comma = parts[k].find(',');
    if (comma == std::string_view::npos) fail(Kind::Malformed, "bad gate matrix entry");
    entries.emplace_back(std::stod(std::string(parts[k].substr(0, comma))),
                         std::stod(std::string(parts[k].substr(comma + 1))));
  }
  return ComplexMatrix(dim, std::move(entries));
}

GatePtr load_gate(const std::string& name, int arity, const std::string& canon,
                  int dp) {
  try {
    GatePtr g = resolve_gate(name);
    if (g->arity == arity && canonicalize(g->matrix, dp) == canon) return g;
  } catch (const GateError&) {
  }
  // Not a known gate: fall back to the stored, rounded matrix.
  return make_gate(name, arity, parse_canonical(canon), {}, false,
                   std::pow(10.0, -(dp - 1)));
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  std::size_t pos() const { return pos_; }

  std::string_view next(const char* what) {
    if (done()) fail(Kind::Truncated, std::string("missing ") + what);
    const auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) {
      fail(Kind::Truncated, std::string("unterminated line at ") + what);
    }
    std::string_view line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return line;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string_view expect_key(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key ||
      line[key.size()] != ' ') {
    fail(Kind::Malformed, "expected header field '" + std::string(key) + "'");
  }
  return line.substr(key.size() + 1);
}

int parse_int(std::string_view s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
    fail(Kind::Malformed, std::string("bad integer for ") + what);
  }
  return std::stoi(std::string(s));
}

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    const auto sp = std::min(line.find(' ', k), line.size());
    out.push_back(line.substr(k, sp - k));
    k = sp + 1;
  }
  return out;
}

}  // namespace

std::string serialize(const IdentityDatabase& db) {
  const DatabaseMeta& m = db.meta();
  std::ostringstream head;
  head << m.format << '\n'
       << "digest " << m.digest_algorithm << '\n'
       << "convention " << m.convention << '\n'
       << "qubits " << m.qubits << '\n'
       << "depth " << m.depth << '\n'
       << "dp " << m.dp << '\n'
       << "neighbors_only " << (m.neighbors_only ? 1 : 0) << '\n'
       << "gates " << db.gates().size() << '\n';
  for (const GatePtr& g : db.gates().gates()) {
    head << "gate " << g->name << ' ' << g->arity << ' '
         << canonicalize(g->matrix, m.dp) << '\n';
  }
  std::string body;
  for (const auto& [fp, bucket] : db.by_fingerprint()) {
    body += "FP " + fp.hex() + " " + std::to_string(bucket.size()) + "\n";
    for (const std::string& enc : bucket) {
      body += enc;
      body += '\n';
    }
  }
  return head.str() + body + "END " + std::to_string(db.circuit_count()) + " " +
         digest(body).hex() + "\n";
}

IdentityDatabase deserialize(std::string_view text) {
  LineReader in(text);
  const std::string_view tag = in.next("format tag");
  if (tag != kDatabaseFormat) {
    if (tag.substr(0, 5) == "QIDB/") {
      fail(Kind::VersionMismatch, "unsupported format version '" +
                                      std::string(tag) + "', expected " +
                                      std::string(kDatabaseFormat));
    }
    fail(Kind::Malformed, "not a QIDB file");
  }
  DatabaseMeta meta;
  meta.digest_algorithm = std::string(expect_key(in.next("digest"), "digest"));
  if (meta.digest_algorithm != kDigestAlgorithm) {
    fail(Kind::DigestMismatch, "digest '" + meta.digest_algorithm +
                                   "' is not " + std::string(kDigestAlgorithm));
  }
  meta.convention = std::string(expect_key(in.next("convention"), "convention"));
  if (meta.convention != kProductConvention) {
    fail(Kind::ConventionMismatch, "product convention '" + meta.convention +
                                       "' is not supported");
  }
  meta.qubits = parse_int(expect_key(in.next("qubits"), "qubits"), "qubits");
  meta.depth = parse_int(expect_key(in.next("depth"), "depth"), "depth");
  meta.dp = parse_int(expect_key(in.next("dp"), "dp"), "dp");
  if (meta.qubits < 1 || meta.depth < 1 || meta.dp < 1 || meta.dp > 15) {
    fail(Kind::Malformed, "header values out of range");
  }
  const std::string_view nbr = expect_key(in.next("neighbors_only"), "neighbors_only");
  if (nbr != "0" && nbr != "1") fail(Kind::Malformed, "bad neighbors_only");
  meta.neighbors_only = nbr == "1";
  const int gate_count = parse_int(expect_key(in.next("gates"), "gates"), "gates");

  std::vector<GatePtr> gates;
  for (int k = 0; k < gate_count; ++k) {
    const auto w = words(in.next("gate line"));
    if (w.size() != 4 || w[0] != "gate") fail(Kind::Malformed, "bad gate line");
    try {
      gates.push_back(load_gate(std::string(w[1]), parse_int(w[2], "arity"),
                                std::string(w[3]), meta.dp));
    } catch (const DatabaseError&) {
      throw;
    } catch (const std::exception& e) {
      fail(Kind::Malformed, "gate '" + std::string(w[1]) + "': " + e.what());
    }
  }
  std::optional<GateSet> gate_set;
  try {
    gate_set.emplace(std::move(gates));
  } catch (const GateError& e) {
    fail(Kind::Malformed, e.what());
  }

  // Locate the footer first so a short file reports as truncated and a
  // damaged body as a checksum failure.
  const std::size_t body_start = in.pos();
  const std::size_t end_pos =
      text.size() >= 1 && text.back() == '\n'
          ? text.rfind("END ", text.size() - 1)
          : std::string_view::npos;
  if (end_pos == std::string_view::npos || end_pos < body_start ||
      (end_pos > 0 && text[end_pos - 1] != '\n')) {
    fail(Kind::Truncated, "missing END footer");
  }
  const auto footer = words(text.substr(end_pos, text.size() - end_pos - 1));
  if (footer.size() != 3) fail(Kind::Malformed, "bad END footer");
  const std::string_view body = text.substr(body_start, end_pos - body_start);
  if (digest(body).hex() != footer[2]) {
    fail(Kind::ChecksumMismatch, "body checksum does not match footer");
  }

  IdentityDatabase db(meta, std::move(*gate_set));
  LineReader rows(body);
  while (!rows.done()) {
    const auto w = words(rows.next("bucket header"));
    if (w.size() != 3 || w[0] != "FP") fail(Kind::Malformed, "expected FP line");
    Fingerprint fp;
    try {
      fp = Fingerprint::from_hex(w[1]);
    } catch (const FingerprintError& e) {
      fail(Kind::Malformed, e.what());
    }
    const int count = parse_int(w[2], "bucket size");
    for (int k = 0; k < count; ++k) {
      if (rows.done()) fail(Kind::Truncated, "bucket shorter than declared");
      try {
        db.insert(std::string(rows.next("circuit")), fp);
      } catch (const std::logic_error& e) {
        fail(Kind::Malformed, e.what());
      }
    }
  }
  if (std::to_string(db.circuit_count()) != footer[1]) {
    fail(Kind::Truncated, "footer declares " + std::string(footer[1]) +
                              " circuits, found " +
                              std::to_string(db.circuit_count()));
  }
  return db;
}

void save(const IdentityDatabase& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Kind::Io, "cannot write " + path.string());
  const std::string text = serialize(db);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(Kind::Io, "write failed for " + path.string());
}

IdentityDatabase load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Kind::Io, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

}  // namespace qsubst
