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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qsubst/circuit.hpp"
#include "qsubst/fingerprint.hpp"
#include "qsubst/gates.hpp"

namespace qsubst {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::string_view kDatabaseFormat = "QIDB/1";
inline constexpr std::string_view kProductConvention = "temporal-right";
inline constexpr std::uint64_t kDefaultMaxCircuits = 10'000'000;

struct GeneratorConfig {
  int qubits = 1;
  int depth = 1;
  int dp = 8;
  GateSet gates = GateSet::with_identity({});
  /// Only place two-qubit gates on qubit pairs (a, a+1).
  bool neighbors_only = false;
  /// Lifts the qubits <= 4, depth <= 6 limits.
  bool allow_large = false;
  /// Refuse configurations enumerating more circuits than this.
  std::uint64_t max_circuits = kDefaultMaxCircuits;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The configuration would enumerate more circuits than allowed.
class ResourceGuardError : public std::runtime_error {
 public:
  ResourceGuardError(const BigInt& circuits, std::uint64_t limit);
  const BigInt& circuits() const { return circuits_; }

 private:
  BigInt circuits_;
};

/// Throws ConfigError for out-of-range bounds or dp.
void check_config(const GeneratorConfig& cfg);

/// Every distinct valid layer on `qubits` qubits: all single-qubit gate
/// assignments, plus every placement of each two-qubit gate on an ordered
/// qubit pair (both orientations), with several disjoint pairs allowed.
/// The order is deterministic: qubit by qubit, gates in declaration order,
/// partner qubits ascending, First before Second.
std::vector<Layer> enumerate_layers(int qubits, const GateSet& gates,
                                    bool neighbors_only);

/// Closed-form layer count S_l = sum_r n!/(r!(n-2r)!) g^(n-2r) t^r.
BigInt scaling_layer_count(int qubits, std::uint64_t g, std::uint64_t t);
/// S = S_l^d.
BigInt scaling_count(int qubits, int depth, std::uint64_t g, std::uint64_t t);

/// Calls `visit` with every depth-tuple of indices into a list of
/// `layer_count` layers, in lexicographic order. Return false to stop.
void enumerate_layer_indices(
    std::size_t layer_count, int depth,
    const std::function<bool(std::span<const std::size_t>)>& visit);

/// Calls `visit` for every depth-layer circuit, in lexicographic order of
/// layer indices into enumerate_layers. Return false from `visit` to stop.
void enumerate_circuits(const GeneratorConfig& cfg,
                        const std::function<bool(const CircuitGrid&)>& visit);

struct DatabaseMeta {
  std::string format{kDatabaseFormat};
  std::string digest_algorithm{kDigestAlgorithm};
  std::string convention{kProductConvention};
  int qubits = 1;
  int depth = 1;
  int dp = 8;
  bool neighbors_only = false;

  friend bool operator==(const DatabaseMeta&, const DatabaseMeta&) = default;
};

/// Circuit identities: every enumerated circuit keyed to the fingerprint of
/// its unitary, and every fingerprint keyed to the circuits sharing it.
/// Buckets are sorted cheapest first (effective depth, then encoding).
class IdentityDatabase {
 public:
  using Bucket = std::vector<std::string>;

  IdentityDatabase(DatabaseMeta meta, GateSet gates);

  const DatabaseMeta& meta() const { return meta_; }
  const GateSet& gates() const { return gates_; }
  const std::unordered_map<std::string, Fingerprint>& by_circuit() const {
    return by_circuit_;
  }
  const std::map<Fingerprint, Bucket>& by_fingerprint() const {
    return by_fingerprint_;
  }

  std::optional<Fingerprint> find(const std::string& encoding) const;
  /// Nullptr when no circuit has this fingerprint.
  const Bucket* bucket(const Fingerprint& fp) const;

  std::size_t circuit_count() const { return by_circuit_.size(); }
  std::size_t bucket_count() const { return by_fingerprint_.size(); }

  /// Adds one circuit. Callers must call sort_buckets() once done.
  void insert(std::string encoding, const Fingerprint& fp);
  void sort_buckets();

  friend bool operator==(const IdentityDatabase& a, const IdentityDatabase& b);

 private:
  DatabaseMeta meta_;
  GateSet gates_;
  std::unordered_map<std::string, Fingerprint> by_circuit_;
  std::map<Fingerprint, Bucket> by_fingerprint_;
};

/// Enumerates, fingerprints and buckets every circuit of `cfg`.
/// Throws ResourceGuardError if scaling_count exceeds cfg.max_circuits.
IdentityDatabase build_database(const GeneratorConfig& cfg);

class DatabaseError : public std::runtime_error {
 public:
  enum class Kind {
    Io,
    VersionMismatch,
    DigestMismatch,
    ConventionMismatch,
    Truncated,
    ChecksumMismatch,
    Malformed,
  };
  DatabaseError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// QIDB/1 text. Same database, same bytes.
std::string serialize(const IdentityDatabase& db);
IdentityDatabase deserialize(std::string_view text);

void save(const IdentityDatabase& db, const std::filesystem::path& path);
IdentityDatabase load(const std::filesystem::path& path);

}  // namespace qsubst
