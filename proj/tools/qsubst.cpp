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

// Command-line driver: database generation, optimization, verification,
// circuit counting and database statistics.
//
// Exit codes: 0 success, 1 verify mismatch, 2 configuration or input error,
// 3 resource guard, 4 optimized circuit fails post-verification.
// Results go to stdout as "key: value" lines; diagnostics go to stderr.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "qsubst/circuit.hpp"
#include "qsubst/generator.hpp"
#include "qsubst/optimizer.hpp"
#include "qsubst/qasm.hpp"

namespace fs = std::filesystem;
using namespace qsubst;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kGuard = 3, kResidual = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

std::uint64_t circuit_limit() {
  const char* env = std::getenv("QUANTO_MAX_CIRCUITS");
  if (env == nullptr || *env == '\0') return kDefaultMaxCircuits;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("QUANTO_MAX_CIRCUITS is not a number: ") + env);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct GenArgs {
  std::string gates;
  int qubits = 2;
  int depth = 3;
  int dp = 8;
  bool neighbors_only = false;
  bool allow_large = false;
  std::string out;
};

GeneratorConfig make_config(const GenArgs& a, GateSet gates) {
  GeneratorConfig cfg;
  cfg.qubits = a.qubits;
  cfg.depth = a.depth;
  cfg.dp = a.dp;
  cfg.gates = std::move(gates);
  cfg.neighbors_only = a.neighbors_only;
  cfg.allow_large = a.allow_large;
  cfg.max_circuits = circuit_limit();
  return cfg;
}

IdentityDatabase generate(const GeneratorConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  IdentityDatabase db = build_database(cfg);
  std::cerr << "generated " << db.circuit_count() << " circuits in "
            << seconds_since(t0) << " s\n";
  return db;
}

int run_gen_db(const GenArgs& a) {
  if (a.gates.empty()) throw UsageError("--gates is required");
  const GeneratorConfig cfg = make_config(a, GateSet::parse(a.gates));
  const IdentityDatabase db = generate(cfg);
  if (!a.out.empty()) save(db, a.out);

  std::map<std::size_t, std::size_t> histogram;
  for (const auto& [fp, bucket] : db.by_fingerprint()) ++histogram[bucket.size()];
  std::cout << "circuits: " << db.circuit_count() << "\n"
            << "buckets: " << db.bucket_count() << "\n";
  for (const auto& [size, n] : histogram) {
    std::cout << "bucket_size_" << size << ": " << n << "\n";
  }
  if (!a.out.empty()) std::cout << "out: " << a.out << "\n";
  return kOk;
}

struct OptArgs {
  GenArgs gen;
  std::string db;
  std::string in;
  int tile_qubits = 0;
  int tile_depth = 0;
  int iterations = 10;
  double tolerance = 1e-6;
};

// Gates used by the circuit plus the identity, in first-use order.
GateSet detect_gates(const CircuitGrid& c) {
  std::vector<GatePtr> used;
  std::set<std::string> seen;
  for (const Layer& l : c.layers()) {
    for (const Cell& cell : l) {
      if (seen.insert(cell.gate->name).second) used.push_back(cell.gate);
    }
  }
  return GateSet::with_identity(std::move(used));
}

int run_optimize(OptArgs a, bool qubits_given) {
  if (a.in.empty() || a.gen.out.empty()) throw UsageError("--in and --out are required");
  if (fs::exists(a.gen.out) && fs::equivalent(a.in, a.gen.out)) {
    throw UsageError("--out must differ from --in");
  }
  const CircuitGrid input = parse_qasm(read_file(a.in));

  std::optional<IdentityDatabase> db;
  if (!a.db.empty()) {
    db = load(a.db);
  } else {
    GateSet gates = a.gen.gates.empty() ? detect_gates(input) : GateSet::parse(a.gen.gates);
    if (!qubits_given) a.gen.qubits = std::min(input.qubits(), 2);
    std::cerr << "building database over";
    for (const GatePtr& g : gates.gates()) std::cerr << ' ' << g->name;
    std::cerr << "\n";
    db = generate(make_config(a.gen, std::move(gates)));
  }

  const TileSpec spec{a.tile_qubits > 0 ? a.tile_qubits : db->meta().qubits,
                      a.tile_depth > 0 ? a.tile_depth : db->meta().depth};
  if (spec.qubits > db->meta().qubits || spec.depth > db->meta().depth) {
    throw UsageError("tile exceeds the database shape");
  }
  OptimizeOptions opts;
  opts.iterations = a.iterations;
  opts.neighbors_only = a.gen.neighbors_only || db->meta().neighbors_only;
  if (opts.iterations < 1) throw UsageError("--iterations must be positive");

  const auto t0 = std::chrono::steady_clock::now();
  auto [out, report] = optimize(input, *db, spec, opts);
  std::cerr << "optimized in " << seconds_since(t0) << " s\n";
  for (const SubstitutionRecord& s : report.substitutions) {
    std::cerr << "  sweep " << s.iteration << " tile(q" << s.window.qubit_offset
              << ",l" << s.window.layer_offset << ") " << s.tile_encoding
              << " -> " << s.chosen_encoding << " cost " << s.cost_before << "->"
              << s.cost_after << "\n";
  }

  {
    std::ofstream f(a.gen.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.gen.out);
    f << emit_qasm(out);
  }

  std::cout << "initial_depth: " << report.initial_depth << "\n"
            << "final_depth: " << report.final_depth << "\n"
            << "iterations: " << report.iterations << "\n"
            << "substitutions: " << report.substitutions.size() << "\n"
            << "collisions_skipped: " << report.collisions_skipped << "\n"
            << "residual: "
            << (report.residual ? format_residual(*report.residual) : "unavailable")
            << "\n"
            << "out: " << a.gen.out << "\n";
  if (report.residual && *report.residual > a.tolerance) {
    std::cerr << "error: residual exceeds tolerance " << a.tolerance << "\n";
    return kResidual;
  }
  return kOk;
}

int run_verify(const std::string& a, const std::string& b, double tol) {
  const CircuitGrid ca = parse_qasm(read_file(a));
  const CircuitGrid cb = parse_qasm(read_file(b));
  if (ca.qubits() != cb.qubits()) {
    throw UsageError("qubit counts differ: " + std::to_string(ca.qubits()) +
                     " vs " + std::to_string(cb.qubits()));
  }
  const double r = max_abs_diff(circuit_unitary(ca), circuit_unitary(cb));
  const bool equal = r <= tol;
  std::cout << "residual: " << format_residual(r) << "\n"
            << "equal: " << (equal ? "true" : "false") << "\n";
  return equal ? kOk : kMismatch;
}

int run_count(int n, int d, long long g, long long t, const std::string& gates) {
  if (!gates.empty()) {
    const GateSet gs = GateSet::parse(gates);
    g = static_cast<long long>(gs.single_qubit_count());
    t = static_cast<long long>(gs.two_qubit_count());
  }
  if (n < 1 || d < 1 || g < 0 || t < 0) {
    throw UsageError("count needs --qubits >= 1, --depth >= 1, --g >= 0, --t >= 0");
  }
  std::cout << "S_l: " << scaling_layer_count(n, g, t) << "\n"
            << "S: " << scaling_count(n, d, g, t) << "\n";
  return kOk;
}

int run_stats(const std::string& path) {
  const IdentityDatabase db = load(path);
  const DatabaseMeta& m = db.meta();
  std::cout << "format: " << m.format << "\n"
            << "digest: " << m.digest_algorithm << "\n"
            << "convention: " << m.convention << "\n"
            << "qubits: " << m.qubits << "\n"
            << "depth: " << m.depth << "\n"
            << "dp: " << m.dp << "\n"
            << "neighbors_only: " << (m.neighbors_only ? 1 : 0) << "\n"
            << "gates:";
  for (const GatePtr& g : db.gates().gates()) std::cout << ' ' << g->name;
  std::cout << "\n"
            << "circuits: " << db.circuit_count() << "\n"
            << "buckets: " << db.bucket_count() << "\n";

  const IdentityDatabase::Bucket* largest = nullptr;
  for (const auto& [fp, bucket] : db.by_fingerprint()) {
    if (largest == nullptr || bucket.size() > largest->size()) largest = &bucket;
  }
  std::cout << "largest_bucket: " << (largest ? largest->size() : 0) << "\n";
  if (largest != nullptr && largest->size() > 1) {
    std::cout << "example_identity: " << (*largest)[0] << " = " << (*largest)[1] << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit identity database and tile-substitution optimizer"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-db", "Enumerate circuits and write an identity database");
  gen_cmd->add_option("--gates", gen.gates, "Comma-separated gate names or a preset")->required();
  gen_cmd->add_option("--qubits", gen.qubits, "Qubits per circuit")->required();
  gen_cmd->add_option("--depth", gen.depth, "Layers per circuit")->required();
  gen_cmd->add_option("--dp", gen.dp, "Decimal places kept when fingerprinting");
  gen_cmd->add_flag("--neighbors-only", gen.neighbors_only, "Two-qubit gates on adjacent qubits only");
  gen_cmd->add_flag("--allow-large", gen.allow_large, "Lift the qubits <= 4, depth <= 6 limits");
  gen_cmd->add_option("--out", gen.out, "Database file to write");

  OptArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "Optimize a QASM circuit against a database");
  opt_cmd->add_option("--in", opt.in, "Input QASM")->required();
  opt_cmd->add_option("--out", opt.gen.out, "Output QASM")->required();
  opt_cmd->add_option("--db", opt.db, "Database file; generated on the fly if omitted");
  opt_cmd->add_option("--gates", opt.gen.gates, "Gate set for an on-the-fly database");
  auto* opt_qubits = opt_cmd->add_option("--qubits", opt.gen.qubits, "Qubits of an on-the-fly database");
  opt_cmd->add_option("--depth", opt.gen.depth, "Depth of an on-the-fly database");
  opt_cmd->add_option("--dp", opt.gen.dp, "Decimal places of an on-the-fly database");
  opt_cmd->add_flag("--allow-large", opt.gen.allow_large,
                    "Lift the qubits <= 4, depth <= 6 limits");
  opt_cmd->add_flag("--neighbors-only", opt.gen.neighbors_only, "Two-qubit gates on adjacent qubits only");
  opt_cmd->add_option("--tile-qubits", opt.tile_qubits, "Tile rows (default: database qubits)");
  opt_cmd->add_option("--tile-depth", opt.tile_depth, "Tile layers (default: database depth)");
  opt_cmd->add_option("--iterations", opt.iterations, "Maximum tile sweeps");
  opt_cmd->add_option("--tolerance", opt.tolerance, "Largest accepted unitary residual");

  std::string verify_a, verify_b;
  double verify_tol = 1e-6;
  auto* verify_cmd = app.add_subcommand("verify", "Compare the unitaries of two QASM files");
  verify_cmd->add_option("first", verify_a)->required();
  verify_cmd->add_option("second", verify_b)->required();
  verify_cmd->add_option("--tolerance", verify_tol, "Largest accepted entrywise difference");

  int count_n = 0, count_d = 0;
  long long count_g = 0, count_t = 0;
  std::string count_gates;
  auto* count_cmd = app.add_subcommand("count", "Number of circuits a database would enumerate");
  count_cmd->add_option("--qubits", count_n)->required();
  count_cmd->add_option("--depth", count_d)->required();
  count_cmd->add_option("--g", count_g, "Single-qubit gates, identity included");
  count_cmd->add_option("--t", count_t, "Two-qubit gates");
  count_cmd->add_option("--gates", count_gates, "Take g and t from a gate set");

  std::string stats_db;
  auto* stats_cmd = app.add_subcommand("stats", "Summarize a database file");
  stats_cmd->add_option("--db,db", stats_db, "Database file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) return run_gen_db(gen);
    if (*opt_cmd) return run_optimize(opt, opt_qubits->count() > 0);
    if (*verify_cmd) return run_verify(verify_a, verify_b, verify_tol);
    if (*count_cmd) return run_count(count_n, count_d, count_g, count_t, count_gates);
    if (*stats_cmd) return run_stats(stats_db);
  } catch (const ResourceGuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
