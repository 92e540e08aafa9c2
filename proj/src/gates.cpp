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

#include "qsubst/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

namespace qsubst {

namespace {

using namespace std::complex_literals;

struct BuiltinSpec {
  const char* name;
  const char* qasm;
  int arity;
  bool needs_definition;
  ComplexMatrix (*matrix)();
};

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

ComplexMatrix diag2(Complex a, Complex b) { return {{a, 0.0}, {0.0, b}}; }

ComplexMatrix controlled(const ComplexMatrix& u) {
  return {{1.0, 0.0, 0.0, 0.0},
          {0.0, 1.0, 0.0, 0.0},
          {0.0, 0.0, u(0, 0), u(0, 1)},
          {0.0, 0.0, u(1, 0), u(1, 1)}};
}

ComplexMatrix mat_i() { return ComplexMatrix::identity(2); }
ComplexMatrix mat_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix mat_y() { return {{0.0, -1i}, {1i, 0.0}}; }
ComplexMatrix mat_z() { return diag2(1.0, -1.0); }
ComplexMatrix mat_h() {
  return {{kInvSqrt2, kInvSqrt2}, {kInvSqrt2, -kInvSqrt2}};
}
ComplexMatrix mat_s() { return diag2(1.0, 1i); }
ComplexMatrix mat_sdg() { return diag2(1.0, -1i); }
ComplexMatrix mat_t() { return diag2(1.0, Complex(kInvSqrt2, kInvSqrt2)); }
ComplexMatrix mat_tdg() { return diag2(1.0, Complex(kInvSqrt2, -kInvSqrt2)); }
ComplexMatrix mat_cx() { return controlled(mat_x()); }
ComplexMatrix mat_cy() { return controlled(mat_y()); }
ComplexMatrix mat_cz() { return controlled(mat_z()); }
ComplexMatrix mat_swap() {
  return {{1.0, 0.0, 0.0, 0.0},
          {0.0, 0.0, 1.0, 0.0},
          {0.0, 1.0, 0.0, 0.0},
          {0.0, 0.0, 0.0, 1.0}};
}
ComplexMatrix mat_iswap() {
  return {{1.0, 0.0, 0.0, 0.0},
          {0.0, 0.0, 1i, 0.0},
          {0.0, 1i, 0.0, 0.0},
          {0.0, 0.0, 0.0, 1.0}};
}

const BuiltinSpec kBuiltins[] = {
    {"I", "id", 1, false, mat_i},       {"X", "x", 1, false, mat_x},
    {"Y", "y", 1, false, mat_y},        {"Z", "z", 1, false, mat_z},
    {"H", "h", 1, false, mat_h},        {"S", "s", 1, false, mat_s},
    {"Sdg", "sdg", 1, false, mat_sdg},  {"T", "t", 1, false, mat_t},
    {"Tdg", "tdg", 1, false, mat_tdg},  {"CX", "cx", 2, false, mat_cx},
    {"CY", "cy", 2, false, mat_cy},     {"CZ", "cz", 2, false, mat_cz},
    {"SWAP", "swap", 2, false, mat_swap},
    {"iSWAP", "iswap", 2, true, mat_iswap},
};

const std::map<std::string, GatePtr, std::less<>>& builtin_table() {
  static const auto table = [] {
    std::map<std::string, GatePtr, std::less<>> t;
    for (const BuiltinSpec& b : kBuiltins) {
      GatePtr g = make_gate(b.name, b.arity, b.matrix(), b.qasm,
                            b.needs_definition);
      t.emplace(b.name, g);
      t.emplace(b.qasm, g);
    }
    return t;
  }();
  return table;
}

Complex expi(double a) { return std::polar(1.0, a); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

GatePtr make_gate(std::string name, int arity, ComplexMatrix matrix,
                  std::string qasm, bool qasm_needs_definition, double tol) {
  if (name.empty()) throw GateError("gate name must not be empty");
  if (name.find_first_of(",|: \t\n") != std::string::npos) {
    throw GateError("gate name '" + name + "' contains a reserved character");
  }
  if (arity != 1 && arity != 2) {
    throw GateError("gate " + name + ": arity must be 1 or 2");
  }
  const std::size_t want = arity == 1 ? 2 : 4;
  if (matrix.dim() != want) {
    throw GateError("gate " + name + ": expected a " + std::to_string(want) +
                    "x" + std::to_string(want) + " matrix");
  }
  if (!is_unitary(matrix, tol)) {
    throw GateError("gate " + name + ": matrix is not unitary");
  }
  const bool identity =
      arity == 1 && max_abs_diff(matrix, ComplexMatrix::identity(2)) <= 1e-12;
  return std::make_shared<const GateDef>(
      GateDef{std::move(name), arity, std::move(matrix), std::move(qasm),
              qasm_needs_definition, identity});
}

GatePtr builtin_gate(std::string_view name) {
  const auto& t = builtin_table();
  auto it = t.find(name);
  return it == t.end() ? nullptr : it->second;
}

const std::vector<std::string>& builtin_gate_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const BuiltinSpec& b : kBuiltins) v.emplace_back(b.name);
    return v;
  }();
  return names;
}

const ParamGateTemplate& u1_template() {
  static const ParamGateTemplate t{
      "U1", "u1", 1, [](std::span<const double> a) {
        return diag2(1.0, expi(a[0]));
      }};
  return t;
}

const ParamGateTemplate& u2_template() {
  // U2(psi, lambda) = 1/sqrt2 [[1, -e^{i lambda}], [e^{i psi}, e^{i(lambda+psi)}]]
  static const ParamGateTemplate t{
      "U2", "u2", 2, [](std::span<const double> a) {
        const double psi = a[0];
        const double lambda = a[1];
        return ComplexMatrix{
            {kInvSqrt2, -kInvSqrt2 * expi(lambda)},
            {kInvSqrt2 * expi(psi), kInvSqrt2 * expi(lambda + psi)}};
      }};
  return t;
}

const ParamGateTemplate& u3_template() {
  static const ParamGateTemplate t{
      "U3", "u3", 3, [](std::span<const double> a) {
        const double c = std::cos(a[0] / 2);
        const double s = std::sin(a[0] / 2);
        const double psi = a[1];
        const double lambda = a[2];
        return ComplexMatrix{{c, -s * expi(lambda)},
                             {s * expi(psi), c * expi(lambda + psi)}};
      }};
  return t;
}

const ParamGateTemplate* find_param_template(std::string_view name) {
  const std::string key = lower(name);
  if (key == "u1") return &u1_template();
  if (key == "u2") return &u2_template();
  if (key == "u3") return &u3_template();
  return nullptr;
}

GatePtr instantiate_param_gate(const ParamGateTemplate& tmpl,
                               std::span<const Angle> angles) {
  if (angles.size() != static_cast<std::size_t>(tmpl.angle_count)) {
    throw GateError(tmpl.name + " takes " + std::to_string(tmpl.angle_count) +
                    " angle(s), got " + std::to_string(angles.size()));
  }
  std::vector<double> radians;
  std::string name = tmpl.name + "[";
  std::string qasm = tmpl.qasm_name + "(";
  for (std::size_t k = 0; k < angles.size(); ++k) {
    radians.push_back(angles[k].radians());
    const std::string text = angles[k].to_string();
    name += (k ? ";" : "") + text;
    qasm += (k ? "," : "") + text;
  }
  name += "]";
  qasm += ")";
  return make_gate(std::move(name), 1, tmpl.builder(radians), std::move(qasm));
}

GatePtr resolve_gate(std::string_view name) {
  name = trim(name);
  if (GatePtr g = builtin_gate(name)) return g;
  const auto open = name.find('[');
  if (open != std::string_view::npos && name.back() == ']') {
    const ParamGateTemplate* tmpl = find_param_template(name.substr(0, open));
    if (tmpl != nullptr) {
      std::vector<Angle> angles;
      std::string_view rest = name.substr(open + 1, name.size() - open - 2);
      for (;;) {
        const auto semi = rest.find(';');
        try {
          angles.push_back(Angle::parse(rest.substr(0, semi)));
        } catch (const AngleParseError& e) {
          throw GateError("gate '" + std::string(name) + "': " + e.what());
        }
        if (semi == std::string_view::npos) break;
        rest.remove_prefix(semi + 1);
      }
      return instantiate_param_gate(*tmpl, angles);
    }
  }
  throw GateError("unknown gate '" + std::string(name) + "'");
}

GateSet::GateSet(std::vector<GatePtr> gates) : gates_(std::move(gates)) {
  std::size_t identities = 0;
  for (std::size_t k = 0; k < gates_.size(); ++k) {
    if (!gates_[k]) throw GateError("gate set contains a null gate");
    for (std::size_t j = 0; j < k; ++j) {
      if (gates_[j]->name == gates_[k]->name) {
        throw GateError("duplicate gate '" + gates_[k]->name + "' in gate set");
      }
    }
    if (is_identity_gate(*gates_[k])) {
      identity_index_ = k;
      ++identities;
    }
  }
  if (identities != 1) {
    throw GateError("gate set must contain exactly one identity gate, found " +
                    std::to_string(identities));
  }
}

GateSet GateSet::with_identity(std::vector<GatePtr> gates) {
  const bool has = std::any_of(gates.begin(), gates.end(), [](const GatePtr& g) {
    return g && is_identity_gate(*g);
  });
  if (!has) gates.insert(gates.begin(), builtin_gate("I"));
  return GateSet(std::move(gates));
}

GateSet GateSet::preset(std::string_view id) {
  std::vector<std::string_view> names;
  if (id == "standard") {
    names = {"I", "X", "Y", "Z", "H", "S", "Sdg", "T", "Tdg", "CX"};
  } else if (id == "ibm-legacy") {
    names = {"I",        "U1[pi/2]",  "U1[pi]",  "U1[-pi/2]",
             "U2[0;pi]", "U3[pi;0;pi]", "CX"};
  } else {
    throw GateError("unknown gate-set preset '" + std::string(id) + "'");
  }
  std::vector<GatePtr> gates;
  for (std::string_view n : names) gates.push_back(resolve_gate(n));
  return GateSet(std::move(gates));
}

GateSet GateSet::parse(std::string_view spec) {
  spec = trim(spec);
  if (spec == "standard" || spec == "ibm-legacy") return preset(spec);
  std::vector<GatePtr> gates;
  for (;;) {
    const auto comma = spec.find(',');
    std::string_view item = trim(spec.substr(0, comma));
    if (item.empty()) throw GateError("empty gate name in gate list");
    GatePtr g = resolve_gate(item);
    const bool dup = std::any_of(gates.begin(), gates.end(), [&](const GatePtr& h) {
      return h->name == g->name;
    });
    if (!dup) gates.push_back(std::move(g));
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  return with_identity(std::move(gates));
}

GatePtr GateSet::find(std::string_view name) const {
  for (const GatePtr& g : gates_) {
    if (g->name == name) return g;
  }
  return nullptr;
}

std::size_t GateSet::single_qubit_count() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const GatePtr& g) { return g->arity == 1; }));
}

std::size_t GateSet::two_qubit_count() const {
  return gates_.size() - single_qubit_count();
}

}  // namespace qsubst
