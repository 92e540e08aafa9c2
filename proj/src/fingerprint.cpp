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

#include "qsubst/fingerprint.hpp"

#include <cmath>

namespace qsubst {

namespace {

constexpr std::int64_t kPow10[] = {1,
                                   10,
                                   100,
                                   1000,
                                   10000,
                                   100000,
                                   1000000,
                                   10000000,
                                   100000000,
                                   1000000000,
                                   10000000000,
                                   100000000000,
                                   1000000000000,
                                   10000000000000,
                                   100000000000000,
                                   1000000000000000};

void check_dp(int dp) {
  if (dp < 1 || dp > 15) {
    throw FingerprintError("decimal precision must be in [1, 15], got " +
                           std::to_string(dp));
  }
}

}  // namespace

std::string format_fixed(double value, int dp) {
  check_dp(dp);
  if (!std::isfinite(value)) throw FingerprintError("non-finite matrix entry");
  const double scaled = std::round(value * static_cast<double>(kPow10[dp]));
  if (std::abs(scaled) >= 9.0e18) {
    throw FingerprintError("matrix entry too large to canonicalize");
  }
  const std::int64_t units = static_cast<std::int64_t>(scaled);
  const std::int64_t mag = units < 0 ? -units : units;
  std::string frac = std::to_string(mag % kPow10[dp]);
  frac.insert(0, static_cast<std::size_t>(dp) - frac.size(), '0');
  std::string out = units < 0 ? "-" : "";
  out += std::to_string(mag / kPow10[dp]);
  out += '.';
  out += frac;
  return out;
}

std::string canonicalize(const ComplexMatrix& m, int dp) {
  check_dp(dp);
  std::string out = std::to_string(m.dim());
  out.reserve(out.size() + m.entries().size() * 2 * (dp + 4));
  for (const Complex& z : m.entries()) {
    out += ';';
    out += format_fixed(z.real(), dp);
    out += ',';
    out += format_fixed(z.imag(), dp);
  }
  return out;
}

std::string Fingerprint::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (std::uint8_t b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xF];
  }
  return out;
}

Fingerprint Fingerprint::from_hex(std::string_view hex) {
  if (hex.size() != 32) throw FingerprintError("fingerprint must be 32 hex digits");
  auto nibble = [&](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    throw FingerprintError("bad hex digit in fingerprint");
  };
  Fingerprint f;
  for (std::size_t k = 0; k < 16; ++k) {
    f.bytes[k] = static_cast<std::uint8_t>((nibble(hex[2 * k]) << 4) |
                                           nibble(hex[2 * k + 1]));
  }
  return f;
}

Fingerprint digest(std::string_view bytes) {
  using u128 = unsigned __int128;
  constexpr u128 kOffset = (static_cast<u128>(0x6c62272e07bb0142ULL) << 64) |
                           0x62b821756295c58dULL;
  constexpr u128 kPrime = (static_cast<u128>(1) << 88) | 0x13BU;
  u128 h = kOffset;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kPrime;
  }
  Fingerprint f;
  for (int k = 15; k >= 0; --k) {
    f.bytes[k] = static_cast<std::uint8_t>(h & 0xFF);
    h >>= 8;
  }
  return f;
}

Fingerprint fingerprint(const ComplexMatrix& m, int dp) {
  return digest(canonicalize(m, dp));
}

}  // namespace qsubst
