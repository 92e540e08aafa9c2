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

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qsubst/matrix.hpp"

namespace qsubst {

/// Identifier of the digest written into database files. Changing the
/// digest or the canonical layout requires a new database format version.
inline constexpr std::string_view kDigestAlgorithm = "fnv1a-128";

class FingerprintError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// `value` rounded half away from zero to `dp` decimals and rendered with
/// exactly `dp` fractional digits. Negative zero renders without a sign.
std::string format_fixed(double value, int dp);

/// Byte-exact text of a matrix rounded to `dp` decimals:
/// "dim;re,im;re,im;..." in row-major order. dp must lie in [1, 15].
std::string canonicalize(const ComplexMatrix& m, int dp);

/// 128-bit digest of a canonical form.
struct Fingerprint {
  std::array<std::uint8_t, 16> bytes{};

  std::string hex() const;
  /// Throws FingerprintError on anything but 32 hex digits.
  static Fingerprint from_hex(std::string_view hex);

  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

/// FNV-1a over the given bytes, 128-bit variant, big-endian output.
Fingerprint digest(std::string_view bytes);

Fingerprint fingerprint(const ComplexMatrix& m, int dp);

struct FingerprintHash {
  std::size_t operator()(const Fingerprint& f) const {
    std::size_t h = 0;
    for (int k = 0; k < 8; ++k) h = (h << 8) | f.bytes[k];
    return h;
  }
};

}  // namespace qsubst
