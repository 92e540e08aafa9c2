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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qsubst {

class AngleParseError : public std::invalid_argument {
 public:
  AngleParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what), offset_(offset) {}
  /// Byte offset into the parsed text where the problem was found.
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Exact rational number with a positive denominator, always in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  /// Normalizes a wide fraction; throws std::overflow_error if the reduced
  /// terms do not fit in 64 bits and std::domain_error on a zero denominator.
  static Rational from_wide(__int128 num, __int128 den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator-(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend Rational operator/(Rational a, Rational b);
  Rational operator-() const { return Rational(-num_, den_); }
  friend bool operator==(const Rational&, const Rational&) = default;

  std::string to_string() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// An angle of the form (p/q)*pi + r/s radians.
///
/// Parsed from the literal expressions that appear in gate parameters, e.g.
/// "pi/2", "-3*pi/4", "0", "pi + 1/2". Only products with a constant and
/// division by a nonzero constant are accepted, so the value stays in this
/// closed form.
class Angle {
 public:
  Angle() = default;
  Angle(Rational pi_coeff, Rational constant = {})
      : pi_coeff_(pi_coeff), constant_(constant) {}

  static Angle parse(std::string_view text);
  static Angle pi_times(std::int64_t num, std::int64_t den = 1) {
    return Angle(Rational(num, den));
  }

  const Rational& pi_coeff() const { return pi_coeff_; }
  const Rational& constant() const { return constant_; }
  double radians() const;

  /// Deterministic rendering, also valid as an OpenQASM 2.0 expression:
  /// "0", "pi", "-pi/2", "3*pi/4", "1/2", "pi+1/2".
  std::string to_string() const;

  friend bool operator==(const Angle&, const Angle&) = default;

 private:
  Rational pi_coeff_;
  Rational constant_;
};

}  // namespace qsubst
