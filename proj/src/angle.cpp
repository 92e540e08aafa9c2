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

#include "qsubst/angle.hpp"

#include <cctype>
#include <limits>
#include <numbers>

namespace qsubst {

namespace {

std::int64_t narrow(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make(__int128 num, __int128 den) { return Rational::from_wide(num, den); }

// Recursive-descent parser over the angle grammar:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | '+' unary | atom
//   atom   := number | 'pi' | '(' expr ')'
class AngleParser {
 public:
  explicit AngleParser(std::string_view text) : text_(text) {}

  Angle parse() {
    Angle a = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return a;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw AngleParseError("angle '" + std::string(text_) + "': " + what, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Angle expr() {
    Angle acc = term();
    for (;;) {
      if (eat('+')) {
        Angle rhs = term();
        acc = Angle(acc.pi_coeff() + rhs.pi_coeff(),
                    acc.constant() + rhs.constant());
      } else if (eat('-')) {
        Angle rhs = term();
        acc = Angle(acc.pi_coeff() - rhs.pi_coeff(),
                    acc.constant() - rhs.constant());
      } else {
        return acc;
      }
    }
  }

  Angle term() {
    Angle acc = unary();
    for (;;) {
      if (eat('*')) {
        Angle rhs = unary();
        if (rhs.pi_coeff().is_zero()) {
          acc = Angle(acc.pi_coeff() * rhs.constant(),
                      acc.constant() * rhs.constant());
        } else if (acc.pi_coeff().is_zero()) {
          acc = Angle(rhs.pi_coeff() * acc.constant(),
                      rhs.constant() * acc.constant());
        } else {
          fail("product of two pi terms is not supported");
        }
      } else if (eat('/')) {
        Angle rhs = unary();
        if (!rhs.pi_coeff().is_zero()) fail("division by a pi term");
        if (rhs.constant().is_zero()) fail("division by zero");
        acc = Angle(acc.pi_coeff() / rhs.constant(),
                    acc.constant() / rhs.constant());
      } else {
        return acc;
      }
    }
  }

  Angle unary() {
    if (eat('-')) {
      Angle a = unary();
      return Angle(-a.pi_coeff(), -a.constant());
    }
    if (eat('+')) return unary();
    return atom();
  }

  Angle atom() {
    skip_space();
    if (eat('(')) {
      Angle a = expr();
      if (!eat(')')) fail("expected ')'");
      return a;
    }
    if (text_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      return Angle(Rational(1));
    }
    return Angle(Rational(), number());
  }

  Rational number() {
    const std::size_t start = pos_;
    __int128 num = 0;
    __int128 den = 1;
    bool digits = false;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      num = num * 10 + (text_[pos_++] - '0');
      digits = true;
      if (num > std::numeric_limits<std::int64_t>::max()) fail("number too large");
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num = num * 10 + (text_[pos_++] - '0');
        den *= 10;
        digits = true;
        if (num > std::numeric_limits<std::int64_t>::max() ||
            den > std::numeric_limits<std::int64_t>::max()) {
          fail("number has too many digits");
        }
      }
    }
    if (!digits) {
      pos_ = start;
      fail("expected a number, 'pi' or '('");
    }
    return make(num, den);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string pi_term(const Rational& c) {
  std::string out = c.num() < 0 ? "-" : "";
  const std::int64_t p = c.num() < 0 ? -c.num() : c.num();
  if (p != 1) out += std::to_string(p) + "*";
  out += "pi";
  if (c.den() != 1) out += "/" + std::to_string(c.den());
  return out;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num;
  __int128 b = den;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  Rational r;
  r.num_ = narrow(num);
  r.den_ = narrow(den);
  return r;
}

Rational operator+(Rational a, Rational b) {
  return make(static_cast<__int128>(a.num_) * b.den_ +
                  static_cast<__int128>(b.num_) * a.den_,
              static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(Rational a, Rational b) { return a + (-b); }

Rational operator*(Rational a, Rational b) {
  return make(static_cast<__int128>(a.num_) * b.num_,
              static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(Rational a, Rational b) {
  if (b.num_ == 0) throw std::domain_error("division by zero");
  return make(static_cast<__int128>(a.num_) * b.den_,
              static_cast<__int128>(a.den_) * b.num_);
}

std::string Rational::to_string() const {
  std::string out = std::to_string(num_);
  if (den_ != 1) out += "/" + std::to_string(den_);
  return out;
}

Angle Angle::parse(std::string_view text) {
  try {
    return AngleParser(text).parse();
  } catch (const AngleParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw AngleParseError("angle '" + std::string(text) + "': " + e.what(), 0);
  }
}

double Angle::radians() const {
  return pi_coeff_.to_double() * std::numbers::pi + constant_.to_double();
}

std::string Angle::to_string() const {
  if (pi_coeff_.is_zero()) return constant_.to_string();
  std::string out = pi_term(pi_coeff_);
  if (constant_.is_zero()) return out;
  if (constant_.num() > 0) out += "+";
  return out + constant_.to_string();
}

}  // namespace qsubst
