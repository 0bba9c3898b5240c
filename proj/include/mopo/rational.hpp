// Copyright 2026 The mopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MOPO_RATIONAL_HPP_
#define MOPO_RATIONAL_HPP_

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mopo {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "p" or a decimal such as "-1.25" or "3e-2" exactly.
/// Throws ParseError on anything else (including a zero denominator).
Rational parse_rational(std::string_view text);

/// Lowest-terms rendering: "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

Rational power(const Rational& base, unsigned long exponent);

/// Scales a non-zero vector to the primitive integer vector with the same
/// direction (gcd of entries is 1). A zero vector is returned unchanged.
RationalVector primitive_direction(const RationalVector& v);

/// A value of the extended rational line {-inf} u Q u {+inf}.
///
/// Scaling follows 0 * (+-inf) = 0. Adding +inf and -inf throws
/// UndefinedExpectation.
class ExtReal {
 public:
  enum class Kind : std::uint8_t { kNegInf, kFinite, kPosInf };

  ExtReal() = default;
  ExtReal(Rational v) : value_(std::move(v)) {}  // NOLINT: implicit on purpose
  ExtReal(long v) : value_(v) {}                 // NOLINT
  ExtReal(int v) : value_(v) {}                  // NOLINT

  static ExtReal pos_inf() { return ExtReal(Kind::kPosInf); }
  static ExtReal neg_inf() { return ExtReal(Kind::kNegInf); }

  /// Accepts anything parse_rational does plus "inf", "+inf", "-inf".
  static ExtReal parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool is_pos_inf() const { return kind_ == Kind::kPosInf; }
  bool is_neg_inf() const { return kind_ == Kind::kNegInf; }

  /// The finite value. Throws std::logic_error on an infinity.
  const Rational& value() const;

  std::string str() const;
  double to_double() const;

  friend ExtReal operator+(const ExtReal& x, const ExtReal& y);
  friend ExtReal operator-(const ExtReal& x);
  friend ExtReal operator-(const ExtReal& x, const ExtReal& y) {
    return x + (-y);
  }
  friend ExtReal operator*(const Rational& c, const ExtReal& x);
  ExtReal& operator+=(const ExtReal& o) { return *this = *this + o; }

  friend bool operator==(const ExtReal& x, const ExtReal& y);
  friend std::strong_ordering operator<=>(const ExtReal& x, const ExtReal& y);

 private:
  explicit ExtReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::kFinite;
  Rational value_;
};

using ExtRealVector = std::vector<ExtReal>;

/// -1, 0 or 1 according to the lexicographic order.
int lex_compare(const ExtRealVector& x, const ExtRealVector& y);

/// x >= y component-wise.
bool dominates(const ExtRealVector& x, const ExtRealVector& y);

bool all_finite(const ExtRealVector& x);

/// Finite components as rationals. Throws DimensionMismatch if some
/// component is infinite.
RationalVector finite_part(const ExtRealVector& x);

ExtRealVector to_ext(const RationalVector& x);

/// Comma separated, e.g. "1/2,+inf".
std::string to_string(const ExtRealVector& x);
ExtRealVector parse_ext_vector(std::string_view csv);

}  // namespace mopo

#endif  // MOPO_RATIONAL_HPP_
