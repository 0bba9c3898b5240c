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

#include "mopo/rational.hpp"

#include <cctype>
#include <limits>
#include <stdexcept>

#include "mopo/errors.hpp"

namespace mopo {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

[[noreturn]] void bad(std::string_view text) {
  throw ParseError("not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational out;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad(text);
    mpz_class n{std::string(num)}, d{std::string(den)};
    if (d == 0) bad(text);
    out = Rational(n, d);
  } else {
    std::string_view mant = s, exp_part;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      mant = s.substr(0, e);
      exp_part = s.substr(e + 1);
      if (exp_part.empty()) bad(text);
    }
    std::string_view ip = mant, fp;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
      ip = mant.substr(0, dot);
      fp = mant.substr(dot + 1);
    }
    if (ip.empty() && fp.empty()) bad(text);
    if (!ip.empty() && !all_digits(ip)) bad(text);
    if (!fp.empty() && !all_digits(fp)) bad(text);
    std::string digits = std::string(ip) + std::string(fp);
    mpz_class n(digits.empty() ? std::string("0") : digits);
    long exponent = -static_cast<long>(fp.size());
    if (!exp_part.empty()) {
      bool eneg = false;
      if (exp_part.front() == '-' || exp_part.front() == '+') {
        eneg = exp_part.front() == '-';
        exp_part.remove_prefix(1);
      }
      if (!all_digits(exp_part) || exp_part.size() > 6) bad(text);
      long e = std::stol(std::string(exp_part));
      exponent += eneg ? -e : e;
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                  static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    out = exponent < 0 ? Rational(n, scale) : Rational(n * scale);
  }
  out.canonicalize();
  if (negative) out = -out;
  return out;
}

std::string to_string(const Rational& q) {
  Rational c(q);
  c.canonicalize();
  return c.get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Rational power(const Rational& base, unsigned long exponent) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(d.get_mpz_t(), base.get_den_mpz_t(), exponent);
  Rational out(n, d);
  out.canonicalize();
  return out;
}

RationalVector primitive_direction(const RationalVector& v) {
  mpz_class lcm = 1, g = 0;
  for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> ints;
  ints.reserve(v.size());
  for (const auto& x : v) {
    mpz_class n = x.get_num() * (lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
    ints.push_back(n);
  }
  if (g == 0) return v;
  RationalVector out;
  out.reserve(v.size());
  for (auto& n : ints) out.emplace_back(mpz_class(n / g));
  return out;
}

// ---------------------------------------------------------------- ExtReal

ExtReal ExtReal::parse(std::string_view text) {
  std::string_view s = trim(text);
  if (s == "inf" || s == "+inf" || s == "infinity" || s == "+infinity")
    return pos_inf();
  if (s == "-inf" || s == "-infinity") return neg_inf();
  return ExtReal(parse_rational(s));
}

const Rational& ExtReal::value() const {
  if (!is_finite()) throw std::logic_error("value() of an infinite ExtReal");
  return value_;
}

std::string ExtReal::str() const {
  switch (kind_) {
    case Kind::kPosInf:
      return "+inf";
    case Kind::kNegInf:
      return "-inf";
    default:
      return to_string(value_);
  }
}

double ExtReal::to_double() const {
  switch (kind_) {
    case Kind::kPosInf:
      return std::numeric_limits<double>::infinity();
    case Kind::kNegInf:
      return -std::numeric_limits<double>::infinity();
    default:
      return value_.get_d();
  }
}

ExtReal operator+(const ExtReal& x, const ExtReal& y) {
  if (x.is_finite() && y.is_finite()) return ExtReal(Rational(x.value_ + y.value_));
  if ((x.is_pos_inf() && y.is_neg_inf()) || (x.is_neg_inf() && y.is_pos_inf()))
    throw UndefinedExpectation("+inf + -inf is undefined");
  return x.is_finite() ? y : x;
}

ExtReal operator-(const ExtReal& x) {
  if (x.is_pos_inf()) return ExtReal::neg_inf();
  if (x.is_neg_inf()) return ExtReal::pos_inf();
  return ExtReal(Rational(-x.value_));
}

ExtReal operator*(const Rational& c, const ExtReal& x) {
  if (x.is_finite()) return ExtReal(Rational(c * x.value_));
  if (sgn(c) == 0) return ExtReal(0);
  return sgn(c) > 0 ? x : -x;
}

bool operator==(const ExtReal& x, const ExtReal& y) {
  if (x.kind_ != y.kind_) return false;
  return !x.is_finite() || x.value_ == y.value_;
}

std::strong_ordering operator<=>(const ExtReal& x, const ExtReal& y) {
  if (x.kind_ != y.kind_) return x.kind_ <=> y.kind_;
  if (!x.is_finite()) return std::strong_ordering::equal;
  int c = cmp(x.value_, y.value_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

int lex_compare(const ExtRealVector& x, const ExtRealVector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("lex_compare: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto c = x[i] <=> y[i];
    if (c < 0) return -1;
    if (c > 0) return 1;
  }
  return 0;
}

bool dominates(const ExtRealVector& x, const ExtRealVector& y) {
  if (x.size() != y.size()) throw DimensionMismatch("dominates: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < y[i]) return false;
  return true;
}

bool all_finite(const ExtRealVector& x) {
  for (const auto& v : x)
    if (!v.is_finite()) return false;
  return true;
}

RationalVector finite_part(const ExtRealVector& x) {
  RationalVector out;
  out.reserve(x.size());
  for (const auto& v : x) {
    if (!v.is_finite()) throw DimensionMismatch("vector has an infinite component");
    out.push_back(v.value());
  }
  return out;
}

ExtRealVector to_ext(const RationalVector& x) { return ExtRealVector(x.begin(), x.end()); }

std::string to_string(const ExtRealVector& x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ',';
    out += x[i].str();
  }
  return out;
}

ExtRealVector parse_ext_vector(std::string_view csv) {
  ExtRealVector out;
  std::size_t start = 0;
  while (true) {
    auto comma = csv.find(',', start);
    out.push_back(ExtReal::parse(csv.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace mopo
