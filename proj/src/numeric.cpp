// Copyright 2026 the qmaps authors
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

#include "qmaps/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace qmaps {

BigInt mod_floor(const BigInt& num, const BigInt& den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "mod_floor: zero denominator");
  BigInt d = den < 0 ? BigInt(-den) : den;
  BigInt r = num % d;  // truncated toward zero
  if (r < 0) r += d;
  return r;
}

Rational frac(const Rational& x) {
  BigInt num = numerator(x);
  BigInt den = denominator(x);  // canonical: den > 0
  return Rational(mod_floor(num, den), den);
}

Real50 frac(const Real50& x) {
  Real50 f = x - boost::multiprecision::floor(x);
  if (f < 0) f += 1;         // guard against rounding at the floor boundary
  if (f >= 1) f -= 1;
  return f;
}

double frac(double x) {
  double f = x - std::floor(x);
  if (f < 0.0) f += 1.0;
  if (f >= 1.0) f -= 1.0;
  return f;
}

BigInt isqrt(const BigInt& x) {
  if (x < 0) throw Error(ErrorCode::InvalidArgument, "isqrt of negative value");
  return boost::multiprecision::sqrt(x);
}

BigInt pow_big(const BigInt& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

Rational nearest_int_dist(const Rational& x) {
  Rational f = frac(x);
  Rational other = 1 - f;
  return f <= other ? f : other;
}

double nearest_int_dist(double x) {
  double f = frac(x);
  return std::min(f, 1.0 - f);
}

ApproxReal ApproxReal::exact(const Rational& value) {
  return ApproxReal{value, Rational(0), 0};
}

ApproxReal ApproxReal::exact_int(long long value) {
  return ApproxReal{Rational(value), Rational(0), 0};
}

namespace {

bool is_decimal_literal(const std::string& s) {
  bool digit = false, dot = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (i == 0 && (c == '+' || c == '-')) continue;
    if (c == '.') {
      if (dot) return false;
      dot = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    digit = true;
  }
  return digit;
}

// Parse a decimal literal into (numerator, 10^digits_after_point).
Rational decimal_to_rational(const std::string& s, int* frac_digits) {
  std::string digits;
  bool neg = false;
  int after = 0;
  bool seen_dot = false;
  for (size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (i == 0 && (c == '+' || c == '-')) {
      neg = (c == '-');
      continue;
    }
    if (c == '.') {
      seen_dot = true;
      continue;
    }
    digits.push_back(c);
    if (seen_dot) ++after;
  }
  if (digits.empty()) throw Error(ErrorCode::InvalidArgument, "empty decimal literal");
  BigInt num = parse_base10_int(digits);
  if (neg) num = -num;
  if (frac_digits) *frac_digits = after;
  return Rational(num, pow_big(BigInt(10), static_cast<unsigned>(after)));
}

int significant_digits(const std::string& s) {
  int count = 0;
  bool leading = true;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) continue;
    if (c == '0' && leading) continue;
    leading = false;
    ++count;
  }
  return count;
}

}  // namespace

ApproxReal ApproxReal::from_decimal(const std::string& digits) {
  if (!is_decimal_literal(digits)) {
    throw Error(ErrorCode::InvalidArgument,
                "not a decimal literal: '" + digits + "'");
  }
  int after = 0;
  Rational center = decimal_to_rational(digits, &after);
  Rational radius(1, pow_big(BigInt(10), static_cast<unsigned>(after)));
  return ApproxReal{center, radius, significant_digits(digits)};
}

ApproxReal ApproxReal::parse(const std::string& text) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "empty scalar");
  if (text == "golden") return golden_ratio();
  if (text == "sqrt2") return sqrt2();
  if (text[0] == '~') return from_decimal(text.substr(1));
  return exact(parse_rational(text));
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string ns = text.substr(0, slash);
    std::string ds = text.substr(slash + 1);
    try {
      BigInt num = parse_base10_int(ns);
      BigInt den = parse_base10_int(ds);
      if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
      return Rational(num, den);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad rational: '" + text + "'");
    }
  }
  if (!is_decimal_literal(text)) {
    throw Error(ErrorCode::InvalidArgument, "bad rational: '" + text + "'");
  }
  return decimal_to_rational(text, nullptr);
}

BigInt parse_base10_int(const std::string& text) {
  size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    neg = text[i] == '-';
    ++i;
  }
  if (i == text.size())
    throw Error(ErrorCode::InvalidArgument, "empty integer literal");
  BigInt v = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw Error(ErrorCode::InvalidArgument, "bad integer literal: '" + text + "'");
    v = v * 10 + (c - '0');
  }
  return neg ? BigInt(-v) : v;
}

namespace {

// floor(sqrt(radicand) * 10^digits) via integer sqrt; |r/10^d - sqrt| < 10^-d.
ApproxReal sqrt_approx(int radicand, int digits) {
  BigInt scale = pow_big(BigInt(10), static_cast<unsigned>(digits));
  BigInt root = isqrt(radicand * scale * scale);
  return ApproxReal{Rational(root, scale), Rational(1, scale), digits};
}

}  // namespace

ApproxReal golden_ratio(int digits) {
  ApproxReal s5 = sqrt_approx(5, digits);
  // (1 + sqrt 5)/2; radius halves.
  return ApproxReal{(1 + s5.center) / 2, s5.radius / 2, digits};
}

ApproxReal sqrt2(int digits) { return sqrt_approx(2, digits); }

std::string decimal_string(const Rational& value, int digits) {
  bool neg = value < 0;
  Rational v = neg ? Rational(-value) : value;
  BigInt scale = pow_big(BigInt(10), static_cast<unsigned>(digits));
  BigInt scaled = (numerator(v) * scale) / denominator(v);  // floor
  BigInt ip = scaled / scale;
  BigInt fp = scaled % scale;
  std::ostringstream os;
  if (neg) os << '-';
  os << ip.str();
  if (digits > 0) {
    std::string f = fp.str();
    os << '.' << std::string(static_cast<size_t>(digits) - f.size(), '0') << f;
  }
  return os.str();
}

bool close_rel(double a, double b, double tol, double floor) {
  double scale = std::max({std::abs(a), std::abs(b), floor});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace qmaps
