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

#ifndef QMAPS_NUMERIC_HPP
#define QMAPS_NUMERIC_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/gmp.hpp>

namespace qmaps {

// Exact integer / rational arithmetic (GMP-backed).  Convergent numerators,
// n^(k-1) powers and phase numerators routinely exceed 64 bits, so exactness
// here is not optional.
using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

// Extended-precision real scalar (~168-bit mantissa).  Used for the
// non-rational phase path and for logarithms/powers where double rounding
// near a decision boundary would be awkward to reason about.
using Real50 = boost::multiprecision::cpp_bin_float_50;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode : int {
  Ok = 0,
  InvalidArgument = 1,
  DegeneratePolynomial = 2,
  PrecisionExceeded = 3,
  WindowTooSmall = 4,
  UnsupportedKind = 5,
  CostGuard = 6,
  NotFound = 7,
  Io = 8,
  Internal = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// ---------------------------------------------------------------------------
// Fractional parts: frac(x) in [0, 1).
// ---------------------------------------------------------------------------

// Floor division remainder: result in [0, |den|).
BigInt mod_floor(const BigInt& num, const BigInt& den);

Rational frac(const Rational& x);
Real50 frac(const Real50& x);
double frac(double x);

// Integer square root (floor).
BigInt isqrt(const BigInt& x);

BigInt pow_big(const BigInt& base, unsigned exp);

// Distance to the nearest integer, in [0, 1/2].
Rational nearest_int_dist(const Rational& x);
double nearest_int_dist(double x);

// ---------------------------------------------------------------------------
// ApproxReal: a real input known to lie in [center - radius, center + radius].
//
// Exact rationals carry radius 0.  A decimal string of d fractional digits
// loads as numerator/10^d with radius 10^-d, so every downstream computation
// can run on one exact-rational path while still accounting for the declared
// input precision.
// ---------------------------------------------------------------------------

struct ApproxReal {
  Rational center;
  Rational radius;          // 0 => exact
  int declared_digits = 0;  // significant digits for approximants, 0 => exact

  bool is_exact() const { return radius == 0; }
  double to_double() const { return center.convert_to<double>(); }
  Real50 to_real50() const { return Real50(center); }

  static ApproxReal exact(const Rational& value);
  static ApproxReal exact_int(long long value);

  // "3.1415926..." -> rational approximant with declared precision equal to
  // the number of significant digits supplied.
  static ApproxReal from_decimal(const std::string& digits);

  // General parser used by the CLI and configs:
  //   "a/b"            exact rational
  //   "0.25", "-3"     exact rational (decimal literals are exact)
  //   "~1.6180339..."  decimal approximant with declared precision
  //   "golden"         (1+sqrt(5))/2 to 60 digits
  //   "sqrt2"          sqrt(2) to 60 digits
  static ApproxReal parse(const std::string& text);
};

// Built-in approximants, generated by exact integer square roots.
ApproxReal golden_ratio(int digits = 60);
ApproxReal sqrt2(int digits = 60);

// Decimal expansion of an ApproxReal's center with the given number of
// fractional digits (used to feed continued-fraction interval expansion).
std::string decimal_string(const Rational& value, int digits);

// Parse "a/b" or a decimal literal as an exact rational.  Throws
// Error(InvalidArgument) on malformed input.
Rational parse_rational(const std::string& text);

// Strict base-10 integer parse ([+-]?[0-9]+).  GMP's string constructor
// auto-detects octal/hex from "0"/"0x" prefixes, which silently corrupts
// digit strings like "0333"; all user-facing integer parsing goes through
// here instead.  Throws Error(InvalidArgument) on malformed input.
BigInt parse_base10_int(const std::string& text);

// ---------------------------------------------------------------------------
// Compensated summation.  The cumulative averages and inequality checks in
// this project compare sums at 1e-10..1e-12 relative tolerance, so the
// accumulators keep a Kahan-Neumaier correction term.
// ---------------------------------------------------------------------------

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// |a - b| <= tol * max(|a|, |b|, floor).  The floor keeps comparisons of
// quantities that are exactly (or nearly) zero meaningful.
bool close_rel(double a, double b, double tol, double floor = 1.0);

}  // namespace qmaps

#endif  // QMAPS_NUMERIC_HPP
