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

#ifndef QMAPS_RATIONAL_POLY_HPP
#define QMAPS_RATIONAL_POLY_HPP

#include <string>
#include <vector>

#include "qmaps/numeric.hpp"

namespace qmaps {

// Dense polynomial with exact rational coefficients, stored lowest degree
// first.  All algebra here is exact; floating-point evaluation is explicit.
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rational> ascending);

  // Construction from display order a_k x^k + ... + a_0, i.e. highest first.
  static RationalPoly from_highest_first(const std::vector<Rational>& coeffs);

  // Degree of the zero polynomial is -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const Rational& leading() const;
  Rational coeff(int j) const;  // 0 outside stored range
  const std::vector<Rational>& coeffs() const { return c_; }

  Rational eval(const Rational& x) const;
  Real50 eval(const Real50& x) const;
  double eval(double x) const;

  RationalPoly derivative() const;
  // p(x + h), exact Taylor shift.
  RationalPoly shifted(const Rational& h) const;

  RationalPoly operator+(const RationalPoly& o) const;
  RationalPoly operator-(const RationalPoly& o) const;
  RationalPoly operator*(const RationalPoly& o) const;
  RationalPoly scaled(const Rational& s) const;

  bool operator==(const RationalPoly& o) const { return c_ == o.c_; }

  std::string to_string() const;  // human-readable, e.g. "x^2 - 1/2 x"

 private:
  std::vector<Rational> c_;
  void trim();
};

// Number of distinct real roots of p in the open interval (lo, hi), by a
// Sturm chain over exact rationals.  Requires p(lo) != 0 and p(hi) != 0.
int count_roots_open(const RationalPoly& p, const Rational& lo, const Rational& hi);

// Whether p has any real root in the closed interval [lo, hi].  Handles
// even-multiplicity (tangential) roots, which defeat sign-change bisection.
bool has_root_in_closed(const RationalPoly& p, const Rational& lo, const Rational& hi);

}  // namespace qmaps

#endif  // QMAPS_RATIONAL_POLY_HPP
