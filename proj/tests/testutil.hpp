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

#ifndef QMAPS_TESTS_TESTUTIL_HPP
#define QMAPS_TESTS_TESTUTIL_HPP

#include <random>
#include <vector>

#include "doctest.h"
#include "qmaps/numeric.hpp"
#include "qmaps/rational_poly.hpp"

namespace qmt {

using qmaps::BigInt;
using qmaps::Rational;

// Uniform rational with numerator in [-num_bound, num_bound] and denominator
// in [1, den_bound].
inline Rational random_rational(std::mt19937_64& rng, long long num_bound,
                                long long den_bound) {
  std::uniform_int_distribution<long long> num(-num_bound, num_bound);
  std::uniform_int_distribution<long long> den(1, den_bound);
  return Rational(BigInt(num(rng)), BigInt(den(rng)));
}

// Nonzero variant.
inline Rational random_nonzero_rational(std::mt19937_64& rng, long long num_bound,
                                        long long den_bound) {
  for (;;) {
    Rational r = random_rational(rng, num_bound, den_bound);
    if (r != 0) return r;
  }
}

// Random polynomial of exactly the requested degree.
inline qmaps::RationalPoly random_poly(std::mt19937_64& rng, int degree,
                                       long long num_bound = 6,
                                       long long den_bound = 6) {
  std::vector<Rational> c(static_cast<size_t>(degree) + 1);
  for (int j = 0; j < degree; ++j) c[static_cast<size_t>(j)] = random_rational(rng, num_bound, den_bound);
  c[static_cast<size_t>(degree)] = random_nonzero_rational(rng, num_bound, den_bound);
  return qmaps::RationalPoly(c);
}

inline double rel_gap(double a, double b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

}  // namespace qmt

#endif  // QMAPS_TESTS_TESTUTIL_HPP
