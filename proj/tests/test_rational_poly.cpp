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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "qmaps/numeric.hpp"
#include "qmaps/rational_poly.hpp"
#include "testutil.hpp"

using qmaps::BigInt;
using qmaps::Error;
using qmaps::ErrorCode;
using qmaps::Rational;
using qmaps::RationalPoly;
using qmaps::Real50;

TEST_CASE("construction trims and orders coefficients") {
  RationalPoly zero(std::vector<Rational>{Rational(0), Rational(0)});
  CHECK(zero.is_zero());
  CHECK(zero.degree() == -1);

  RationalPoly p = RationalPoly::from_highest_first(
      {Rational(1), Rational(0), Rational(0)});
  RationalPoly q(std::vector<Rational>{Rational(0), Rational(0), Rational(1)});
  CHECK(p == q);
  CHECK(p.degree() == 2);
  CHECK(p.leading() == Rational(1));
  CHECK(p.coeff(0) == Rational(0));
  CHECK(p.coeff(2) == Rational(1));
  CHECK(p.coeff(5) == Rational(0));    // outside stored range
  CHECK(p.coeff(-1) == Rational(0));
}

TEST_CASE("leading of the zero polynomial is an error") {
  RationalPoly zero;
  CHECK_THROWS_AS((void)zero.leading(), Error);
}

TEST_CASE("exact evaluation") {
  // p(x) = x^2 - 1/2 x at x = 1/3: 1/9 - 1/6 = -1/18.
  RationalPoly p = RationalPoly::from_highest_first(
      {Rational(1), Rational(-1, 2), Rational(0)});
  CHECK(p.eval(Rational(1, 3)) == Rational(-1, 18));
  CHECK(p.eval(Rational(0)) == Rational(0));
}

TEST_CASE("double and extended evaluation track the exact value") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 300; ++it) {
    RationalPoly p = qmt::random_poly(rng, 1 + static_cast<int>(rng() % 5));
    Rational x = qmt::random_rational(rng, 10, 10);
    double exact = p.eval(x).convert_to<double>();
    double d = p.eval(x.convert_to<double>());
    Real50 r = p.eval(Real50(x));
    CHECK(qmt::rel_gap(exact, d) < 1e-12);
    CHECK(qmt::rel_gap(exact, r.convert_to<double>()) < 1e-15);
  }
}

TEST_CASE("arithmetic is exact and pointwise-consistent") {
  std::mt19937_64 rng(12);
  for (int it = 0; it < 300; ++it) {
    RationalPoly p = qmt::random_poly(rng, static_cast<int>(rng() % 4) + 1);
    RationalPoly q = qmt::random_poly(rng, static_cast<int>(rng() % 4) + 1);
    Rational x = qmt::random_rational(rng, 8, 8);
    CHECK((p + q).eval(x) == p.eval(x) + q.eval(x));
    CHECK((p - q).eval(x) == p.eval(x) - q.eval(x));
    CHECK((p * q).eval(x) == p.eval(x) * q.eval(x));
    CHECK((p * q).degree() == p.degree() + q.degree());
    CHECK((p - p).is_zero());
    Rational s = qmt::random_rational(rng, 5, 5);
    CHECK(p.scaled(s).eval(x) == s * p.eval(x));
  }
}

TEST_CASE("derivative satisfies the product rule") {
  std::mt19937_64 rng(13);
  RationalPoly cube = RationalPoly::from_highest_first(
      {Rational(1), Rational(0), Rational(0), Rational(0)});
  CHECK(cube.derivative() ==
        RationalPoly::from_highest_first({Rational(3), Rational(0), Rational(0)}));
  for (int it = 0; it < 200; ++it) {
    RationalPoly p = qmt::random_poly(rng, static_cast<int>(rng() % 4) + 1);
    RationalPoly q = qmt::random_poly(rng, static_cast<int>(rng() % 4) + 1);
    CHECK((p * q).derivative() == p.derivative() * q + p * q.derivative());
  }
}

TEST_CASE("Taylor shift is exact composition with x + h") {
  std::mt19937_64 rng(14);
  for (int it = 0; it < 200; ++it) {
    RationalPoly p = qmt::random_poly(rng, static_cast<int>(rng() % 5) + 1);
    Rational h = qmt::random_rational(rng, 6, 6);
    Rational x = qmt::random_rational(rng, 6, 6);
    CHECK(p.shifted(h).eval(x) == p.eval(x + h));
    CHECK(p.shifted(Rational(0)) == p);
    // Shift and un-shift round-trips exactly.
    CHECK(p.shifted(h).shifted(-h) == p);
  }
}

TEST_CASE("to_string mentions the variable and survives simple cases") {
  RationalPoly p = RationalPoly::from_highest_first(
      {Rational(1), Rational(-1, 2), Rational(0)});
  std::string s = p.to_string();
  CHECK(s.find("x^2") != std::string::npos);
  CHECK(!RationalPoly().to_string().empty());
}

TEST_CASE("root counting in open intervals via Sturm chains") {
  RationalPoly x2m1 = RationalPoly::from_highest_first(
      {Rational(1), Rational(0), Rational(-1)});  // x^2 - 1
  CHECK(qmaps::count_roots_open(x2m1, Rational(-2), Rational(2)) == 2);
  CHECK(qmaps::count_roots_open(x2m1, Rational(0), Rational(2)) == 1);
  CHECK(qmaps::count_roots_open(x2m1, Rational(2), Rational(3)) == 0);

  // (x-1)(x-2)(x-3)
  RationalPoly c = RationalPoly::from_highest_first(
      {Rational(1), Rational(-6), Rational(11), Rational(-6)});
  CHECK(qmaps::count_roots_open(c, Rational(0), Rational(4)) == 3);
  CHECK(qmaps::count_roots_open(c, Rational(0), Rational(5, 2)) == 2);

  // Double root counts once (distinct roots).
  RationalPoly sq = RationalPoly::from_highest_first(
      {Rational(1), Rational(-2), Rational(1)});  // (x-1)^2
  CHECK(qmaps::count_roots_open(sq, Rational(0), Rational(2)) == 1);

  // Roots at the endpoints are rejected.
  CHECK_THROWS_AS((void)qmaps::count_roots_open(x2m1, Rational(1), Rational(2)),
                  Error);
}

TEST_CASE("closed-interval root detection handles tangential roots") {
  // (2x-1)^2 touches zero at 1/2 without a sign change.
  RationalPoly t = RationalPoly::from_highest_first(
      {Rational(4), Rational(-4), Rational(1)});
  CHECK(qmaps::has_root_in_closed(t, Rational(0), Rational(1)));
  CHECK(!qmaps::has_root_in_closed(t, Rational(3, 5), Rational(1)));

  RationalPoly pos = RationalPoly::from_highest_first(
      {Rational(1), Rational(0), Rational(1)});  // x^2 + 1
  CHECK(!qmaps::has_root_in_closed(pos, Rational(-10), Rational(10)));

  // Root exactly at an endpoint is found.
  RationalPoly lin = RationalPoly::from_highest_first({Rational(1), Rational(-1)});
  CHECK(qmaps::has_root_in_closed(lin, Rational(1), Rational(2)));
}

TEST_CASE("root counts agree with a rational-root construction") {
  std::mt19937_64 rng(15);
  for (int it = 0; it < 200; ++it) {
    // Build p with known rational roots, count how many fall inside (-3, 3).
    int nroots = 1 + static_cast<int>(rng() % 4);
    std::vector<Rational> roots;
    RationalPoly p(std::vector<Rational>{Rational(1)});
    bool endpoint_clash = false;
    for (int i = 0; i < nroots; ++i) {
      Rational r = qmt::random_rational(rng, 9, 4);
      if (r == 3 || r == -3) endpoint_clash = true;
      bool fresh = true;
      for (const auto& prev : roots) fresh = fresh && (prev != r);
      if (fresh) roots.push_back(r);
      p = p * RationalPoly(std::vector<Rational>{-r, Rational(1)});
    }
    if (endpoint_clash) continue;
    int expected = 0;
    for (const auto& r : roots)
      if (Rational(-3) < r && r < Rational(3)) ++expected;
    CHECK(qmaps::count_roots_open(p, Rational(-3), Rational(3)) == expected);
  }
}
