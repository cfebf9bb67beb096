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
#include <cmath>
#include <random>
#include <vector>

#include "qmaps/diophantine.hpp"
#include "testutil.hpp"

using qmaps::ApproxReal;
using qmaps::BigInt;
using qmaps::ContinuedFraction;
using qmaps::Error;
using qmaps::ErrorCode;
using qmaps::Rational;

namespace {

ContinuedFraction ones(size_t count) {
  std::vector<BigInt> a(count, BigInt(1));
  return ContinuedFraction::from_quotients(std::move(a));
}

}  // namespace

TEST_CASE("rational expansions terminate with the right quotients") {
  ContinuedFraction cf = ContinuedFraction::from_rational(Rational(355, 113));
  REQUIRE(cf.terms() == 3);
  CHECK(cf.a[0] == 3);
  CHECK(cf.a[1] == 7);
  CHECK(cf.a[2] == 16);
  CHECK(cf.p[2] == 355);
  CHECK(cf.q[2] == 113);
  CHECK(!cf.truncated);
  CHECK(cf.convergent(2) == Rational(355, 113));
  CHECK(cf.convergent(0) == Rational(3));

  ContinuedFraction whole = ContinuedFraction::from_rational(Rational(42));
  REQUIRE(whole.terms() == 1);
  CHECK(whole.a[0] == 42);

  // Negative input uses the floor convention: -7/3 = [-3; 1, 2].
  ContinuedFraction neg = ContinuedFraction::from_rational(Rational(-7, 3));
  REQUIRE(neg.terms() == 3);
  CHECK(neg.a[0] == -3);
  CHECK(neg.a[1] == 1);
  CHECK(neg.a[2] == 2);
  CHECK(neg.convergent(2) == Rational(-7, 3));
}

TEST_CASE("random rationals round-trip through their expansion") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 500; ++it) {
    Rational x = qmt::random_rational(rng, 100000, 100000);
    ContinuedFraction cf = ContinuedFraction::from_rational(x);
    REQUIRE(cf.terms() >= 1);
    CHECK(cf.convergent(cf.terms() - 1) == x);
    CHECK(!cf.truncated);
    // Standard recurrences and the determinant identity.
    for (size_t m = 2; m < cf.terms(); ++m) {
      CHECK(cf.p[m] == cf.a[m] * cf.p[m - 1] + cf.p[m - 2]);
      CHECK(cf.q[m] == cf.a[m] * cf.q[m - 1] + cf.q[m - 2]);
    }
    for (size_t m = 1; m < cf.terms(); ++m) {
      BigInt det = cf.p[m] * cf.q[m - 1] - cf.p[m - 1] * cf.q[m];
      CHECK(abs(det) == 1);
    }
    // Last quotient of a multi-term expansion is >= 2 (canonical form).
    if (cf.terms() > 1) CHECK(cf.a[cf.terms() - 1] >= 2);
  }
}

TEST_CASE("interval-certified expansion of approximants") {
  // 60-digit golden ratio: plenty of certified quotients, all equal 1.
  ContinuedFraction cf = ContinuedFraction::from_real(qmaps::golden_ratio(), 50);
  CHECK(cf.terms() >= 40);
  for (size_t i = 0; i < cf.terms(); ++i) CHECK(cf.a[i] == 1);

  // Three declared digits certify only a handful of quotients, and every
  // certified quotient agrees with the full-precision expansion.
  ContinuedFraction coarse =
      ContinuedFraction::from_real(ApproxReal::from_decimal("0.414"), 50);
  ContinuedFraction fine = ContinuedFraction::from_real(
      ApproxReal{qmaps::sqrt2().center - 1, qmaps::sqrt2().radius, 60}, 50);
  CHECK(coarse.truncated);
  CHECK(coarse.terms() < 10);
  REQUIRE(coarse.terms() >= 2);
  CHECK(coarse.a[0] == 0);
  CHECK(coarse.a[1] == 2);
  for (size_t i = 0; i < coarse.terms() && i < fine.terms(); ++i)
    CHECK(coarse.a[i] == fine.a[i]);

  // An interval that straddles a rational (here 1/3, where the expansion
  // flips between [0;3,...] and [0;2,1,...]) certifies nothing past it.
  ContinuedFraction third =
      ContinuedFraction::from_real(ApproxReal::from_decimal("0.333333"), 50);
  CHECK(third.truncated);
  CHECK(third.terms() == 1);
  CHECK(third.a[0] == 0);
}

TEST_CASE("digit strings with leading zeros parse in base 10") {
  // Regression: GMP's auto-detecting constructor read "0333" as octal.
  ApproxReal a = ApproxReal::from_decimal("0.333");
  CHECK(a.center == Rational(333, 1000));
  CHECK(a.radius == Rational(1, 1000));
  CHECK(ApproxReal::parse("~0.08").center == Rational(8, 100));
  CHECK(qmaps::parse_rational("0123/0100") == Rational(123, 100));
  CHECK(qmaps::parse_base10_int("0333") == 333);
  CHECK(qmaps::parse_base10_int("-042") == -42);
  CHECK_THROWS_AS((void)qmaps::parse_base10_int("0x10"), Error);
  CHECK_THROWS_AS((void)qmaps::parse_base10_int(""), Error);
  CHECK_THROWS_AS((void)qmaps::parse_base10_int("12 3"), Error);
  CHECK_THROWS_AS((void)qmaps::parse_rational("0x10/7"), Error);
}

TEST_CASE("from_quotients validates and reconstructs") {
  ContinuedFraction cf = ContinuedFraction::from_quotients(
      {BigInt(2), BigInt(3), BigInt(4)});
  CHECK(cf.convergent(2) == Rational(30, 13));
  CHECK_THROWS_AS(ContinuedFraction::from_quotients({BigInt(1), BigInt(0)}), Error);
  CHECK_THROWS_AS((void)cf.convergent(3), Error);
}

TEST_CASE("continuants: base cases, recursion, reversal symmetry") {
  std::vector<BigInt> empty;
  CHECK(qmaps::continuant(empty) == 1);
  std::vector<BigInt> one = {BigInt(5)};
  CHECK(qmaps::continuant(one) == 5);
  std::vector<BigInt> abc = {BigInt(2), BigInt(3), BigInt(4)};
  CHECK(qmaps::continuant(abc) == 30);

  std::mt19937_64 rng(42);
  for (int it = 0; it < 200; ++it) {
    size_t len = 2 + rng() % 8;
    std::vector<BigInt> s(len);
    for (auto& v : s) v = BigInt(1 + rng() % 9);
    // E(s) = s_last * E(s[:-1]) + E(s[:-2])
    BigInt full = qmaps::continuant(s);
    std::vector<BigInt> head(s.begin(), s.end() - 1);
    std::vector<BigInt> head2(s.begin(), s.end() - 2);
    CHECK(full == s.back() * qmaps::continuant(head) + qmaps::continuant(head2));
    // Reversal symmetry.
    std::vector<BigInt> rev(s.rbegin(), s.rend());
    CHECK(qmaps::continuant(rev) == full);
  }
}

TEST_CASE("cross determinants of convergents equal continuants") {
  // Fibonacci expansion, m = 4, k = 2: |p4 q2 - p2 q4| = 1.
  ContinuedFraction fib = ones(8);
  auto c = qmaps::cross_determinant_check(fib, 4, 2);
  CHECK(c.determinant == 1);
  CHECK(c.continuant_value == 1);
  CHECK(c.matches);

  std::mt19937_64 rng(43);
  for (int it = 0; it < 300; ++it) {
    size_t len = 3 + rng() % 8;
    std::vector<BigInt> a(len);
    a[0] = BigInt(rng() % 5);
    for (size_t i = 1; i < len; ++i) a[i] = BigInt(1 + rng() % 9);
    ContinuedFraction cf = ContinuedFraction::from_quotients(std::move(a));
    for (size_t m = 1; m < cf.terms(); ++m) {
      for (size_t k = 1; k <= m; ++k) {
        auto r = qmaps::cross_determinant_check(cf, m, k);
        CHECK(r.matches);
        if (k == 1) CHECK(r.determinant == 1);
      }
    }
  }
  CHECK_THROWS_AS((void)qmaps::cross_determinant_check(fib, 9, 1), Error);
  CHECK_THROWS_AS((void)qmaps::cross_determinant_check(fib, 2, 3), Error);
}

TEST_CASE("gcd profile against direct computation") {
  ContinuedFraction fib = ones(9);
  auto prof = qmaps::gcd_profile(fib, BigInt(6), 2, 0, 8);
  REQUIRE(prof.size() == 9);
  // p: 1 2 3 5 8 13 21 34 55; gcd with 6: 1 2 3 1 2 1 3 2 1.
  std::vector<long long> expect = {1, 2, 3, 1, 2, 1, 3, 2, 1};
  for (size_t i = 0; i < prof.size(); ++i) {
    CHECK(prof[i].first == i);
    CHECK(prof[i].second == expect[i]);
  }
  // k = 3 uses n^2 = 36.
  auto prof2 = qmaps::gcd_profile(fib, BigInt(6), 3, 4, 4);
  REQUIRE(prof2.size() == 1);
  CHECK(prof2[0].second == gcd(BigInt(8), BigInt(36)));
}

TEST_CASE("gcd product bound: frozen example and random verification") {
  ContinuedFraction fib = ones(8);
  auto rep = qmaps::gcd_product_bound_check(fib, BigInt(6), 2, 4, 2);
  CHECK(rep.holds);
  CHECK(rep.explicit_constant);
  REQUIRE(rep.lhs_exact.has_value());
  REQUIRE(rep.rhs_exact.has_value());
  CHECK(*rep.lhs_exact == "6");    // gcd(8,6) gcd(5,6) gcd(3,6) = 2*1*3
  CHECK(*rep.rhs_exact == "12");   // 6 * E(a4,a3) * E(a4) * E(a3) = 6*2*1*1

  std::mt19937_64 rng(44);
  for (int it = 0; it < 1000; ++it) {
    size_t len = 3 + rng() % 9;
    std::vector<BigInt> a(len);
    a[0] = BigInt(rng() % 4);
    for (size_t i = 1; i < len; ++i) a[i] = BigInt(1 + rng() % 6);
    ContinuedFraction cf = ContinuedFraction::from_quotients(std::move(a));
    long long n = 2 + static_cast<long long>(rng() % 9998);
    int k = 2 + static_cast<int>(rng() % 3);
    size_t m = 1 + rng() % (cf.terms() - 1);
    size_t M = rng() % std::min<size_t>(m, 4);
    auto r = qmaps::gcd_product_bound_check(cf, BigInt(n), k, m, M);
    CHECK(r.holds);
  }
}

TEST_CASE("best rational approximation with bounded denominator") {
  // sqrt(2) with Q = 10 picks 7/5.
  auto ap = qmaps::dirichlet_approx(qmaps::sqrt2(), BigInt(10));
  CHECK(ap.a == 7);
  CHECK(ap.q == 5);
  CHECK(ap.reduced);
  CHECK(ap.remainder_bound <= 1.0);

  std::mt19937_64 rng(45);
  for (int it = 0; it < 300; ++it) {
    Rational x = qmt::random_rational(rng, 500, 500);
    long long Q = 1 + static_cast<long long>(rng() % 100);
    auto r = qmaps::dirichlet_approx(ApproxReal::exact(x), BigInt(Q));
    CHECK(r.q >= 1);
    CHECK(r.q <= Q);
    // Certificate |x - a/q| <= 1/(qQ), checked in exact arithmetic.
    Rational gap = abs(x - Rational(r.a, r.q));
    CHECK(gap * r.q * Q <= 1);
    // theta reconstruction: |x - a/q| = |theta| / q^2 with |theta| <= bound.
    double theta = std::abs(gap.convert_to<double>()) *
                   (Rational(r.q) * Rational(r.q)).convert_to<double>();
    CHECK(theta <= r.remainder_bound + 1e-12);
    if (r.reduced) CHECK(gcd(abs(r.a), r.q) == 1);
  }
  CHECK_THROWS_AS((void)qmaps::dirichlet_approx(qmaps::sqrt2(), BigInt(0)), Error);
}

TEST_CASE("approximants too coarse for the requested Q are rejected") {
  // Two digits cannot certify a denominator search up to 10^6.
  CHECK_THROWS_AS(
      (void)qmaps::dirichlet_approx(ApproxReal::from_decimal("1.41"), BigInt(1000000)),
      Error);
  try {
    (void)qmaps::dirichlet_approx(ApproxReal::from_decimal("1.41"), BigInt(1000000));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PrecisionExceeded);
  }
}

TEST_CASE("dividing the gcd out of the scaled denominator") {
  qmaps::RationalApprox ap;
  ap.a = BigInt(22);
  ap.q = BigInt(7);
  ap.reduced = true;
  auto red = qmaps::reduce_against(ap, qmaps::pow_big(BigInt(4), 3));  // 64
  CHECK(red.g == 2);
  CHECK(red.a_prime == 11);
  CHECK(red.n_prime == 32);
  CHECK(red.coprime_ok);
}

TEST_CASE("runs of convergent numerators inside a range") {
  ContinuedFraction fib = ones(12);
  auto run = qmaps::find_convergents_in_range(fib, BigInt(5), BigInt(20));
  CHECK(!run.empty);
  CHECK(fib.p[run.first] == 5);
  CHECK(fib.p[run.last] == 13);
  CHECK(!run.undetermined);
  CHECK(run.max_index_over_log_hi > 0.0);

  auto none = qmaps::find_convergents_in_range(fib, BigInt(100000), BigInt(200000));
  CHECK(none.empty);
  CHECK_THROWS_AS((void)qmaps::find_convergents_in_range(fib, BigInt(5), BigInt(4)),
                  Error);
}

TEST_CASE("good convergents: frozen example, gcd gate, not-found reporting") {
  // Golden ratio, n = 10, k = 2, r = 1.4, eps = 0.3: looks for a numerator in
  // [10^1.1, 10^1.4] ~ [12.6, 25.1] with gcd(p, 10) <= 10^0.3 ~ 2; p = 13 wins.
  ContinuedFraction golden = ContinuedFraction::from_real(qmaps::golden_ratio());
  auto good = qmaps::find_good_convergent(golden, 10, 2, 1.4, 0.3);
  CHECK(good.m == 5);
  CHECK(good.p == 13);
  CHECK(good.q == 8);
  CHECK(good.g == 1);

  // 1/2 has convergent numerators {0, 1} only: nothing in range.
  ContinuedFraction half = ContinuedFraction::from_rational(Rational(1, 2));
  CHECK_THROWS_AS((void)qmaps::find_good_convergent(half, 10, 2, 1.4, 0.3), Error);
  try {
    (void)qmaps::find_good_convergent(half, 10, 2, 1.4, 0.3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotFound);
  }
  CHECK_THROWS_AS((void)qmaps::find_good_convergent(golden, 10, 2, 0.3, 1.4), Error);
  CHECK_THROWS_AS((void)qmaps::find_good_convergent(golden, 1, 2, 1.4, 0.3), Error);
}

TEST_CASE("the min-form statistic matches a direct scan") {
  ContinuedFraction fib = ones(12);
  for (long long n : {4LL, 10LL, 36LL}) {
    for (int k : {2, 3}) {
      for (auto variant : {qmaps::FnVariant::ByDenominator, qmaps::FnVariant::ByNumerator}) {
        auto fn = qmaps::f_n_alpha(fib, n, k, variant);
        double best = 1e300;
        size_t best_m = 0;
        BigInt npow = qmaps::pow_big(BigInt(n), static_cast<unsigned>(k - 1));
        for (size_t m = 0; m < fib.terms(); ++m) {
          BigInt g = gcd(abs(fib.p[m]), npow);
          if (g == 0) continue;
          const BigInt& den = variant == qmaps::FnVariant::ByDenominator ? fib.q[m] : fib.p[m];
          if (den == 0) continue;
          double ng = Rational(BigInt(n) * g).convert_to<double>();
          double dq = Rational(den).convert_to<double>();
          double v = ng / dq + dq / ng;
          if (v < best) {
            best = v;
            best_m = m;
          }
        }
        CHECK(fn.value == doctest::Approx(best).epsilon(1e-12));
        CHECK(fn.arg_m == best_m);
      }
    }
  }
  // Frozen: golden-type expansion at n = 10, k = 2 is minimized at m = 7,
  // where 10 g / q + q / (10 g) = 20/21 + 21/20.
  auto fn = qmaps::f_n_alpha(fib, 10, 2);
  CHECK(fn.arg_m == 7);
  CHECK(fn.value == doctest::Approx(20.0 / 21.0 + 21.0 / 20.0).epsilon(1e-12));
}

TEST_CASE("denominator growth statistics") {
  // Quotients all 2: q_m are the Pell numbers, q_m^(1/m) -> 1 + sqrt(2).
  std::vector<BigInt> twos(40, BigInt(2));
  ContinuedFraction pell = ContinuedFraction::from_quotients(std::move(twos));
  double stat = qmaps::khinchin_levy_stat(pell, 39);
  CHECK(stat == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(0.02));
  // Fibonacci: limit is the golden ratio.
  ContinuedFraction fib = ones(40);
  CHECK(qmaps::khinchin_levy_stat(fib, 39) ==
        doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(0.02));
  CHECK_THROWS_AS((void)qmaps::khinchin_levy_stat(fib, 0), Error);
  CHECK_THROWS_AS((void)qmaps::khinchin_levy_stat(fib, 40), Error);
}

TEST_CASE("quotient growth flags super-polynomial tails") {
  ContinuedFraction tame = ones(30);
  auto r = qmaps::quotient_growth_check(tame);
  CHECK(!r.flagged);
  CHECK(r.tail_statistic <= 1.0);

  ContinuedFraction wild = ContinuedFraction::from_quotients(
      {BigInt(1), BigInt(2), BigInt(4), BigInt(16), BigInt(256), BigInt(65536)});
  auto w = qmaps::quotient_growth_check(wild);
  CHECK(w.flagged);
  CHECK(w.tail_statistic > 1.0);
  CHECK(w.overall_argmax == 5);
}
