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
#include <cstdio>
#include <fstream>
#include <random>

#include "qmaps/pcf.hpp"
#include "testutil.hpp"

using qmaps::ApproxReal;
using qmaps::Error;
using qmaps::ErrorCode;
using qmaps::IndexRange;
using qmaps::PolynomialPhase;
using qmaps::Rational;
using qmaps::SpectrumParams;
using qmaps::TestFunction;

namespace {

SpectrumParams params_of(long long n, const Rational& a, const Rational& b,
                         IndexRange range = IndexRange::OneToN) {
  SpectrumParams p;
  p.n = n;
  p.alpha = ApproxReal::exact(a);
  p.beta = ApproxReal::exact(b);
  p.index_range = range;
  return p;
}

}  // namespace

TEST_CASE("Fejer pair: frequency side, position side, reference value") {
  TestFunction f = TestFunction::fejer();
  CHECK(f.fhat(0.0) == 1.0);
  CHECK(f.fhat(0.5) == 0.5);
  CHECK(f.fhat(-0.5) == 0.5);
  CHECK(f.fhat(1.0) == 0.0);
  CHECK(f.fhat(1.2) == 0.0);
  CHECK(f.support_radius() == 1.0);
  CHECK(f.f_zero() == 1.0);
  CHECK(f.f(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  // f(1/2) = (sin(pi/2)/(pi/2))^2 = 4/pi^2.
  CHECK(f.f(0.5) ==
        doctest::Approx(4.0 / (M_PI * M_PI)).epsilon(1e-14));
  CHECK(f.f(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(f.has_physical_form());
  CHECK(f.consistent());
  CHECK(qmaps::poisson_reference(f) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("triangle powers") {
  TestFunction f = TestFunction::triangle_power(2);
  CHECK(f.fhat(0.5) == doctest::Approx(0.25));
  CHECK(f.fhat(1.5) == 0.0);
  CHECK(f.f_zero() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(qmaps::poisson_reference(f) == doctest::Approx(1.0 + 2.0 / 3.0));
  CHECK(!f.has_physical_form());
  CHECK_THROWS_AS((void)f.f(0.3), Error);
  CHECK(f.consistent());
  CHECK_THROWS_AS((void)TestFunction::triangle_power(0), Error);
}

TEST_CASE("user tables interpolate and integrate") {
  TestFunction f = TestFunction::from_table({{0.0, 1.0}, {0.5, 0.5}, {1.0, 0.0}});
  // Piecewise-linear through the Fejer nodes is the Fejer hat itself.
  CHECK(f.fhat(0.25) == doctest::Approx(0.75));
  CHECK(f.fhat(-0.75) == doctest::Approx(0.25));
  CHECK(f.fhat(2.0) == 0.0);
  CHECK(f.f_zero() == doctest::Approx(1.0));
  CHECK(qmaps::poisson_reference(f) == doctest::Approx(2.0));
  CHECK(f.consistent());

  CHECK_THROWS_AS(TestFunction::from_table({}), Error);
  CHECK_THROWS_AS(TestFunction::from_table({{0.5, 1.0}, {1.0, 0.0}}), Error);
  CHECK_THROWS_AS(TestFunction::from_table({{0.0, 1.0}, {0.0, 0.5}}), Error);
}

TEST_CASE("user tables load from files with comments and commas") {
  const char* path = "/tmp/qmaps_test_table.csv";
  {
    std::ofstream out(path);
    out << "# frequency-side nodes\n"
        << "0, 1.0\n"
        << "0.5 0.5\n"
        << "\n"
        << "1.0, 0\n";
  }
  TestFunction f = TestFunction::from_table_file(path);
  CHECK(f.support_radius() == 1.0);
  CHECK(f.fhat(0.25) == doctest::Approx(0.75));
  std::remove(path);
  CHECK_THROWS_AS((void)TestFunction::from_table_file("/tmp/does_not_exist_qmaps"),
                  Error);
}

TEST_CASE("zero parameters give rho2 = n exactly (Fejer kernel identity)") {
  TestFunction f = TestFunction::fejer();
  PolynomialPhase phase = PolynomialPhase::parse("1,0,0");
  for (long long n : {1LL, 2LL, 3LL, 7LL, 32LL, 101LL}) {
    auto v = qmaps::rho2_local(f, phase, params_of(n, Rational(0), Rational(0)));
    CHECK(std::abs(v.value - static_cast<double>(n)) < 1e-9 * static_cast<double>(n));
    CHECK(v.poisson_ref == doctest::Approx(2.0));
  }
  // Symmetric range: the phase count 2n+1 plays the role of n.
  auto v = qmaps::rho2_local(
      f, phase, params_of(10, Rational(0), Rational(0), IndexRange::MinusNToN));
  CHECK(std::abs(v.value - 21.0) < 1e-9);
}

TEST_CASE("cumulative average of the integrable point is (N+1)/2") {
  TestFunction f = TestFunction::fejer();
  PolynomialPhase phase = PolynomialPhase::parse("1,0,0");
  auto c = qmaps::rho2_cumulative(f, phase, ApproxReal::exact_int(0),
                                  ApproxReal::exact_int(0), 8, true);
  CHECK(c.value == doctest::Approx(4.5).epsilon(1e-12));
  REQUIRE(c.per_n.size() == 8);
  for (long long n = 1; n <= 8; ++n)
    CHECK(c.per_n[static_cast<size_t>(n - 1)].value ==
          doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  CHECK_THROWS_AS((void)qmaps::rho2_cumulative(f, phase, ApproxReal::exact_int(0),
                                               ApproxReal::exact_int(0), 0),
                  Error);
}

TEST_CASE("window sizing: too small throws, wider window changes nothing") {
  TestFunction f = TestFunction::fejer();
  PolynomialPhase phase = PolynomialPhase::parse("1,0,0");
  SpectrumParams p = params_of(32, Rational(5, 7), Rational(1, 3));
  qmaps::PhaseSet ps = qmaps::eigenphases(phase, p);

  auto narrow = qmaps::trace_window(ps, 10);
  CHECK_THROWS_AS((void)qmaps::rho2_local(f, narrow), Error);
  try {
    (void)qmaps::rho2_local(f, narrow);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowTooSmall);
  }

  auto tight = qmaps::trace_window(ps, 32);
  auto wide = qmaps::trace_window(ps, 64);
  auto a = qmaps::rho2_local(f, tight);
  auto b = qmaps::rho2_local(f, wide);
  CHECK(a.value == b.value);  // fhat vanishes outside the support
  CHECK(a.ell_window == 32);
  CHECK(b.ell_window == 32);
}

TEST_CASE("frequency-side value matches position-side pair counting") {
  TestFunction f = TestFunction::fejer();
  std::mt19937_64 rng(31);
  PolynomialPhase phase = PolynomialPhase::parse("1,0,0");
  for (int it = 0; it < 10; ++it) {
    long long n = (it % 2) ? 16 : 64;
    SpectrumParams p = params_of(n, qmt::random_rational(rng, 40, 40),
                                 qmt::random_rational(rng, 40, 40));
    qmaps::PhaseSet ps = qmaps::eigenphases(phase, p);
    auto v = qmaps::rho2_local(f, phase, p);
    double tol = 1e-7 / static_cast<double>(n);
    long long M = qmaps::recommended_m_cutoff(n, tol);
    double oracle = qmaps::pair_count_oracle(f, ps.phases, n, M);
    CHECK(std::abs(v.value - oracle) < 5e-7);
  }
}

TEST_CASE("pair counting input validation") {
  TestFunction f = TestFunction::fejer();
  TestFunction t = TestFunction::triangle_power(2);
  std::vector<double> phases = {0.0, 0.25};
  CHECK_THROWS_AS((void)qmaps::pair_count_oracle(t, phases, 2, 10), Error);
  CHECK_THROWS_AS((void)qmaps::pair_count_oracle(f, phases, 0, 10), Error);
  CHECK_THROWS_AS((void)qmaps::pair_count_oracle(f, phases, 2, 0), Error);
  CHECK_THROWS_AS((void)qmaps::recommended_m_cutoff(4, 0.0), Error);
  CHECK(qmaps::recommended_m_cutoff(4, 1e-6) > qmaps::recommended_m_cutoff(4, 1e-3));
}

TEST_CASE("streaming accumulator reproduces the batch mean") {
  TestFunction f = TestFunction::fejer();
  PolynomialPhase phase = PolynomialPhase::parse("1,1/2,0");
  auto c = qmaps::rho2_cumulative(f, phase, ApproxReal::exact(Rational(3, 7)),
                                  ApproxReal::exact(Rational(1, 5)), 40, true);
  qmaps::CumulativeAccumulator acc;
  for (const auto& v : c.per_n) acc.add(v.value);
  CHECK(acc.count() == 40);
  CHECK(acc.mean() == doctest::Approx(c.value).epsilon(1e-14));
  qmaps::CumulativeAccumulator empty;
  CHECK(empty.mean() == 0.0);
}

TEST_CASE("cumulative-average increments decompose exactly") {
  TestFunction f = TestFunction::fejer();
  PolynomialPhase phase = PolynomialPhase::parse("1,0,0");
  // Integrable point, N=4 -> M=6: the two terms are -5/6 and 11/6, sum 1.
  auto d = qmaps::oscillation_decomposition(f, phase, ApproxReal::exact_int(0),
                                            ApproxReal::exact_int(0), 4, 6);
  CHECK(d.term_scaled_prev == doctest::Approx(-5.0 / 6.0).epsilon(1e-12));
  CHECK(d.term_new_levels == doctest::Approx(11.0 / 6.0).epsilon(1e-12));
  CHECK(d.sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.direct_difference == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.identity_holds);

  // Holds for generic parameters too.
  auto g = qmaps::oscillation_decomposition(f, phase, qmaps::golden_ratio(),
                                            ApproxReal::exact(Rational(1, 3)), 20, 33);
  CHECK(g.identity_holds);
  CHECK(g.sum == doctest::Approx(g.direct_difference).epsilon(1e-10));

  CHECK_THROWS_AS((void)qmaps::oscillation_decomposition(
                      f, phase, ApproxReal::exact_int(0), ApproxReal::exact_int(0),
                      6, 6),
                  Error);
}

TEST_CASE("alternative test functions feed the same pipeline") {
  PolynomialPhase phase = PolynomialPhase::parse("1,0,0");
  SpectrumParams p = params_of(24, Rational(5, 7), Rational(0));
  TestFunction tri = TestFunction::triangle_power(3);
  auto v = qmaps::rho2_local(tri, phase, p);
  CHECK(v.value > 0.0);
  CHECK(v.poisson_ref == doctest::Approx(1.5));
  // A table mimicking the Fejer hat reproduces the Fejer value.
  TestFunction tab = TestFunction::from_table({{0.0, 1.0}, {1.0, 0.0}});
  auto a = qmaps::rho2_local(TestFunction::fejer(), phase, p);
  auto b = qmaps::rho2_local(tab, phase, p);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-14));
}

TEST_CASE("local values are nonnegative for nonnegative fhat") {
  std::mt19937_64 rng(32);
  TestFunction f = TestFunction::fejer();
  for (int it = 0; it < 50; ++it) {
    PolynomialPhase phase{qmt::random_poly(rng, 2 + static_cast<int>(rng() % 2))};
    long long n = 2 + static_cast<long long>(rng() % 60);
    SpectrumParams p = params_of(n, qmt::random_rational(rng, 30, 30),
                                 qmt::random_rational(rng, 30, 30));
    auto v = qmaps::rho2_local(f, phase, p);
    CHECK(v.value >= 0.0);
    CHECK(v.n == n);
  }
}
