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

#ifndef QMAPS_WEYL_HPP
#define QMAPS_WEYL_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qmaps/diophantine.hpp"
#include "qmaps/pcf.hpp"
#include "qmaps/rational_poly.hpp"
#include "qmaps/report.hpp"
#include "qmaps/spectrum.hpp"

namespace qmaps {

// ---------------------------------------------------------------------------
// Forward differences.
//
//   D_1 f(x; h)              = f(x+h) - f(x)
//   D_{j+1} f(x; h_1..h_{j+1}) = D_1 applied to D_j in x with shift h_{j+1}
//
// For a degree-k polynomial the order-(k-1) difference is linear in x with
// leading coefficient k! * lead(f) * h_1...h_{k-1}.
// ---------------------------------------------------------------------------

struct DifferencePolynomial {
  RationalPoly base;
  std::vector<Rational> shifts;  // h_1..h_j
  RationalPoly result;           // polynomial in x, exact

  int order() const { return static_cast<int>(shifts.size()); }
};

DifferencePolynomial forward_difference(const RationalPoly& base,
                                        const std::vector<Rational>& shifts);

// ---------------------------------------------------------------------------
// Exponential sums.
// ---------------------------------------------------------------------------

// sum_{x=lo}^{hi} e(f(x)) with exact per-term fractional reduction.
std::complex<double> exponential_sum(const RationalPoly& f, long long lo,
                                     long long hi);

// The polynomial x -> ell * n * (alpha*phi(x/n) + beta*x/n), exact in x.
RationalPoly trace_polynomial(const PolynomialPhase& phase, const Rational& alpha,
                              const Rational& beta, long long n, long long ell);

// T(phi; n, ell) = sum_{x=1}^n e(n * ell * phi(x/n)); |T| <= n.
std::complex<double> weyl_sum(const PolynomialPhase& phase, long long n,
                              long long ell);

// ---------------------------------------------------------------------------
// The differencing inequality
//
//   |sum_{x=1}^n e(f(x))|^{2^j}
//     <= (2n)^{2^j - j - 1} * sum_{|h_1|<n} ... sum_{|h_j|<n}
//          Re sum_{x in I_j} e(D_j f(x; h))
//
// with I_1(h) = [max(1,1-h), min(n,n-h)] and I_{j+1} = I_j cap (I_j - h_{j+1}).
// j = 1 is an exact identity.  Cost is O(n^{j+1}): guarded at n <= 4096 for
// j=1, n <= 64 for j=2, n <= 32 for j=3.
// ---------------------------------------------------------------------------

BoundReport weyl_inequality_check(const RationalPoly& f, long long n, int j);
// Same for f = trace_polynomial(phase, 1, 0, n, ell).
BoundReport weyl_inequality_check(const PolynomialPhase& phase, long long n,
                                  long long ell, int j);

// ---------------------------------------------------------------------------
// Representation counts: tuples (t_1..t_factors), each t_i in [-n,n]\{0},
// whose product is x (times factors! when factorial_scale is set).  The count
// is (ordered unsigned factorizations) * 2^(factors-1).
// ---------------------------------------------------------------------------

long long representation_count(long long x, long long n, int factors,
                               bool factorial_scale = false);

// ---------------------------------------------------------------------------
// Min-sums over nearest-integer distances:
//
//   sum_{x=1}^X min(cap, 1 / (2 ||x * alpha / n^scale_power||))
//
// (the 2 in the denominator drops when half_denominator = false).  Fractional
// parts step exactly: with theta = u/v reduced, x*theta mod 1 has numerator
// (x*u mod v), updated by one big-integer addition per term.
// ---------------------------------------------------------------------------

struct MinsumResult {
  double value = 0.0;
  long long capped_terms = 0;  // how many terms saturated at cap
};

MinsumResult minsum_detailed(const ApproxReal& alpha, long long n, int scale_power,
                             long long X, double cap, bool half_denominator = true);
double minsum(const ApproxReal& alpha, long long n, int scale_power, long long X,
              double cap, bool half_denominator = true);

// sum_{x=1}^{Q} min(P, 1/||alpha x + beta||) against the linear-sum shape
// (1 + Q/q)(P + q log P); the constant is fitted, q comes from approx.
BoundReport korobov_bound_check(const ApproxReal& alpha, const ApproxReal& beta,
                                long long P, long long Q,
                                const RationalApprox& approx);

// ---------------------------------------------------------------------------
// Full estimate pipelines.  Each runs one n and returns one report per
// inequality in the derivation, with explicit constants verified where the
// derivation provides them and fitted constants recorded where it does not.
// ---------------------------------------------------------------------------

struct ChainResult {
  long long n = 0;
  int degree = 0;                    // k
  double rho2 = 0.0;                 // measured rho_2^n(f)
  double measured_exponent = 0.0;    // log(rho2) / log(n)
  std::vector<BoundReport> reports;
  std::vector<std::pair<std::string, std::string>> metadata;

  const BoundReport& report(const std::string& tag) const;
  std::string to_json() const;
};

// Degree-2 pipeline: squared trace -> single differencing -> min-sum ->
// divisor-multiplicity collapse -> block decomposition at denominator from a
// Dirichlet approximation with Q = n^r -> assembled rate.  Default r = 3/2
// balances the two terms of the final rate.
ChainResult quadratic_bound_chain(const PolynomialPhase& phase,
                                  const ApproxReal& alpha, const ApproxReal& beta,
                                  long long n, double r = 1.5, double eps = 0.1,
                                  const TestFunction& f = TestFunction::fejer());

// Degree k >= 3 pipeline: Holder average -> (k-1)-fold differencing ->
// min-sum with scale n^{k-1} -> good-convergent selection at exponent r ->
// assembled rate against n^{1 - 2/K + eps}, K = 2^{k-1}.  Default r = 1/2
// balances the convergent terms.
ChainResult general_bound_chain(const PolynomialPhase& phase,
                                const ApproxReal& alpha, const ApproxReal& beta,
                                long long n, double r = 0.5, double eps = 0.1,
                                const TestFunction& f = TestFunction::fejer());

}  // namespace qmaps

#endif  // QMAPS_WEYL_HPP
