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

#ifndef QMAPS_DIOPHANTINE_HPP
#define QMAPS_DIOPHANTINE_HPP

#include <span>
#include <string>
#include <vector>

#include "qmaps/numeric.hpp"
#include "qmaps/report.hpp"

namespace qmaps {

// Continued fraction expansion with convergents.  For an approximant input
// only quotients certified by the whole input interval are emitted, and
// `truncated` records that the expansion stopped at the precision limit
// rather than at a rational endpoint.
struct ContinuedFraction {
  std::vector<BigInt> a;  // partial quotients a_0, a_1, ...
  std::vector<BigInt> p;  // convergent numerators
  std::vector<BigInt> q;  // convergent denominators
  bool truncated = false;

  static ContinuedFraction from_rational(const Rational& x, size_t max_terms = 20000);
  static ContinuedFraction from_real(const ApproxReal& x, size_t max_terms = 20000);
  static ContinuedFraction from_quotients(std::vector<BigInt> quotients);

  size_t terms() const { return a.size(); }
  Rational convergent(size_t m) const;
};

// Continuant E_j of a quotient slice: E() = 1, E(x) = x,
// E(s, y) = y * E(s) + E(s drop last).  Symmetric under reversal.
BigInt continuant(std::span<const BigInt> slice);

// |p_m q_{m-k} - p_{m-k} q_m| equals the continuant of the k-1 quotients
// between the two convergents (a_{m-k+2}, ..., a_m); k = 1 recovers the
// +-1 determinant of consecutive convergents.
struct CrossDeterminant {
  BigInt determinant;      // |p_m q_{m-k} - p_{m-k} q_m|
  BigInt continuant_value;
  bool matches = false;
};
CrossDeterminant cross_determinant_check(const ContinuedFraction& cf, size_t m, size_t k);

// gcd(p_m, n^(k-1)) for m in [m_lo, m_hi].
std::vector<std::pair<size_t, BigInt>> gcd_profile(const ContinuedFraction& cf,
                                                   const BigInt& n, int k,
                                                   size_t m_lo, size_t m_hi);

// Product bound for a window of consecutive convergents:
//   prod_{j=0}^{M} gcd(p_{m-j}, n^(k-1))
//     <= n^(k-1) * prod_{j=0}^{M} prod_{l=1}^{M-j} E_l(a_{m-j}, ..., a_{m-j-l+1}).
// Both sides exact integers.
BoundReport gcd_product_bound_check(const ContinuedFraction& cf, const BigInt& n,
                                    int k, size_t m, size_t M);

// alpha = a/q + theta/q^2 with q <= Q and |theta| <= remainder_bound; the
// certificate |alpha - a/q| <= 1/(qQ) is verified in exact rational
// arithmetic over the whole declared input interval.
struct RationalApprox {
  BigInt a;
  BigInt q;
  double remainder_bound = 0.0;  // bound on |theta|
  bool reduced = false;          // gcd(a, q) == 1
  size_t convergent_index = 0;
};
RationalApprox dirichlet_approx(const ApproxReal& alpha, const BigInt& Q);

// Divide the common factor g = gcd(a, n_power) out of a / (q * n_power).
struct ReducedFraction {
  BigInt a_prime;
  BigInt n_prime;
  BigInt g;
  bool coprime_ok = false;  // gcd(a', n' q) == 1 given gcd(a, q) == 1
};
ReducedFraction reduce_against(const RationalApprox& approx, const BigInt& n_power);

// Consecutive run of indices with numerator p_m inside [lo, hi].
struct ConvergentRun {
  bool empty = true;
  size_t first = 0;
  size_t last = 0;
  // true when the expansion was cut by input precision before passing hi, so
  // membership of later convergents is unknown.
  bool undetermined = false;
  double max_index_over_log_hi = 0.0;
};
ConvergentRun find_convergents_in_range(const ContinuedFraction& cf, const BigInt& lo,
                                        const BigInt& hi);

// First convergent with numerator in [n^(r-eps), n^r] whose gcd with n^(k-1)
// is at most n^eps.  Throws Error(NotFound) with the realized gcd profile in
// the message when no convergent qualifies.
struct GoodConvergent {
  size_t m = 0;
  BigInt p;
  BigInt q;
  BigInt g;  // gcd(p, n^(k-1))
};
GoodConvergent find_good_convergent(const ContinuedFraction& cf, long long n, int k,
                                    double r, double eps);

// f_n(alpha) = min_m [ n g_m / q_m + q_m / (n g_m) ], g_m = gcd(p_m, n^(k-1)).
enum class FnVariant {
  ByDenominator,  // q_m in the formula (as displayed)
  ByNumerator,    // p_m substituted for q_m
};
struct FnValue {
  double value = 0.0;
  size_t arg_m = 0;
};
FnValue f_n_alpha(const ContinuedFraction& cf, long long n, int k,
                  FnVariant variant = FnVariant::ByDenominator);

// q_m^(1/m); for almost every real this tends to the Khinchin-Levy constant
// exp(pi^2 / (12 log 2)) ~= 3.2758.
double khinchin_levy_stat(const ContinuedFraction& cf, size_t m);

// Growth statistic s_m = a_m / m^(1+eps).  `tail_statistic` is the maximum
// over the tail half of the expansion (the part that should decay for
// Diophantine-typical input); `flagged` marks tail growth above `threshold`.
struct QuotientGrowthReport {
  double tail_statistic = 0.0;
  double overall_max = 0.0;
  size_t overall_argmax = 0;
  double epsilon = 0.0;
  bool flagged = false;
};
QuotientGrowthReport quotient_growth_check(const ContinuedFraction& cf,
                                           double eps = 0.1, double threshold = 1.0);

}  // namespace qmaps

#endif  // QMAPS_DIOPHANTINE_HPP
