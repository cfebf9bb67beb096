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

#include "qmaps/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmaps {

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

BigInt rational_floor(const Rational& x) { return floor_div(numerator(x), denominator(x)); }

void append_convergent(ContinuedFraction& cf, const BigInt& quotient) {
  size_t m = cf.a.size();
  cf.a.push_back(quotient);
  if (m == 0) {
    cf.p.push_back(quotient);
    cf.q.push_back(BigInt(1));
  } else if (m == 1) {
    cf.p.push_back(quotient * cf.p[0] + 1);
    cf.q.push_back(quotient);
  } else {
    cf.p.push_back(quotient * cf.p[m - 1] + cf.p[m - 2]);
    cf.q.push_back(quotient * cf.q[m - 1] + cf.q[m - 2]);
  }
}

}  // namespace

ContinuedFraction ContinuedFraction::from_rational(const Rational& x, size_t max_terms) {
  ContinuedFraction cf;
  BigInt num = numerator(x);
  BigInt den = denominator(x);
  while (cf.a.size() < max_terms) {
    BigInt quot = floor_div(num, den);
    append_convergent(cf, quot);
    BigInt rem = num - quot * den;
    if (rem == 0) return cf;  // exact expansion; Euclid leaves the last quotient >= 2
    num = den;
    den = rem;
  }
  cf.truncated = true;
  return cf;
}

ContinuedFraction ContinuedFraction::from_real(const ApproxReal& x, size_t max_terms) {
  if (x.is_exact()) return from_rational(x.center, max_terms);
  // Expand both interval endpoints in lockstep and keep only agreeing
  // quotients: the result is valid for every value the input may denote.
  ContinuedFraction cf;
  Rational lo = x.center - x.radius;
  Rational hi = x.center + x.radius;
  while (cf.a.size() < max_terms) {
    BigInt flo = rational_floor(lo);
    BigInt fhi = rational_floor(hi);
    if (flo != fhi) break;  // interval straddles an integer: stop certifying
    append_convergent(cf, flo);
    Rational rlo = lo - Rational(flo);
    Rational rhi = hi - Rational(fhi);
    if (rlo == 0 || rhi == 0) break;  // endpoint hit exactly: cannot invert
    Rational nlo = 1 / rhi;  // inversion swaps the interval orientation
    Rational nhi = 1 / rlo;
    lo = nlo;
    hi = nhi;
  }
  cf.truncated = true;
  return cf;
}

ContinuedFraction ContinuedFraction::from_quotients(std::vector<BigInt> quotients) {
  ContinuedFraction cf;
  for (size_t i = 0; i < quotients.size(); ++i) {
    if (i > 0 && quotients[i] < 1)
      throw Error(ErrorCode::InvalidArgument, "partial quotients a_i (i>=1) must be >= 1");
    append_convergent(cf, quotients[i]);
  }
  return cf;
}

Rational ContinuedFraction::convergent(size_t m) const {
  if (m >= terms()) throw Error(ErrorCode::InvalidArgument, "convergent index out of range");
  return Rational(p[m], q[m]);
}

BigInt continuant(std::span<const BigInt> slice) {
  BigInt prev2(1);  // E of the empty slice
  BigInt prev1 = slice.empty() ? BigInt(1) : slice[0];
  if (slice.empty()) return prev2;
  for (size_t i = 1; i < slice.size(); ++i) {
    BigInt cur = slice[i] * prev1 + prev2;
    prev2 = std::move(prev1);
    prev1 = std::move(cur);
  }
  return prev1;
}

CrossDeterminant cross_determinant_check(const ContinuedFraction& cf, size_t m, size_t k) {
  if (k < 1 || k > m || m >= cf.terms())
    throw Error(ErrorCode::InvalidArgument, "need 1 <= k <= m < terms()");
  CrossDeterminant out;
  BigInt det = cf.p[m] * cf.q[m - k] - cf.p[m - k] * cf.q[m];
  out.determinant = det < 0 ? BigInt(-det) : det;
  // Continuant of the k-1 quotients a_m, a_{m-1}, ..., a_{m-k+2}.
  std::vector<BigInt> slice;
  for (size_t j = 0; j + 1 < k; ++j) slice.push_back(cf.a[m - j]);
  out.continuant_value = continuant(slice);
  out.matches = out.determinant == out.continuant_value;
  return out;
}

std::vector<std::pair<size_t, BigInt>> gcd_profile(const ContinuedFraction& cf,
                                                   const BigInt& n, int k,
                                                   size_t m_lo, size_t m_hi) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (m_hi >= cf.terms() || m_lo > m_hi)
    throw Error(ErrorCode::InvalidArgument, "gcd_profile index range invalid");
  BigInt npow = pow_big(n, static_cast<unsigned>(k - 1));
  std::vector<std::pair<size_t, BigInt>> out;
  for (size_t m = m_lo; m <= m_hi; ++m)
    out.emplace_back(m, boost::multiprecision::gcd(cf.p[m], npow));
  return out;
}

BoundReport gcd_product_bound_check(const ContinuedFraction& cf, const BigInt& n,
                                    int k, size_t m, size_t M) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (m >= cf.terms() || M > m)
    throw Error(ErrorCode::InvalidArgument, "window [m-M, m] out of range");
  BigInt npow = pow_big(n, static_cast<unsigned>(k - 1));
  BigInt lhs(1);
  for (size_t j = 0; j <= M; ++j)
    lhs *= boost::multiprecision::gcd(cf.p[m - j], npow);
  BigInt rhs = npow;
  for (size_t j = 0; j <= M; ++j) {
    for (size_t l = 1; l + j <= M; ++l) {
      // E_l over quotients a_{m-j}, a_{m-j-1}, ..., a_{m-j-l+1}.
      std::vector<BigInt> slice;
      for (size_t i = 0; i < l; ++i) slice.push_back(cf.a[m - j - i]);
      rhs *= continuant(slice);
    }
  }
  std::ostringstream notes;
  notes << "window m=" << m << " M=" << M << " against n^(k-1), k=" << k;
  return make_exact_report("gcd-product-over-consecutive-convergents", lhs, rhs,
                           notes.str());
}

RationalApprox dirichlet_approx(const ApproxReal& alpha, const BigInt& Q) {
  if (Q < 1) throw Error(ErrorCode::InvalidArgument, "Q must be >= 1");
  ContinuedFraction cf = ContinuedFraction::from_real(alpha, 4096);
  if (cf.terms() == 0)
    throw Error(ErrorCode::PrecisionExceeded,
                "input precision too coarse to certify any convergent");
  // Largest convergent with q_m <= Q.
  size_t pick = 0;
  bool have = false;
  for (size_t i = 0; i < cf.terms(); ++i) {
    if (cf.q[i] <= Q) {
      pick = i;
      have = true;
    } else {
      break;
    }
  }
  if (!have) throw Error(ErrorCode::Internal, "q_0 = 1 should always qualify");

  RationalApprox out;
  out.a = cf.p[pick];
  out.q = cf.q[pick];
  out.reduced = boost::multiprecision::gcd(out.a, out.q) == 1;
  out.convergent_index = pick;

  // Certificate sup |alpha - a/q| <= 1/(qQ) over the declared interval.
  Rational target(BigInt(1), out.q * Q);
  Rational center_err = alpha.center - Rational(out.a, out.q);
  if (center_err < 0) center_err = -center_err;
  Rational sup_err = center_err + alpha.radius;
  if (sup_err > target) {
    if (!alpha.is_exact() || cf.truncated) {
      throw Error(ErrorCode::PrecisionExceeded,
                  "cannot certify |alpha - a/q| <= 1/(qQ) at the declared precision; "
                  "supply more digits");
    }
    throw Error(ErrorCode::Internal, "certificate failed for exact input");
  }
  Rational theta = (alpha.center - Rational(out.a, out.q)) * Rational(out.q * out.q);
  Rational theta_sup =
      (center_err + alpha.radius) * Rational(out.q * out.q);
  (void)theta;
  out.remainder_bound = theta_sup.convert_to<double>();
  return out;
}

ReducedFraction reduce_against(const RationalApprox& approx, const BigInt& n_power) {
  if (n_power < 1) throw Error(ErrorCode::InvalidArgument, "n_power must be >= 1");
  ReducedFraction out;
  out.g = boost::multiprecision::gcd(approx.a, n_power);
  if (out.g == 0) out.g = n_power;  // a == 0: gcd(0, n) = n
  out.a_prime = approx.a / out.g;
  out.n_prime = n_power / out.g;
  out.coprime_ok =
      boost::multiprecision::gcd(out.a_prime, out.n_prime * approx.q) == 1;
  return out;
}

ConvergentRun find_convergents_in_range(const ContinuedFraction& cf, const BigInt& lo,
                                        const BigInt& hi) {
  if (lo > hi) throw Error(ErrorCode::InvalidArgument, "empty numerator range");
  ConvergentRun out;
  bool in_run = false;
  for (size_t m = 0; m < cf.terms(); ++m) {
    if (cf.p[m] >= lo && cf.p[m] <= hi) {
      if (!in_run) {
        out.first = m;
        in_run = true;
        out.empty = false;
      }
      out.last = m;
    } else if (in_run && cf.p[m] > hi) {
      break;
    }
  }
  BigInt last_p = cf.terms() ? cf.p[cf.terms() - 1] : BigInt(0);
  out.undetermined = cf.truncated && last_p <= hi;
  if (!out.empty && hi > 1) {
    out.max_index_over_log_hi =
        static_cast<double>(out.last) /
        boost::multiprecision::log(Real50(hi)).convert_to<double>();
  }
  return out;
}

GoodConvergent find_good_convergent(const ContinuedFraction& cf, long long n, int k,
                                    double r, double eps) {
  if (!(0.0 < eps && eps < r))
    throw Error(ErrorCode::InvalidArgument, "need 0 < eps < r");
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "n must be >= 2");
  Real50 nn(n);
  using boost::multiprecision::ceil;
  using boost::multiprecision::floor;
  using boost::multiprecision::pow;
  BigInt lo = ceil(pow(nn, Real50(r - eps))).convert_to<BigInt>();
  BigInt hi = floor(pow(nn, Real50(r))).convert_to<BigInt>();
  BigInt threshold = floor(pow(nn, Real50(eps))).convert_to<BigInt>();
  BigInt npow = pow_big(BigInt(n), static_cast<unsigned>(k - 1));

  std::ostringstream profile;
  profile << "no convergent numerator in [n^" << r - eps << ", n^" << r
          << "] = [" << lo.str() << ", " << hi.str() << "] with gcd <= " << threshold.str()
          << "; profile:";
  for (size_t m = 0; m < cf.terms(); ++m) {
    if (cf.p[m] < lo) continue;
    if (cf.p[m] > hi) break;
    BigInt g = boost::multiprecision::gcd(cf.p[m], npow);
    if (g <= threshold) return GoodConvergent{m, cf.p[m], cf.q[m], g};
    profile << " (m=" << m << ", gcd=" << g.str() << ")";
  }
  throw Error(ErrorCode::NotFound, profile.str());
}

FnValue f_n_alpha(const ContinuedFraction& cf, long long n, int k, FnVariant variant) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (cf.terms() == 0) throw Error(ErrorCode::InvalidArgument, "empty expansion");
  BigInt npow = pow_big(BigInt(n), static_cast<unsigned>(k - 1));
  bool have = false;
  Rational best;
  size_t best_m = 0;
  for (size_t m = 0; m < cf.terms(); ++m) {
    const BigInt& denom_src = variant == FnVariant::ByDenominator ? cf.q[m] : cf.p[m];
    if (denom_src <= 0) continue;
    BigInt g = boost::multiprecision::gcd(cf.p[m], npow);
    if (g == 0) g = npow;
    BigInt ng = BigInt(n) * g;
    Rational value = Rational(ng, denom_src) + Rational(denom_src, ng);
    if (!have || value < best) {
      best = value;
      best_m = m;
      have = true;
    }
  }
  if (!have) throw Error(ErrorCode::NotFound, "no usable convergent for f_n");
  return FnValue{best.convert_to<double>(), best_m};
}

double khinchin_levy_stat(const ContinuedFraction& cf, size_t m) {
  if (m < 1 || m >= cf.terms())
    throw Error(ErrorCode::InvalidArgument, "need 1 <= m < terms()");
  Real50 lq = boost::multiprecision::log(Real50(cf.q[m]));
  return boost::multiprecision::exp(lq / static_cast<int>(m)).convert_to<double>();
}

QuotientGrowthReport quotient_growth_check(const ContinuedFraction& cf, double eps,
                                           double threshold) {
  if (cf.terms() < 2)
    throw Error(ErrorCode::InvalidArgument, "growth check needs at least two quotients");
  QuotientGrowthReport rep;
  rep.epsilon = eps;
  size_t tail_start = std::max<size_t>(10, cf.terms() / 2);
  tail_start = std::min(tail_start, cf.terms() - 1);
  for (size_t m = 1; m < cf.terms(); ++m) {
    double s = cf.a[m].convert_to<double>() /
               std::pow(static_cast<double>(m), 1.0 + eps);
    if (s > rep.overall_max) {
      rep.overall_max = s;
      rep.overall_argmax = m;
    }
    if (m >= tail_start) rep.tail_statistic = std::max(rep.tail_statistic, s);
  }
  rep.flagged = rep.tail_statistic > threshold;
  return rep;
}

}  // namespace qmaps
