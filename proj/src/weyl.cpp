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

#include "qmaps/weyl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmaps/io.hpp"

namespace qmaps {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kTwoPi = 6.28318530717958647692528676655900577;

std::complex<double> unit_phase(double t) {
  double a = kTwoPi * t;
  return {std::cos(a), std::sin(a)};
}

// Numerator of {x * theta} stepped exactly: one big-integer add per x.
std::vector<double> stepped_fracs(const Rational& theta, long long X) {
  std::vector<double> out(static_cast<size_t>(X) + 1, 0.0);
  BigInt v = boost::multiprecision::denominator(theta);
  BigInt u = mod_floor(boost::multiprecision::numerator(theta), v);
  double vd = v.convert_to<double>();
  BigInt num = 0;
  for (long long x = 1; x <= X; ++x) {
    num += u;
    if (num >= v) num -= v;
    out[static_cast<size_t>(x)] = num.convert_to<double>() / vd;
  }
  return out;
}

inline double dist01(double g) { return g < 0.5 ? g : 1.0 - g; }

// min(cap, 1 / (denom_factor * ||.||)) with the cap taking over at distance 0.
inline double capped_inverse(double dist, double cap, double denom_factor) {
  if (dist <= 0.0) return cap;
  double t = 1.0 / (denom_factor * dist);
  return t < cap ? t : cap;
}

// sum_{x=lo}^{lo+m-1} e(theta*x + c) by the closed form of a geometric series;
// direct summation when theta is too close to an integer for the sine ratio.
std::complex<double> geometric_block(double theta, double c, long long lo,
                                     long long m) {
  double d = dist01(theta);
  if (d < 1e-9) {
    double re = 0.0, im = 0.0;
    for (long long i = 0; i < m; ++i) {
      double a = kTwoPi * (theta * static_cast<double>(lo + i) + c);
      re += std::cos(a);
      im += std::sin(a);
    }
    return {re, im};
  }
  double amp = std::sin(kPi * static_cast<double>(m) * theta) / std::sin(kPi * theta);
  double ang = kTwoPi * (c + theta * (static_cast<double>(lo) +
                                      0.5 * static_cast<double>(m - 1)));
  return {amp * std::cos(ang), amp * std::sin(ang)};
}

ApproxReal scale_approx(const ApproxReal& x, const Rational& s) {
  ApproxReal out = x;
  out.center = x.center * s;
  out.radius = x.radius * boost::multiprecision::abs(s);
  return out;
}

BigInt floor_pow(long long n, double r) {
  Real50 p = boost::multiprecision::pow(Real50(n), Real50(r));
  BigInt out = boost::multiprecision::floor(p).convert_to<BigInt>();
  if (out < 1) out = 1;
  return out;
}

void put(ChainResult& cr, const std::string& key, const std::string& value) {
  cr.metadata.emplace_back(key, value);
}

void put(ChainResult& cr, const std::string& key, double value) {
  cr.metadata.emplace_back(key, format_double(value));
}

void put(ChainResult& cr, const std::string& key, long long value) {
  cr.metadata.emplace_back(key, std::to_string(value));
}

void put(ChainResult& cr, const std::string& key, const BigInt& value) {
  cr.metadata.emplace_back(key, value.str());
}

// Streaming per-block statistics over x = 1..X with block length `blen`.
struct BlockStats {
  long long complete_blocks = 0;
  double max_sum = 0.0;
  double min_sum = 0.0;
  double mean_sum = 0.0;
  double partial_total = 0.0;  // total over the whole (possibly partial) range
};

}  // namespace

// ---------------------------------------------------------------------------
// Forward differences.
// ---------------------------------------------------------------------------

DifferencePolynomial forward_difference(const RationalPoly& base,
                                        const std::vector<Rational>& shifts) {
  int degree = base.degree();
  if (degree < 1)
    throw Error(ErrorCode::DegeneratePolynomial,
                "forward_difference: base must have degree >= 1");
  if (shifts.empty())
    throw Error(ErrorCode::InvalidArgument,
                "forward_difference: at least one shift is required");
  if (static_cast<int>(shifts.size()) > degree)
    throw Error(ErrorCode::InvalidArgument,
                "forward_difference: order " + std::to_string(shifts.size()) +
                    " exceeds the base degree " + std::to_string(degree));
  DifferencePolynomial out;
  out.base = base;
  out.shifts = shifts;
  RationalPoly cur = base;
  for (const Rational& h : shifts) cur = cur.shifted(h) - cur;
  out.result = cur;
  return out;
}

// ---------------------------------------------------------------------------
// Exponential sums.
// ---------------------------------------------------------------------------

std::complex<double> exponential_sum(const RationalPoly& f, long long lo,
                                     long long hi) {
  if (lo > hi)
    throw Error(ErrorCode::InvalidArgument, "exponential_sum: empty range");
  KahanSum re, im;
  for (long long x = lo; x <= hi; ++x) {
    Rational fx = f.eval(Rational(BigInt(x)));
    double t = frac(fx).convert_to<double>();
    double a = kTwoPi * t;
    re.add(std::cos(a));
    im.add(std::sin(a));
  }
  return {re.value(), im.value()};
}

RationalPoly trace_polynomial(const PolynomialPhase& phase, const Rational& alpha,
                              const Rational& beta, long long n, long long ell) {
  if (n < 1)
    throw Error(ErrorCode::InvalidArgument, "trace_polynomial: n must be >= 1");
  int k = phase.phi.degree();
  std::vector<Rational> c(static_cast<size_t>(std::max(k, 1)) + 1, Rational(0));
  Rational lq = Rational(BigInt(ell));
  for (int j = 0; j <= k; ++j) {
    // ell * n * alpha * phi_j / n^j = ell * alpha * phi_j * n^(1-j)
    Rational term = alpha * phase.phi.coeff(j) * lq;
    if (j == 0) {
      term *= Rational(BigInt(n));
    } else if (j >= 2) {
      term /= Rational(pow_big(BigInt(n), static_cast<unsigned>(j - 1)));
    }
    c[static_cast<size_t>(j)] += term;
  }
  c[1] += beta * lq;
  return RationalPoly(std::move(c));
}

std::complex<double> weyl_sum(const PolynomialPhase& phase, long long n,
                              long long ell) {
  return exponential_sum(trace_polynomial(phase, Rational(1), Rational(0), n, ell),
                         1, n);
}

// ---------------------------------------------------------------------------
// Differencing inequality.
// ---------------------------------------------------------------------------

namespace {

// Re sum over the j remaining shift variables of the telescoped products of v.
// v holds the current differenced values on [lo, hi]; scratch[depth-1] is the
// work buffer for this depth (disjoint from deeper levels).
double difference_real_sum(const std::vector<std::complex<double>>& v, long long lo,
                           long long hi, long long n, int depth,
                           std::vector<std::vector<std::complex<double>>>& scratch) {
  if (lo > hi) return 0.0;
  if (depth == 0) {
    KahanSum re;
    for (long long x = lo; x <= hi; ++x) re.add(v[static_cast<size_t>(x)].real());
    return re.value();
  }
  auto& buf = scratch[static_cast<size_t>(depth - 1)];
  KahanSum total;
  for (long long h = -(n - 1); h <= n - 1; ++h) {
    long long nlo = lo + std::max<long long>(0, -h);
    long long nhi = hi - std::max<long long>(0, h);
    if (nlo > nhi) continue;
    for (long long x = nlo; x <= nhi; ++x)
      buf[static_cast<size_t>(x)] =
          v[static_cast<size_t>(x + h)] * std::conj(v[static_cast<size_t>(x)]);
    total.add(difference_real_sum(buf, nlo, nhi, n, depth - 1, scratch));
  }
  return total.value();
}

}  // namespace

BoundReport weyl_inequality_check(const RationalPoly& f, long long n, int j) {
  if (n < 1)
    throw Error(ErrorCode::InvalidArgument, "weyl_inequality_check: n must be >= 1");
  if (j < 1 || j > 3)
    throw Error(ErrorCode::InvalidArgument,
                "weyl_inequality_check: j must be in [1, 3]");
  static constexpr long long kMaxN[4] = {0, 4096, 64, 32};
  if (n > kMaxN[j])
    throw Error(ErrorCode::CostGuard,
                "weyl_inequality_check: n = " + std::to_string(n) +
                    " exceeds the O(n^(j+1)) guard " + std::to_string(kMaxN[j]) +
                    " for j = " + std::to_string(j));
  std::vector<std::complex<double>> w(static_cast<size_t>(n) + 1);
  KahanSum sre, sim;
  for (long long x = 1; x <= n; ++x) {
    double t = frac(f.eval(Rational(BigInt(x)))).convert_to<double>();
    w[static_cast<size_t>(x)] = unit_phase(t);
    sre.add(w[static_cast<size_t>(x)].real());
    sim.add(w[static_cast<size_t>(x)].imag());
  }
  double abs2 = sre.value() * sre.value() + sim.value() * sim.value();
  double lhs = std::pow(abs2, static_cast<double>(1LL << (j - 1)));
  std::vector<std::vector<std::complex<double>>> scratch(
      static_cast<size_t>(j),
      std::vector<std::complex<double>>(static_cast<size_t>(n) + 1));
  double hsum = difference_real_sum(w, 1, n, n, j, scratch);
  double constant =
      std::pow(2.0 * static_cast<double>(n), static_cast<double>((1LL << j) - j - 1));
  double rhs = constant * hsum;
  std::ostringstream notes;
  notes << "n=" << n << " j=" << j << " |sum|^2=" << format_double(abs2)
        << " shift-sum=" << format_double(hsum);
  if (j == 1) {
    double gap = rhs - lhs;
    double scale = std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
    notes << " identity-gap=" << format_double(gap / scale);
  }
  return make_explicit_report("weyl-differencing-j" + std::to_string(j), lhs, rhs,
                              notes.str());
}

BoundReport weyl_inequality_check(const PolynomialPhase& phase, long long n,
                                  long long ell, int j) {
  if (j > phase.degree() - 1)
    throw Error(ErrorCode::InvalidArgument,
                "weyl_inequality_check: j must be <= phase degree - 1");
  RationalPoly f = trace_polynomial(phase, Rational(1), Rational(0), n, ell);
  return weyl_inequality_check(f, n, j);
}

// ---------------------------------------------------------------------------
// Representation counts.
// ---------------------------------------------------------------------------

namespace {

long long ordered_factorizations(unsigned long long v, int parts,
                                 unsigned long long n) {
  if (parts == 1) return v <= n ? 1 : 0;
  long long count = 0;
  for (unsigned long long d = 1; d * d <= v; ++d) {
    if (v % d != 0) continue;
    unsigned long long e = v / d;
    if (d <= n) count += ordered_factorizations(e, parts - 1, n);
    if (e != d && e <= n) count += ordered_factorizations(d, parts - 1, n);
  }
  return count;
}

}  // namespace

long long representation_count(long long x, long long n, int factors,
                               bool factorial_scale) {
  if (x == 0)
    throw Error(ErrorCode::InvalidArgument, "representation_count: x must be nonzero");
  if (n < 1)
    throw Error(ErrorCode::InvalidArgument, "representation_count: n must be >= 1");
  if (factors < 2 || factors > 6)
    throw Error(ErrorCode::InvalidArgument,
                "representation_count: factors must be in [2, 6]");
  unsigned long long ax =
      x < 0 ? 0ULL - static_cast<unsigned long long>(x) : static_cast<unsigned long long>(x);
  if (ax > 1000000000000ULL)
    throw Error(ErrorCode::CostGuard,
                "representation_count: |x| exceeds the divisor-scan guard 1e12");
  if (factorial_scale) {
    unsigned long long fct = 1;
    for (int i = 2; i <= factors; ++i) fct *= static_cast<unsigned long long>(i);
    if (ax % fct != 0) return 0;
    ax /= fct;
  }
  long long unsigned_count =
      ordered_factorizations(ax, factors, static_cast<unsigned long long>(n));
  return unsigned_count * (1LL << (factors - 1));
}

// ---------------------------------------------------------------------------
// Min-sums.
// ---------------------------------------------------------------------------

MinsumResult minsum_detailed(const ApproxReal& alpha, long long n, int scale_power,
                             long long X, double cap, bool half_denominator) {
  if (X < 1) throw Error(ErrorCode::InvalidArgument, "minsum: X must be >= 1");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "minsum: n must be >= 1");
  if (scale_power < 0 || scale_power > 8)
    throw Error(ErrorCode::InvalidArgument, "minsum: scale_power must be in [0, 8]");
  if (cap <= 0) throw Error(ErrorCode::InvalidArgument, "minsum: cap must be > 0");
  if (!alpha.is_exact()) {
    // The stepped numerators are exact for the center; the interval radius
    // must stay negligible across the whole range or distances are unusable.
    if (Rational(BigInt(X)) * alpha.radius >
        Rational(BigInt(1), pow_big(BigInt(2), 40)))
      throw Error(ErrorCode::PrecisionExceeded,
                  "minsum: X * radius exceeds 2^-40; supply more digits");
  }
  Rational theta = alpha.center / Rational(pow_big(BigInt(n),
                                                   static_cast<unsigned>(scale_power)));
  BigInt v = boost::multiprecision::denominator(theta);
  BigInt u = mod_floor(boost::multiprecision::numerator(theta), v);
  double vd = v.convert_to<double>();
  double denom_factor = half_denominator ? 2.0 : 1.0;
  BigInt num = 0;
  KahanSum sum;
  long long capped = 0;
  for (long long x = 1; x <= X; ++x) {
    num += u;
    if (num >= v) num -= v;
    BigInt dnum = num <= v - num ? num : v - num;
    double term;
    if (dnum == 0) {
      term = cap;
      ++capped;
    } else {
      double dist = dnum.convert_to<double>() / vd;
      term = 1.0 / (denom_factor * dist);
      if (term >= cap) {
        term = cap;
        ++capped;
      }
    }
    sum.add(term);
  }
  return {sum.value(), capped};
}

double minsum(const ApproxReal& alpha, long long n, int scale_power, long long X,
              double cap, bool half_denominator) {
  return minsum_detailed(alpha, n, scale_power, X, cap, half_denominator).value;
}

BoundReport korobov_bound_check(const ApproxReal& alpha, const ApproxReal& beta,
                                long long P, long long Q,
                                const RationalApprox& approx) {
  if (P < 1 || Q < 1)
    throw Error(ErrorCode::InvalidArgument,
                "korobov_bound_check: P and Q must be >= 1");
  if (approx.q < 1)
    throw Error(ErrorCode::InvalidArgument,
                "korobov_bound_check: approx.q must be >= 1");
  if (!alpha.is_exact() || !beta.is_exact()) {
    Rational drift = Rational(BigInt(Q)) * alpha.radius + beta.radius;
    if (drift > Rational(BigInt(1), pow_big(BigInt(2), 40)))
      throw Error(ErrorCode::PrecisionExceeded,
                  "korobov_bound_check: interval drift exceeds 2^-40");
  }
  // frac(alpha x + beta) stepped exactly over a common denominator.
  Rational a = alpha.center;
  Rational b = beta.center;
  BigInt va = boost::multiprecision::denominator(a);
  BigInt vb = boost::multiprecision::denominator(b);
  BigInt V = boost::multiprecision::lcm(va, vb);
  BigInt step = mod_floor(boost::multiprecision::numerator(a) * (V / va), V);
  BigInt cur = mod_floor(boost::multiprecision::numerator(b) * (V / vb), V);
  double Vd = V.convert_to<double>();
  double Pd = static_cast<double>(P);
  KahanSum sum;
  long long capped = 0;
  for (long long x = 1; x <= Q; ++x) {
    cur += step;
    if (cur >= V) cur -= V;
    BigInt dnum = cur <= V - cur ? cur : V - cur;
    double term;
    if (dnum == 0) {
      term = Pd;
      ++capped;
    } else {
      term = Vd / dnum.convert_to<double>();
      if (term >= Pd) {
        term = Pd;
        ++capped;
      }
    }
    sum.add(term);
  }
  double qd = approx.q.convert_to<double>();
  double shape = (1.0 + static_cast<double>(Q) / qd) *
                 (Pd + qd * std::log(std::max(Pd, 2.0)));
  std::ostringstream notes;
  notes << "P=" << P << " Q=" << Q << " q=" << approx.q.str()
        << " capped=" << capped
        << " remainder=" << format_double(approx.remainder_bound);
  return make_fitted_report("korobov-linear-minsum", sum.value(), shape, notes.str());
}

// ---------------------------------------------------------------------------
// ChainResult plumbing.
// ---------------------------------------------------------------------------

const BoundReport& ChainResult::report(const std::string& tag) const {
  for (const auto& r : reports)
    if (r.tag == tag) return r;
  throw Error(ErrorCode::NotFound,
              "ChainResult::report: no report tagged '" + tag + "'");
}

std::string ChainResult::to_json() const {
  std::string s = "{";
  s += "\"n\":" + std::to_string(n);
  s += ",\"degree\":" + std::to_string(degree);
  s += ",\"rho2\":" + format_double(rho2);
  s += ",\"measured_exponent\":" + format_double(measured_exponent);
  s += ",\"metadata\":{";
  for (size_t i = 0; i < metadata.size(); ++i) {
    if (i) s += ",";
    s += json_quote(metadata[i].first) + ":" + json_quote(metadata[i].second);
  }
  s += "},\"reports\":[";
  for (size_t i = 0; i < reports.size(); ++i) {
    if (i) s += ",";
    s += reports[i].to_json();
  }
  s += "]}";
  return s;
}

// ---------------------------------------------------------------------------
// Shared chain pieces.
// ---------------------------------------------------------------------------

namespace {

struct ChainCommon {
  long long L = 0;          // summation window |l| <= L
  double rho2 = 0.0;
  double sum_t2 = 0.0;      // sum over |l| <= L of |T_l|^2
  double fhat_max = 0.0;    // max over the window of fhat(l/n)
  TraceWindow tw;
};

ChainCommon chain_common(const PolynomialPhase& phase, const ApproxReal& alpha,
                         const ApproxReal& beta, long long n,
                         const TestFunction& f, ChainResult& cr) {
  SpectrumParams params;
  params.n = n;
  params.alpha = alpha;
  params.beta = beta;
  params.index_range = IndexRange::OneToN;
  double S = f.support_radius();
  long long L =
      static_cast<long long>(std::floor(S * static_cast<double>(n) + 1e-9));
  if (L < 1)
    throw Error(ErrorCode::WindowTooSmall,
                "bound chain: test-function support covers no nonzero frequency");
  ChainCommon cc;
  cc.L = L;
  cc.tw = trace_window(phase, params, L);
  PcfValue rho = rho2_local(f, cc.tw);
  cc.rho2 = rho.value;
  KahanSum st2;
  st2.add(cc.tw.value(0));
  for (long long l = 1; l <= L; ++l) st2.add(2.0 * cc.tw.value(l));
  cc.sum_t2 = st2.value();
  double fm = 0.0;
  for (long long l = 0; l <= L; ++l)
    fm = std::max(fm, f.fhat(static_cast<double>(l) / static_cast<double>(n)));
  cc.fhat_max = fm;
  cr.n = n;
  cr.rho2 = rho.value;
  cr.measured_exponent =
      rho.value > 0 ? std::log(rho.value) / std::log(static_cast<double>(n)) : 0.0;
  put(cr, "poisson_ref", rho.poisson_ref);
  put(cr, "window_L", L);
  put(cr, "fhat_max", fm);
  put(cr, "sum_abs_trace_sq", cc.sum_t2);
  put(cr, "alpha", alpha.to_double());
  put(cr, "alpha_exact", alpha.is_exact() ? "true" : "false");
  put(cr, "beta", beta.to_double());
  put(cr, "beta_exact", beta.is_exact() ? "true" : "false");
  return cc;
}

// Streaming block statistics of min(cap, 1/(factor*||x theta||)) terms taken
// from a precomputed fraction table.
BlockStats block_stats(const std::vector<double>& G, long long X, long long blen,
                       double cap, double factor) {
  BlockStats bs;
  bs.complete_blocks = blen > 0 ? X / blen : 0;
  KahanSum total;
  KahanSum all_blocks;
  double cur = 0.0;
  long long filled = 0;
  bool have = false;
  for (long long x = 1; x <= X; ++x) {
    double term = capped_inverse(dist01(G[static_cast<size_t>(x)]), cap, factor);
    total.add(term);
    cur += term;
    if (++filled == blen) {
      if (!have || cur > bs.max_sum) bs.max_sum = cur;
      if (!have || cur < bs.min_sum) bs.min_sum = cur;
      all_blocks.add(cur);
      have = true;
      cur = 0.0;
      filled = 0;
    }
  }
  bs.partial_total = total.value();
  if (!have) {
    // Block longer than the whole range: one truncated block.
    bs.max_sum = bs.partial_total;
    bs.min_sum = bs.partial_total;
    bs.mean_sum = bs.partial_total;
  } else {
    bs.mean_sum = all_blocks.value() / static_cast<double>(bs.complete_blocks);
  }
  return bs;
}

}  // namespace

// ---------------------------------------------------------------------------
// Quadratic pipeline.
// ---------------------------------------------------------------------------

ChainResult quadratic_bound_chain(const PolynomialPhase& phase,
                                  const ApproxReal& alpha, const ApproxReal& beta,
                                  long long n, double r, double eps,
                                  const TestFunction& f) {
  if (phase.degree() != 2)
    throw Error(ErrorCode::InvalidArgument,
                "quadratic_bound_chain: phase degree must be 2");
  if (n < 2)
    throw Error(ErrorCode::InvalidArgument, "quadratic_bound_chain: n must be >= 2");
  if (n > 2048)
    throw Error(ErrorCode::CostGuard,
                "quadratic_bound_chain: n exceeds the O(n^2 log n) guard 2048");
  if (!(r > 0.0 && r < 2.0) || !(eps > 0.0 && eps < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "quadratic_bound_chain: need 0 < r < 2 and 0 < eps < 1");

  ChainResult cr;
  cr.degree = 2;
  ChainCommon cc = chain_common(phase, alpha, beta, n, f, cr);
  const long long L = cc.L;
  const double nd = static_cast<double>(n);
  put(cr, "r", r);
  put(cr, "eps", eps);

  // (1) n^2 rho <= max fhat * sum of squared trace magnitudes.
  {
    std::ostringstream notes;
    notes << "n^2*rho vs fhat_max * sum_{|l|<=" << L << "} |T_l|^2";
    cr.reports.push_back(make_explicit_report(
        "testfn-majorant", nd * nd * cc.rho2, cc.fhat_max * cc.sum_t2, notes.str()));
  }

  // Exact fraction table for theta0 = 2 c2 alpha / n at products l*h.
  Rational mu = Rational(2) * phase.phi.coeff(2) * alpha.center;
  Rational theta0 = mu / Rational(BigInt(n));
  const long long X = L * (n - 1);
  std::vector<double> G = stepped_fracs(theta0, X);

  // (2) Squared-trace sum vs zero-pair mass + geometric-series domination.
  {
    KahanSum nz;
    for (long long l = 1; l <= L; ++l) {
      const long long base = l;
      for (long long h = 1; h <= n - 1; ++h) {
        double d = dist01(G[static_cast<size_t>(base * h)]);
        nz.add(capped_inverse(d, static_cast<double>(n - h), 2.0));
      }
    }
    double zero_mass = nd * nd + 2.0 * static_cast<double>(L) * nd;
    double rhs = zero_mass + 4.0 * nz.value();
    std::ostringstream notes;
    notes << "single differencing: sum |T_l|^2 vs (l*h=0 mass) + 4*sum min(n-h, "
             "1/(2||l h theta||)); equality at alpha=0";
    cr.reports.push_back(
        make_explicit_report("difference-minsum-domination", cc.sum_t2, rhs,
                             notes.str()));
    // (3) The zero-product pairs contribute at most (count) * n.
    double zero_count = static_cast<double>(2 * L + 2 * n - 1);
    std::ostringstream zn;
    zn << "pairs with l*h=0: mass " << format_double(zero_mass) << " over "
       << format_double(zero_count) << " pairs, cap n";
    cr.reports.push_back(make_explicit_report("zero-product-terms", zero_mass,
                                              zero_count * nd, zn.str()));
  }

  // Multiplicity of products l*h and the collapsed min-sum.
  std::vector<std::uint32_t> cnt(static_cast<size_t>(X) + 1, 0);
  for (long long l = 1; l <= L; ++l)
    for (long long h = 1; h <= n - 1; ++h) ++cnt[static_cast<size_t>(l * h)];
  std::uint32_t cmax = 0;
  KahanSum pair_capn;
  KahanSum plain;
  long long plain_capped = 0;
  for (long long x = 1; x <= X; ++x) {
    double term = capped_inverse(dist01(G[static_cast<size_t>(x)]), nd, 2.0);
    if (term >= nd) ++plain_capped;
    plain.add(term);
    std::uint32_t c = cnt[static_cast<size_t>(x)];
    if (c > 0) pair_capn.add(static_cast<double>(c) * term);
    cmax = std::max(cmax, c);
  }
  double minsum_half = plain.value();
  put(cr, "max_multiplicity", static_cast<long long>(cmax));
  put(cr, "minsum_capped_terms", plain_capped);

  // (4) Pair sum with cap n vs max multiplicity times the plain min-sum.
  {
    std::ostringstream notes;
    notes << "multiplicity of x=l*h collapses the double sum; max multiplicity "
          << cmax << " ~ n^" << format_double(std::log(std::max<double>(cmax, 1)) /
                                              std::log(nd));
    cr.reports.push_back(make_explicit_report(
        "divisor-multiplicity-collapse", 4.0 * pair_capn.value(),
        4.0 * static_cast<double>(cmax) * minsum_half, notes.str()));
  }

  // (5) Displayed shape: n^2 rho vs n^2 + n^eps * symmetric min-sum, cap 2n.
  {
    ApproxReal mu_ar = scale_approx(alpha, Rational(2) * phase.phi.coeff(2));
    MinsumResult disp = minsum_detailed(mu_ar, n, 1, n * n, 2.0 * nd, true);
    double rhs = nd * nd +
                 std::pow(nd, eps) * (2.0 * disp.value + 2.0 * nd);
    std::ostringstream notes;
    notes << "x ranges over [-n^2, n^2]; x=0 takes the cap 2n; capped terms "
          << disp.capped_terms;
    cr.reports.push_back(make_fitted_report("displayed-minsum-shape",
                                            nd * nd * cc.rho2, rhs, notes.str()));
  }

  // Dirichlet approximant at quality Q = n^r.
  BigInt Q = floor_pow(n, r);
  RationalApprox ap = dirichlet_approx(alpha, Q);
  BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(ap.a), BigInt(n));
  if (g == 0) g = n;
  BigInt nprime = BigInt(n) / g;
  long long blen = (nprime * ap.q).convert_to<long long>();
  double qd = ap.q.convert_to<double>();
  double gd = g.convert_to<double>();
  put(cr, "dirichlet_Q", Q);
  put(cr, "dirichlet_a", ap.a);
  put(cr, "dirichlet_q", ap.q);
  put(cr, "gcd_a_n", g);
  put(cr, "n_prime", nprime);
  put(cr, "block_length", blen);

  // (6) Per-block uniformity of the min-sum at block length n' q.
  BlockStats bs = block_stats(G, X, blen, nd, 2.0);
  double block_shape = nd * nd + static_cast<double>(blen) *
                                     std::log(std::max<double>(blen, 2.0));
  {
    std::ostringstream notes;
    notes << "complete blocks " << bs.complete_blocks << " of length " << blen
          << "; mean " << format_double(bs.mean_sum) << " min "
          << format_double(bs.min_sum)
          << "; complete residues mod q repeat per block";
    cr.reports.push_back(
        make_fitted_report("block-uniformity", bs.max_sum, block_shape, notes.str()));
  }

  // (7) Assembled min-sum bound: (X / (n'q) + 1) blocks of the block shape.
  {
    double rhs = (static_cast<double>(X) / static_cast<double>(blen) + 1.0) *
                 block_shape;
    std::ostringstream notes;
    notes << "min-sum total vs block count times per-block shape";
    cr.reports.push_back(
        make_fitted_report("korobov-assembled", minsum_half, rhs, notes.str()));
  }

  // (8) Denominator quality: q should reach n^(r-eps) for generic alpha.
  {
    std::ostringstream notes;
    notes << "small q flags rational or near-rational alpha; |alpha - a/q| <= "
          << format_double(ap.remainder_bound) << "/q";
    cr.reports.push_back(make_fitted_report("dirichlet-rate-denominator",
                                            std::pow(nd, r - eps), qd, notes.str()));
  }

  // (9) Diophantine rate and (10) crude rate for the averaged statistic.
  {
    double rhs9 = std::pow(nd, eps) *
                  (gd * std::pow(nd, 1.0 - r) + std::pow(nd, r - 1.0) / gd);
    std::ostringstream n9;
    n9 << "rate with the gcd factor g=" << g.str() << "; at eps/2 rhs="
       << format_double(std::pow(nd, eps / 2) *
                        (gd * std::pow(nd, 1.0 - r) + std::pow(nd, r - 1.0) / gd))
       << ", at 2eps rhs="
       << format_double(std::pow(nd, 2 * eps) *
                        (gd * std::pow(nd, 1.0 - r) + std::pow(nd, r - 1.0) / gd));
    cr.reports.push_back(make_fitted_report("dirichlet-rate", cc.rho2, rhs9, n9.str()));
    double rhs10 = std::pow(nd, eps) *
                   (std::pow(nd, 2.0 - r) + std::pow(nd, r - 1.0));
    std::ostringstream n10;
    n10 << "gcd-free rate; minimized at r=3/2";
    cr.reports.push_back(
        make_fitted_report("crude-rate", cc.rho2, rhs10, n10.str()));
  }

  // (11) r = 3/2 balances n^(2-r) + n^(r-1) (AM-GM, any r).
  {
    double balanced = 2.0 * std::sqrt(nd);
    double at_r = std::pow(nd, 2.0 - r) + std::pow(nd, r - 1.0);
    std::ostringstream notes;
    notes << "t -> n^(2-t) + n^(t-1) is minimized at t=3/2 with value 2*sqrt(n)";
    cr.reports.push_back(
        make_explicit_report("exponent-balance", balanced, at_r, notes.str()));
  }
  return cr;
}

// ---------------------------------------------------------------------------
// Degree >= 3 pipeline.
// ---------------------------------------------------------------------------

namespace {

// Recursive odometer over shift tuples h in (±[1, n-1])^dim; calls leaf(h).
template <typename Leaf>
void for_each_nonzero_tuple(long long n, int dim, std::array<long long, 4>& h,
                            int depth, Leaf&& leaf) {
  if (depth == dim) {
    leaf(h);
    return;
  }
  for (long long v = -(n - 1); v <= n - 1; ++v) {
    if (v == 0) continue;
    h[static_cast<size_t>(depth)] = v;
    for_each_nonzero_tuple(n, dim, h, depth + 1, leaf);
  }
}

}  // namespace

ChainResult general_bound_chain(const PolynomialPhase& phase,
                                const ApproxReal& alpha, const ApproxReal& beta,
                                long long n, double r, double eps,
                                const TestFunction& f) {
  const int k = phase.degree();
  if (k < 3 || k > 5)
    throw Error(ErrorCode::InvalidArgument,
                "general_bound_chain: phase degree must be in [3, 5] "
                "(use quadratic_bound_chain for degree 2)");
  static constexpr long long kMaxN[6] = {0, 0, 0, 128, 40, 16};
  if (n < 2)
    throw Error(ErrorCode::InvalidArgument, "general_bound_chain: n must be >= 2");
  if (n > kMaxN[k])
    throw Error(ErrorCode::CostGuard,
                "general_bound_chain: n exceeds the tuple-loop guard " +
                    std::to_string(kMaxN[k]) + " for degree " + std::to_string(k));
  if (!(r > 0.0 && r < 1.0) || !(eps > 0.0 && eps < 1.0))
    throw Error(ErrorCode::InvalidArgument,
                "general_bound_chain: need 0 < r < 1 and 0 < eps < 1");

  const int j = k - 1;                    // differencing order
  const long long K = 1LL << (k - 1);     // Holder exponent
  ChainResult cr;
  cr.degree = k;
  ChainCommon cc = chain_common(phase, alpha, beta, n, f, cr);
  const long long L = cc.L;
  const double nd = static_cast<double>(n);
  const double Lp = static_cast<double>(2 * L + 1);
  put(cr, "r", r);
  put(cr, "eps", eps);
  put(cr, "holder_K", K);

  // (1) Test-function majorant, as in the quadratic pipeline.
  {
    std::ostringstream notes;
    notes << "n^2*rho vs fhat_max * sum_{|l|<=" << L << "} |T_l|^2";
    cr.reports.push_back(make_explicit_report(
        "testfn-majorant", nd * nd * cc.rho2, cc.fhat_max * cc.sum_t2, notes.str()));
  }

  // (2) Power-mean step: the window average of |T|^2 vs the K-average.
  KahanSum stK;
  stK.add(std::pow(cc.tw.value(0), static_cast<double>(K) / 2.0));
  for (long long l = 1; l <= L; ++l)
    stK.add(2.0 * std::pow(cc.tw.value(l), static_cast<double>(K) / 2.0));
  double sum_tK = stK.value();
  {
    std::ostringstream notes;
    notes << "power mean over the 2L+1 window, exponent K=" << K;
    cr.reports.push_back(make_explicit_report(
        "holder-average", cc.sum_t2 / Lp,
        std::pow(sum_tK / Lp, 2.0 / static_cast<double>(K)), notes.str()));
  }

  // Exact fraction table for theta0 = k! c_k alpha / n^(k-1).
  Rational fact(1);
  for (int i = 2; i <= k; ++i) fact *= Rational(i);
  Rational mu = fact * phase.phi.coeff(k) * alpha.center;
  Rational theta0 = mu / Rational(pow_big(BigInt(n), static_cast<unsigned>(k - 1)));
  long long pow_n1 = 1;
  for (int i = 0; i < k - 1; ++i) pow_n1 *= (n - 1);
  const long long X = L * pow_n1;
  std::vector<double> G = stepped_fracs(theta0, X);

  // Constant terms: fractional parts of l * P1 at integer arguments, where
  // P1 is the exact phase polynomial at l = 1.
  RationalPoly P1 = trace_polynomial(phase, alpha.center, beta.center, n, 1);
  const long long R = static_cast<long long>(k - 1) * (n - 1);
  std::vector<BigInt> p1_num(static_cast<size_t>(2 * R) + 1);
  std::vector<BigInt> p1_den(static_cast<size_t>(2 * R) + 1);
  for (long long t = -R; t <= R; ++t) {
    Rational v = P1.eval(Rational(BigInt(t)));
    BigInt den = boost::multiprecision::denominator(v);
    p1_num[static_cast<size_t>(t + R)] =
        mod_floor(boost::multiprecision::numerator(v), den);
    p1_den[static_cast<size_t>(t + R)] = den;
  }

  // Zero-product mass: exact interval lengths over all shift tuples.
  double S_all = 0.0, S_zero = 0.0;
  double C_all = 1.0, C_nonzero = 1.0;
  for (int i = 0; i < k - 1; ++i) {
    C_all *= static_cast<double>(2 * n - 1);
    C_nonzero *= static_cast<double>(2 * (n - 1));
  }
  {
    // Interval length only depends on the multiset of |h_i|; iterate signed
    // tuples directly (the count is (2n-1)^(k-1) <= ~1e6 under the guards).
    std::array<long long, 4> h{};
    KahanSum all, zero;
    std::function<void(int, long long, bool)> rec = [&](int depth, long long sumabs,
                                                        bool haszero) {
      if (depth == k - 1) {
        double len = static_cast<double>(std::max<long long>(0, n - sumabs));
        all.add(len);
        if (haszero) zero.add(len);
        return;
      }
      for (long long v = -(n - 1); v <= n - 1; ++v)
        rec(depth + 1, sumabs + std::llabs(v), haszero || v == 0);
    };
    rec(0, 0, false);
    S_all = all.value();
    S_zero = zero.value();
  }
  double Z = S_all + 2.0 * static_cast<double>(L) * S_zero;
  double zero_count =
      C_all + 2.0 * static_cast<double>(L) * (C_all - C_nonzero);

  // Main tuple pass: telescoped sums for all l in [1, L] and nonzero shift
  // tuples; the -l half is the conjugate, so real parts double.
  KahanSum W_re;       // oscillating part of the differenced sum
  KahanSum min_tight;  // sum of min(|I|, 1/(2||theta||)) over the same tuples
  const int dim = k - 1;
  const int masks = 1 << dim;
  std::vector<double> F(static_cast<size_t>(2 * R) + 1);
  for (long long l = 1; l <= L; ++l) {
    BigInt lq(l);
    for (long long t = -R; t <= R; ++t) {
      const size_t idx = static_cast<size_t>(t + R);
      F[idx] = mod_floor(lq * p1_num[idx], p1_den[idx]).convert_to<double>() /
               p1_den[idx].convert_to<double>();
    }
    std::array<long long, 4> h{};
    std::array<long long, 16> ss{};
    for_each_nonzero_tuple(n, dim, h, 0, [&](const std::array<long long, 4>& hh) {
      long long sumabs = 0, lo_off = 0;
      long long prod = l;
      for (int i = 0; i < dim; ++i) {
        sumabs += std::llabs(hh[static_cast<size_t>(i)]);
        if (hh[static_cast<size_t>(i)] < 0) lo_off -= hh[static_cast<size_t>(i)];
        prod *= hh[static_cast<size_t>(i)];
      }
      long long m = n - sumabs;
      if (m <= 0) return;
      long long lo = 1 + lo_off;
      double theta;
      if (prod > 0) {
        theta = G[static_cast<size_t>(prod)];
      } else {
        double gp = G[static_cast<size_t>(-prod)];
        theta = gp == 0.0 ? 0.0 : 1.0 - gp;
      }
      // Constant term by inclusion-exclusion over shift subsets.
      double c = ((dim % 2) ? -1.0 : 1.0) * F[static_cast<size_t>(R)];
      ss[0] = 0;
      for (int mask = 1; mask < masks; ++mask) {
        int low = mask & (mask - 1);
        int bit = __builtin_ctz(static_cast<unsigned>(mask));
        ss[static_cast<size_t>(mask)] =
            ss[static_cast<size_t>(low)] + hh[static_cast<size_t>(bit)];
        int sign_exp = dim - __builtin_popcount(static_cast<unsigned>(mask));
        double s = (sign_exp % 2) ? -1.0 : 1.0;
        c += s * F[static_cast<size_t>(ss[static_cast<size_t>(mask)] + R)];
      }
      c = frac(c);
      std::complex<double> val = geometric_block(theta, c, lo, m);
      W_re.add(2.0 * val.real());
      double d = dist01(theta);
      min_tight.add(2.0 * capped_inverse(d, static_cast<double>(m), 2.0));
    });
  }

  // (3) The differencing inequality, summed over the trace window.
  {
    double rhs = std::pow(2.0 * nd, static_cast<double>(K - k)) * (Z + W_re.value());
    std::ostringstream notes;
    notes << "order-" << j << " differencing; zero-product mass "
          << format_double(Z) << ", oscillating part " << format_double(W_re.value());
    cr.reports.push_back(
        make_explicit_report("weyl-differencing-power", sum_tK, rhs, notes.str()));
  }

  // (4) Zero-product tuples contribute at most (count) * n.
  {
    std::ostringstream notes;
    notes << "tuples with l*h_1*...*h_" << dim << "=0: " << format_double(zero_count)
          << " of them, mass/n^k = " << format_double(Z / std::pow(nd, k));
    cr.reports.push_back(
        make_explicit_report("zero-product-terms", Z, zero_count * nd, notes.str()));
  }

  // (5) Geometric-series domination of the oscillating part.
  {
    std::ostringstream notes;
    notes << "each interval sum is at most min(|I|, 1/(2||theta||))";
    cr.reports.push_back(make_explicit_report(
        "difference-minsum-domination", W_re.value(), min_tight.value(), notes.str()));
  }

  // Multiplicity collapse: count products l*|h_1|*...*|h_dim| <= X.
  std::vector<std::uint32_t> cnt(static_cast<size_t>(X) + 1, 0);
  {
    std::function<void(int, long long)> rec = [&](int depth, long long prod) {
      if (depth == dim) {
        ++cnt[static_cast<size_t>(prod)];
        return;
      }
      for (long long v = 1; v <= n - 1; ++v) rec(depth + 1, prod * v);
    };
    for (long long l = 1; l <= L; ++l) rec(0, l);
  }
  std::uint32_t cmax = 0;
  KahanSum tuple_capn;
  KahanSum plain_half, plain_full;
  long long capped_full = 0;
  for (long long x = 1; x <= X; ++x) {
    double d = dist01(G[static_cast<size_t>(x)]);
    double th = capped_inverse(d, nd, 2.0);
    double tf = capped_inverse(d, nd, 1.0);
    plain_half.add(th);
    plain_full.add(tf);
    if (tf >= nd) ++capped_full;
    std::uint32_t c = cnt[static_cast<size_t>(x)];
    if (c > 0) tuple_capn.add(static_cast<double>(c) * th);
    cmax = std::max(cmax, c);
  }
  put(cr, "max_multiplicity", static_cast<long long>(cmax));
  put(cr, "minsum_capped_terms", capped_full);

  // (6) Sign classes fold into 2^k copies of the multiplicity-weighted sum.
  {
    double lhs = std::pow(2.0, k) * tuple_capn.value();
    double rhs = std::pow(2.0, k) * static_cast<double>(cmax) * plain_half.value();
    std::ostringstream notes;
    notes << "cap raised to n; max multiplicity " << cmax << " ~ n^"
          << format_double(std::log(std::max<double>(cmax, 1)) / std::log(nd));
    cr.reports.push_back(make_explicit_report("divisor-multiplicity-collapse", lhs,
                                              rhs, notes.str()));
  }

  // (7) Displayed shape: rho^(K/2) vs n^(K/2-k-1+eps) (n^k + full min-sum).
  {
    double lhs = std::pow(cc.rho2, static_cast<double>(K) / 2.0);
    double rhs = std::pow(nd, static_cast<double>(K) / 2.0 - k - 1.0 + eps) *
                 (std::pow(nd, k) + plain_full.value());
    std::ostringstream notes;
    notes << "K/2-th power of rho against the assembled min-sum form, cap n";
    cr.reports.push_back(
        make_fitted_report("displayed-minsum-shape", lhs, rhs, notes.str()));
  }

  // Convergent selection for the block decomposition.
  ContinuedFraction cf = ContinuedFraction::from_real(alpha, 256);
  BigInt npow = pow_big(BigInt(n), static_cast<unsigned>(k - 1));
  size_t sel_m = 0;
  BigInt sel_p, sel_q, sel_g;
  bool fallback = false;
  try {
    GoodConvergent gc = find_good_convergent(cf, n, k, r, eps);
    sel_m = gc.m;
    sel_p = gc.p;
    sel_q = gc.q;
    sel_g = gc.g;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotFound) throw;
    FnValue fv = f_n_alpha(cf, n, k, FnVariant::ByDenominator);
    fallback = true;
    sel_m = fv.arg_m;
    sel_p = cf.p[sel_m];
    sel_q = cf.q[sel_m];
    sel_g = boost::multiprecision::gcd(boost::multiprecision::abs(sel_p), npow);
    if (sel_g == 0) sel_g = npow;
  }
  BigInt nprime_k = npow / sel_g;
  long long blen = (sel_q * nprime_k).convert_to<long long>();
  double qd = sel_q.convert_to<double>();
  double gd = sel_g.convert_to<double>();
  put(cr, "convergent_m", static_cast<long long>(sel_m));
  put(cr, "convergent_p", sel_p);
  put(cr, "convergent_q", sel_q);
  put(cr, "gcd_p_npow", sel_g);
  put(cr, "n_prime_k", nprime_k);
  put(cr, "block_length", blen);
  put(cr, "convergent_fallback", fallback ? "true" : "false");

  // (8) Block decomposition of the full min-sum at block length q * n'_k.
  {
    BlockStats bs = block_stats(G, X, blen, nd, 1.0);
    double block_shape = std::pow(nd, k) + static_cast<double>(blen) *
                                               std::log(std::max<double>(blen, 2.0));
    double rhs = (static_cast<double>(X) / static_cast<double>(blen) + 1.0) *
                 block_shape;
    std::ostringstream notes;
    notes << "complete blocks " << bs.complete_blocks << " of length " << blen
          << "; per-block max " << format_double(bs.max_sum) << " mean "
          << format_double(bs.mean_sum);
    cr.reports.push_back(
        make_fitted_report("block-bound", plain_full.value(), rhs, notes.str()));
  }

  // (9) Balance of the convergent terms.
  double balance = nd * gd / qd + qd / (nd * gd);
  {
    double rhs = std::pow(nd, 1.0 + eps - r) + std::pow(nd, r - 1.0);
    std::ostringstream notes;
    notes << "n g / q + q / (n g) with g = gcd(p_m, n^(k-1)); m=" << sel_m
          << (fallback ? " (best-balance fallback: no convergent with small gcd "
                         "in the target range)"
                       : " (good convergent)");
    cr.reports.push_back(
        make_fitted_report("good-convergent-balance", balance, rhs, notes.str()));
  }

  // (10) Assembled rate with the balance bracket, (11) the clean target rate.
  {
    double bracket = std::pow(1.0 + balance, 2.0 / static_cast<double>(K));
    double rhs10 =
        std::pow(nd, 1.0 - 2.0 / static_cast<double>(K) + eps) * bracket;
    std::ostringstream n10;
    n10 << "bracket (1 + n g/q + q/(n g))^(2/K) = " << format_double(bracket);
    cr.reports.push_back(
        make_fitted_report("assembled-exponent", cc.rho2, rhs10, n10.str()));
    double rhs11 = std::pow(nd, 1.0 - 2.0 / static_cast<double>(K) + eps);
    std::ostringstream n11;
    n11 << "target exponent 1 - 2/K + eps = "
        << format_double(1.0 - 2.0 / static_cast<double>(K) + eps)
        << "; at eps/2 rhs="
        << format_double(std::pow(nd, 1.0 - 2.0 / static_cast<double>(K) + eps / 2))
        << ", at 2eps rhs="
        << format_double(std::pow(nd, 1.0 - 2.0 / static_cast<double>(K) + 2 * eps))
        << "; ratio above 1 means the balance bracket is carrying weight";
    cr.reports.push_back(
        make_fitted_report("final-exponent", cc.rho2, rhs11, n11.str()));
  }
  return cr;
}

}  // namespace qmaps
