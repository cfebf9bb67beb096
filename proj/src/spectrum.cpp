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

#include "qmaps/spectrum.hpp"

#include <cmath>
#include <sstream>

namespace qmaps {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Absolute phase error that the declared input precision must stay below.
const double kPhaseBudget = std::ldexp(1.0, -60);

long long phase_count_for(long long n, IndexRange range) {
  return range == IndexRange::OneToN ? n : 2 * n + 1;
}

long long first_index(long long n, IndexRange range) {
  return range == IndexRange::OneToN ? 1 : -n;
}

}  // namespace

PolynomialPhase PolynomialPhase::from_coeffs_highest_first(
    const std::vector<Rational>& c) {
  if (c.empty())
    throw Error(ErrorCode::InvalidArgument, "phase polynomial needs coefficients");
  return PolynomialPhase{RationalPoly::from_highest_first(c)};
}

PolynomialPhase PolynomialPhase::parse(const std::string& comma_separated) {
  std::vector<Rational> coeffs;
  std::string token;
  std::istringstream is(comma_separated);
  while (std::getline(is, token, ',')) {
    // trim spaces
    size_t b = token.find_first_not_of(" \t");
    size_t e = token.find_last_not_of(" \t");
    if (b == std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "empty coefficient in phase polynomial");
    coeffs.push_back(parse_rational(token.substr(b, e - b + 1)));
  }
  return from_coeffs_highest_first(coeffs);
}

HypothesisReport validate_hypotheses(const PolynomialPhase& phase,
                                     const SpectrumParams& params) {
  if (phase.degree() < 2) {
    throw Error(ErrorCode::DegeneratePolynomial,
                "phase polynomial must have degree >= 2 (got degree " +
                    std::to_string(phase.degree()) + ")");
  }
  HypothesisReport rep;
  const Rational lo(-1), hi(1);

  RationalPoly ddphi = phase.phi.derivative().derivative();
  rep.curvature_ok = !has_root_in_closed(ddphi, lo, hi);

  // alpha*phi' + beta, checked on the rational centers of the inputs.
  RationalPoly drift = phase.phi.derivative().scaled(params.alpha.center) +
                       RationalPoly({params.beta.center});
  rep.drift_ok = !drift.is_zero() && !has_root_in_closed(drift, lo, hi);
  if (drift.is_zero()) rep.drift_ok = false;

  std::ostringstream os;
  os << "phi''(x) = " << ddphi.to_string() << ": "
     << (rep.curvature_ok ? "nonvanishing" : "vanishes") << " on [-1,1]; "
     << "alpha*phi'(x)+beta = " << drift.to_string() << ": "
     << (rep.drift_ok ? "nonvanishing" : "vanishes") << " on [-1,1]";
  if (!params.alpha.is_exact() || !params.beta.is_exact())
    os << " (checked on declared rational approximants)";
  rep.details = os.str();
  return rep;
}

namespace {

// Phase evaluator over one exact common denominator:
//   P(k) = sum_j e_j k^j / den,  theta_k = P(k) mod 1.
// A 128-bit fast path covers the common sweep regime; the big-int path covers
// everything else.
struct ExactEvaluator {
  std::vector<BigInt> e;  // integer numerator coefficients, ascending
  BigInt den;
  bool fits128 = false;
  std::vector<__int128> e128;
  __int128 den128 = 0;

  static ExactEvaluator build(const PolynomialPhase& phase, const Rational& alpha,
                              const Rational& beta, long long n) {
    const RationalPoly& phi = phase.phi;
    int d = std::max(phi.degree(), 1);
    // s_j = alpha * c_j * n^(1-j), with beta folded into the linear term.
    std::vector<Rational> s(static_cast<size_t>(d) + 1, Rational(0));
    BigInt nn(n);
    for (int j = 0; j <= phi.degree(); ++j) {
      Rational cj = phi.coeff(j);
      if (cj == 0) continue;
      Rational scale =
          j == 0 ? Rational(nn) : Rational(1, pow_big(nn, static_cast<unsigned>(j - 1)));
      s[static_cast<size_t>(j)] += alpha * cj * scale;
    }
    s[1] += beta;

    ExactEvaluator ev;
    ev.den = 1;
    for (const auto& sj : s) ev.den = boost::multiprecision::lcm(ev.den, denominator(sj));
    ev.e.reserve(s.size());
    for (const auto& sj : s) ev.e.push_back(numerator(sj) * (ev.den / denominator(sj)));

    // 128-bit eligibility: Horner's intermediate values are bounded by
    // max_k |P(k)| * den <= sum_j |e_j| n^j (k ranges over [-n, n]).
    BigInt bound = 0;
    BigInt npow = 1;
    for (size_t j = 0; j < ev.e.size(); ++j) {
      bound += abs(ev.e[j]) * npow;
      npow *= nn;
    }
    static const BigInt kLimit = pow_big(BigInt(2), 126);
    if (bound < kLimit && ev.den < kLimit) {
      ev.fits128 = true;
      ev.den128 = static_cast<__int128>(ev.den.convert_to<boost::multiprecision::int128_t>());
      for (const auto& c : ev.e)
        ev.e128.push_back(
            static_cast<__int128>(c.convert_to<boost::multiprecision::int128_t>()));
    }
    return ev;
  }

  // Reduced numerator of theta_k in [0, den).
  BigInt numerator_mod(long long k) const {
    BigInt acc = 0;
    for (auto it = e.rbegin(); it != e.rend(); ++it) acc = acc * k + *it;
    return mod_floor(acc, den);
  }

  double phase_double(long long k) const {
    if (fits128) {
      __int128 acc = 0;
      for (auto it = e128.rbegin(); it != e128.rend(); ++it) acc = acc * k + *it;
      acc %= den128;
      if (acc < 0) acc += den128;
      return static_cast<double>(acc) / static_cast<double>(den128);
    }
    return Rational(numerator_mod(k), den).convert_to<double>();
  }
};

double max_abs_coeff_sum(const RationalPoly& phi) {
  Rational s(0);
  for (int j = 0; j <= phi.degree(); ++j) {
    Rational c = phi.coeff(j);
    s += c < 0 ? Rational(-c) : c;
  }
  return s.convert_to<double>();
}

void check_precision_budget(const PolynomialPhase& phase, const SpectrumParams& p) {
  if (p.alpha.is_exact() && p.beta.is_exact()) return;
  double coeff_sum = max_abs_coeff_sum(phase.phi);
  double n = static_cast<double>(p.n);
  double bound = p.alpha.radius.convert_to<double>() * n * coeff_sum +
                 p.beta.radius.convert_to<double>() * n;
  if (bound < kPhaseBudget) return;
  // Smallest decimal precision that would bring the bound under budget.
  double scale = n * (coeff_sum + 1.0);
  int required = static_cast<int>(std::ceil(std::log10(scale / kPhaseBudget))) + 1;
  std::ostringstream os;
  os << "declared input precision too coarse for n = " << p.n
     << ": phase error bound " << bound << " exceeds 2^-60; "
     << "need at least " << required << " fractional decimal digits";
  throw Error(ErrorCode::PrecisionExceeded, os.str());
}

}  // namespace

PhaseSet eigenphases(const PolynomialPhase& phase, const SpectrumParams& params,
                     PrecisionMode mode, bool keep_exact) {
  if (params.n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  check_precision_budget(phase, params);

  PhaseSet ps;
  ps.n = params.n;
  ps.range = params.index_range;
  long long count = phase_count_for(params.n, params.index_range);
  long long k0 = first_index(params.n, params.index_range);
  ps.phases.resize(static_cast<size_t>(count));
  double coeff_sum = max_abs_coeff_sum(phase.phi);
  ps.phase_error_bound =
      params.alpha.radius.convert_to<double>() * static_cast<double>(params.n) * coeff_sum +
      params.beta.radius.convert_to<double>() * static_cast<double>(params.n);

  if (mode == PrecisionMode::Extended) {
    // Floating reduction at ~50 significant digits; headroom below 2^-60 is
    // ample for every n this project touches.
    int d = std::max(phase.degree(), 1);
    std::vector<Real50> s(static_cast<size_t>(d) + 1, Real50(0));
    Real50 nn(params.n);
    for (int j = 0; j <= phase.degree(); ++j) {
      Rational cj = phase.phi.coeff(j);
      if (cj == 0) continue;
      Real50 scale = j == 0 ? nn : Real50(1) / boost::multiprecision::pow(
                                                   nn, static_cast<unsigned>(j - 1));
      s[static_cast<size_t>(j)] += params.alpha.to_real50() * Real50(cj) * scale;
    }
    s[1] += params.beta.to_real50();
    for (long long i = 0; i < count; ++i) {
      long long k = k0 + i;
      Real50 acc(0);
      for (auto it = s.rbegin(); it != s.rend(); ++it) acc = acc * k + *it;
      ps.phases[static_cast<size_t>(i)] = frac(acc).convert_to<double>();
    }
    return ps;
  }

  ExactEvaluator ev =
      ExactEvaluator::build(phase, params.alpha.center, params.beta.center, params.n);
  for (long long i = 0; i < count; ++i)
    ps.phases[static_cast<size_t>(i)] = ev.phase_double(k0 + i);
  if (keep_exact) {
    ExactPhases ex;
    ex.den = ev.den;
    ex.num.reserve(static_cast<size_t>(count));
    for (long long i = 0; i < count; ++i) ex.num.push_back(ev.numerator_mod(k0 + i));
    ps.exact = std::move(ex);
  }
  return ps;
}

namespace detail {
std::vector<double> eigenphases_naive_double(const PolynomialPhase& phase,
                                             const SpectrumParams& params) {
  long long count = phase_count_for(params.n, params.index_range);
  long long k0 = first_index(params.n, params.index_range);
  double a = params.alpha.to_double();
  double b = params.beta.to_double();
  double n = static_cast<double>(params.n);
  std::vector<double> out(static_cast<size_t>(count));
  for (long long i = 0; i < count; ++i) {
    double x = static_cast<double>(k0 + i) / n;
    out[static_cast<size_t>(i)] = frac(n * (a * phase.phi.eval(x) + b * x));
  }
  return out;
}
}  // namespace detail

std::complex<double> trace_power(const PhaseSet& ps, long long ell) {
  KahanSum re, im;
  if (ps.exact) {
    const ExactPhases& ex = *ps.exact;
    BigInt l(ell);
    for (const BigInt& num : ex.num) {
      double arg = Rational(mod_floor(num * l, ex.den), ex.den).convert_to<double>();
      re.add(std::cos(kTwoPi * arg));
      im.add(std::sin(kTwoPi * arg));
    }
  } else {
    double l = static_cast<double>(ell);
    for (double th : ps.phases) {
      double arg = frac(l * th);
      re.add(std::cos(kTwoPi * arg));
      im.add(std::sin(kTwoPi * arg));
    }
  }
  return {re.value(), im.value()};
}

std::complex<double> trace_power(const PolynomialPhase& phase,
                                 const SpectrumParams& params, long long ell) {
  PhaseSet ps = eigenphases(phase, params, PrecisionMode::Auto, true);
  return trace_power(ps, ell);
}

std::complex<double> TraceWindow::trace(long long ell) const {
  long long a = ell < 0 ? -ell : ell;
  if (a > window)
    throw Error(ErrorCode::WindowTooSmall,
                "trace index " + std::to_string(ell) + " outside window " +
                    std::to_string(window));
  std::complex<double> t = traces[static_cast<size_t>(a)];
  return ell < 0 ? std::conj(t) : t;
}

double TraceWindow::value(long long ell) const {
  std::complex<double> t = trace(ell);  // conjugation keeps |.|^2 exactly even
  return t.real() * t.real() + t.imag() * t.imag();
}

TraceWindow trace_window(const PhaseSet& ps, long long window, TraceStrategy strategy) {
  if (window < 0) throw Error(ErrorCode::InvalidArgument, "window must be >= 0");
  TraceWindow tw;
  tw.n = ps.n;
  tw.window = window;
  tw.phase_count = ps.count();
  tw.traces.assign(static_cast<size_t>(window) + 1, {0.0, 0.0});
  size_t m = ps.count();
  tw.traces[0] = {static_cast<double>(m), 0.0};
  if (window == 0) return tw;

  if (strategy == TraceStrategy::Direct) {
    for (long long l = 1; l <= window; ++l)
      tw.traces[static_cast<size_t>(l)] = trace_power(ps, l);
    return tw;
  }

  // Incremental rotations: z_k(l+1) = z_k(l) * w_k.  The accumulation is
  // blocked by four fixed lanes so the summation order never depends on the
  // build's vector width or on any threading above this call.
  std::vector<double> wr(m), wi(m), zr(m, 1.0), zi(m, 0.0);
  for (size_t k = 0; k < m; ++k) {
    double a = kTwoPi * ps.phases[k];
    wr[k] = std::cos(a);
    wi[k] = std::sin(a);
  }
  size_t m4 = m - (m % 4);
  for (long long l = 1; l <= window; ++l) {
    double sr0 = 0, sr1 = 0, sr2 = 0, sr3 = 0;
    double si0 = 0, si1 = 0, si2 = 0, si3 = 0;
    for (size_t k = 0; k < m4; k += 4) {
      double r0 = zr[k] * wr[k] - zi[k] * wi[k];
      double i0 = zr[k] * wi[k] + zi[k] * wr[k];
      double r1 = zr[k + 1] * wr[k + 1] - zi[k + 1] * wi[k + 1];
      double i1 = zr[k + 1] * wi[k + 1] + zi[k + 1] * wr[k + 1];
      double r2 = zr[k + 2] * wr[k + 2] - zi[k + 2] * wi[k + 2];
      double i2 = zr[k + 2] * wi[k + 2] + zi[k + 2] * wr[k + 2];
      double r3 = zr[k + 3] * wr[k + 3] - zi[k + 3] * wi[k + 3];
      double i3 = zr[k + 3] * wi[k + 3] + zi[k + 3] * wr[k + 3];
      zr[k] = r0; zi[k] = i0;
      zr[k + 1] = r1; zi[k + 1] = i1;
      zr[k + 2] = r2; zi[k + 2] = i2;
      zr[k + 3] = r3; zi[k + 3] = i3;
      sr0 += r0; sr1 += r1; sr2 += r2; sr3 += r3;
      si0 += i0; si1 += i1; si2 += i2; si3 += i3;
    }
    double sr = (sr0 + sr1) + (sr2 + sr3);
    double si = (si0 + si1) + (si2 + si3);
    for (size_t k = m4; k < m; ++k) {
      double r = zr[k] * wr[k] - zi[k] * wi[k];
      double i = zr[k] * wi[k] + zi[k] * wr[k];
      zr[k] = r;
      zi[k] = i;
      sr += r;
      si += i;
    }
    tw.traces[static_cast<size_t>(l)] = {sr, si};
  }
  return tw;
}

TraceWindow trace_window(const PolynomialPhase& phase, const SpectrumParams& params,
                         long long window, TraceStrategy strategy) {
  bool want_exact = strategy == TraceStrategy::Direct;
  PhaseSet ps = eigenphases(phase, params, PrecisionMode::Auto, want_exact);
  return trace_window(ps, window, strategy);
}

}  // namespace qmaps
