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

#ifndef QMAPS_SPECTRUM_HPP
#define QMAPS_SPECTRUM_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qmaps/numeric.hpp"
#include "qmaps/rational_poly.hpp"

namespace qmaps {

// The unitary under study acts on an n-dimensional space with eigenphases
//   theta_k = n * (alpha * phi(k/n) + beta * k/n)  (mod 1),
// phi a polynomial with exact rational coefficients.  Powers of the operator
// have traces  Tr U^l = sum_k e(l * theta_k),  e(x) = exp(2*pi*i*x).

struct PolynomialPhase {
  RationalPoly phi;

  static PolynomialPhase from_coeffs_highest_first(const std::vector<Rational>& c);
  static PolynomialPhase parse(const std::string& comma_separated);  // "1,0,0" => x^2
  int degree() const { return phi.degree(); }
};

enum class IndexRange {
  OneToN,     // k = 1..n (matches the displayed trace sums)
  MinusNToN,  // k = -n..n, dimension 2n+1
};

struct SpectrumParams {
  long long n = 1;
  ApproxReal alpha = ApproxReal::exact_int(0);
  ApproxReal beta = ApproxReal::exact_int(0);
  IndexRange index_range = IndexRange::OneToN;
};

// Hypotheses on the classical data:
//   (i)  phi'' does not vanish on [-1, 1]         (curvature / torsion)
//   (ii) alpha*phi' + beta does not vanish on [-1,1] (no stationary drift)
// (ii) is reported but never gates the estimate pipeline.
struct HypothesisReport {
  bool curvature_ok = false;  // (i)
  bool drift_ok = false;      // (ii)
  std::string details;
};

HypothesisReport validate_hypotheses(const PolynomialPhase& phase,
                                     const SpectrumParams& params);

enum class PrecisionMode {
  Auto,           // exact rational reduction (inputs are always rational here)
  ExactRational,  // force the exact integer-numerator path
  Extended,       // ~50-digit floating reduction; used for cross-validation
};

// Eigenphase numerators over one common denominator: theta_k = num[k]/den mod 1
// already reduced to [0, 1).
struct ExactPhases {
  std::vector<BigInt> num;
  BigInt den;
};

struct PhaseSet {
  long long n = 0;
  IndexRange range = IndexRange::OneToN;
  std::vector<double> phases;        // in [0, 1), indexed by k ascending
  std::optional<ExactPhases> exact;  // retained on request (exact modes only)
  // Bound on |computed - true| per phase induced by declared input precision
  // (zero for exact rational inputs).
  double phase_error_bound = 0.0;

  size_t count() const { return phases.size(); }
};

// Computes all eigenphases.  Throws Error(PrecisionExceeded) when the declared
// input precision cannot guarantee absolute phase error < 2^-60 at this n; the
// message names the decimal precision that would suffice.
PhaseSet eigenphases(const PolynomialPhase& phase, const SpectrumParams& params,
                     PrecisionMode mode = PrecisionMode::Auto,
                     bool keep_exact = false);

// Single trace Tr U^l by direct summation (exact per-term phase reduction when
// the exact numerators are retained in the PhaseSet).
std::complex<double> trace_power(const PhaseSet& ps, long long ell);
std::complex<double> trace_power(const PolynomialPhase& phase,
                                 const SpectrumParams& params, long long ell);

enum class TraceStrategy {
  Incremental,  // one multiply per (k, l) step; fast path
  Direct,       // independent per-l summation; reference path
};

// Traces for all |l| <= window.  Evenness Tr U^-l = conj(Tr U^l) is exact by
// construction: only l >= 0 is stored and negative l is served conjugated.
struct TraceWindow {
  long long n = 0;
  long long window = 0;
  size_t phase_count = 0;
  std::vector<std::complex<double>> traces;  // index l = 0..window

  std::complex<double> trace(long long ell) const;
  double value(long long ell) const;  // |Tr U^l|^2
};

TraceWindow trace_window(const PhaseSet& ps, long long window,
                         TraceStrategy strategy = TraceStrategy::Incremental);
TraceWindow trace_window(const PolynomialPhase& phase, const SpectrumParams& params,
                         long long window,
                         TraceStrategy strategy = TraceStrategy::Incremental);

namespace detail {
// Naive double-precision phase evaluation; only for precision cross-checks in
// tests.  Loses fractional accuracy once n * l * |coeffs| nears 2^53.
std::vector<double> eigenphases_naive_double(const PolynomialPhase& phase,
                                             const SpectrumParams& params);
}  // namespace detail

}  // namespace qmaps

#endif  // QMAPS_SPECTRUM_HPP
