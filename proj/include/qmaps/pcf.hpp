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

#ifndef QMAPS_PCF_HPP
#define QMAPS_PCF_HPP

#include <span>
#include <string>
#include <vector>

#include "qmaps/spectrum.hpp"

namespace qmaps {

// Even test function given on the frequency side: fhat has compact support
// [-S, S].  The position-side form f (its inverse transform) is only needed
// for the pair-counting cross-check and the Poisson reference value
// fhat(0) + f(0).
class TestFunction {
 public:
  enum class Kind { Fejer, TrianglePower, UserTable };

  // fhat(t) = max(0, 1-|t|),  f(x) = (sin(pi x)/(pi x))^2.
  static TestFunction fejer();
  // fhat(t) = max(0, 1-|t|)^p; no closed position-side form is wired up.
  static TestFunction triangle_power(int p);
  // Piecewise-linear even table of (t, fhat) nodes, t in [0, S] ascending.
  static TestFunction from_table(std::vector<std::pair<double, double>> nodes);
  static TestFunction from_table_file(const std::string& path);

  Kind kind() const { return kind_; }
  double support_radius() const { return support_; }
  double fhat(double t) const;
  double fhat_zero() const { return fhat(0.0); }
  double f_zero() const { return f_zero_; }  // = integral of fhat
  bool has_physical_form() const { return kind_ == Kind::Fejer; }
  double f(double x) const;  // throws Error(UnsupportedKind) unless Fejer

  // Verifies f(0) = integral of fhat by Simpson quadrature.
  bool consistent(double tol = 1e-8) const;

  std::string describe() const;

 private:
  TestFunction() = default;
  Kind kind_ = Kind::Fejer;
  double support_ = 1.0;
  int power_ = 1;
  double f_zero_ = 1.0;
  std::vector<std::pair<double, double>> nodes_;
};

// One pair correlation measurement rho_2^n(f) = (1/m^2) sum_l fhat(l/m) |Tr U^l|^2
// where m is the eigenphase count of the window (m = n for index range 1..n,
// m = 2n+1 for the symmetric range; the count plays the density role in both
// the normalization and the fhat argument).
struct PcfValue {
  long long n = 0;
  double value = 0.0;
  long long ell_window = 0;  // summation actually ran over |l| <= ell_window
  double poisson_ref = 0.0;
};

PcfValue rho2_local(const TestFunction& f, const TraceWindow& tw);

// Convenience: build the trace window for one n and evaluate.
PcfValue rho2_local(const TestFunction& f, const PolynomialPhase& phase,
                    const SpectrumParams& params);

struct CumulativePcf {
  long long N = 0;
  double value = 0.0;               // (1/N) sum_{n<=N} rho_2^n(f)
  std::vector<PcfValue> per_n;      // filled when requested
};

CumulativePcf rho2_cumulative(const TestFunction& f, const PolynomialPhase& phase,
                              const ApproxReal& alpha, const ApproxReal& beta,
                              long long N, bool keep_per_n = false,
                              IndexRange range = IndexRange::OneToN);

// Streaming mean with compensated summation; harness code feeds local values
// n = 1, 2, ... and snapshots the running average.
class CumulativeAccumulator {
 public:
  void add(double local) {
    sum_.add(local);
    ++count_;
  }
  long long count() const { return count_; }
  double mean() const { return count_ == 0 ? 0.0 : sum_.value() / static_cast<double>(count_); }

 private:
  KahanSum sum_;
  long long count_ = 0;
};

// Poisson limit fhat(0) + f(0).
double poisson_reference(const TestFunction& f);

// Physical-side pair counting:
//   (1/n) sum_{j,k} sum_{|m| <= m_cutoff} f(n (theta_j - theta_k + m)).
// Independent of the trace/frequency pipeline; Fejer only.  The caller picks
// m_cutoff; recommended_m_cutoff gives the smallest cutoff with per-pair tail
// below the requested tolerance.
double pair_count_oracle(const TestFunction& f, std::span<const double> phases,
                         long long n, long long m_cutoff);
long long recommended_m_cutoff(long long n, double per_pair_tol);

// Exact split of the cumulative average increment between consecutive cutoffs:
//   rhobar_M - rhobar_{N} = ((N - M)/M) rhobar_N + (1/M) sum_{n=N+1}^{M} rho_2^n.
struct OscillationDecomposition {
  double term_scaled_prev = 0.0;  // ((N - M)/M) * rhobar_N
  double term_new_levels = 0.0;   // (1/M) * sum of the new local values
  double sum = 0.0;
  double direct_difference = 0.0;
  bool identity_holds = false;    // sum == direct at 1e-10 relative
};

OscillationDecomposition oscillation_decomposition(const TestFunction& f,
                                                   const PolynomialPhase& phase,
                                                   const ApproxReal& alpha,
                                                   const ApproxReal& beta,
                                                   long long N, long long M,
                                                   IndexRange range = IndexRange::OneToN);

}  // namespace qmaps

#endif  // QMAPS_PCF_HPP
