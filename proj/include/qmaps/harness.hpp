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

#ifndef QMAPS_HARNESS_HPP
#define QMAPS_HARNESS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmaps/pcf.hpp"
#include "qmaps/report.hpp"
#include "qmaps/spectrum.hpp"

namespace qmaps {

// ---------------------------------------------------------------------------
// Monte-Carlo sweeps: sample (alpha, beta), accumulate the cumulative average
// of the local statistic up to each N in the grid, and summarize how fast the
// deviation from the Poisson reference decays.
//
// Sampling is reproducible and independent of the worker count: sample i uses
// mt19937_64 seeded with splitmix64(seed ^ GOLDEN*(i+1)), and each 53-bit
// uniform draw is kept as an exact dyadic rational so the phases take the
// exact-arithmetic path.
// ---------------------------------------------------------------------------

struct SweepConfig {
  PolynomialPhase phase = PolynomialPhase::parse("1,0,0");  // x^2
  TestFunction testfn = TestFunction::fejer();
  Rational domain_scale = Rational(1);  // draws live in [0, T) or [-T, T)
  bool domain_symmetric = false;
  long long samples = 100;
  std::vector<long long> N_grid = {100, 200, 400, 800, 1600};
  std::uint64_t seed = 20260825ULL;
  int workers = 1;
  IndexRange index_range = IndexRange::OneToN;
  std::optional<ApproxReal> forced_alpha;  // fix a coordinate instead of sampling
  std::optional<ApproxReal> forced_beta;
};

// "fejer" | "triangle:<p>" | "table:<path>".
TestFunction parse_testfn_spec(const std::string& spec);

// Parse a JSON config; unknown keys are rejected.  Keys (all optional):
//   phi              "c_k,...,c_0" highest-first, as for PolynomialPhase::parse
//   testfn           "fejer" | "triangle:<p>" | "table:<path>"
//   domain           {"scale": "<rational>", "symmetric": bool}
//   samples, seed, workers
//   N_grid           [ints]  (or "subsequence": {"m_lo":..,"m_hi":..})
//   index_range      "one_to_n" | "symmetric"
//   alpha, beta      forced values, in ApproxReal::parse syntax
SweepConfig parse_sweep_config(const std::string& json_text);

struct SweepRecord {
  long long index = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::string alpha_exact;  // the sampled rationals, exactly
  std::string beta_exact;
  bool ok = false;
  std::string error;
  std::vector<double> rho_bar;  // cumulative average at each grid N
  std::vector<double> abs_dev;  // |rho_bar - poisson_ref|
};

struct SweepSummary {
  std::vector<long long> N_grid;
  std::vector<double> mean_sq_dev;    // across ok samples, per grid N
  std::vector<double> se_sq_dev;      // standard error of mean_sq_dev
  std::vector<double> median_abs_dev;
  double slope_vs_logN = 0.0;   // d log(mean_sq_dev) / d log N
  double slope_vs_bound = 0.0;  // ... / d log((log N)^2 / N)
  double improved_fraction = 0.0;  // |dev| smaller at the last N than the first
  long long samples_ok = 0;
  long long samples_failed = 0;
  double poisson_ref = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRecord> records;
  SweepSummary summary;
};

SweepResult run_sweep(const SweepConfig& config);

// Deterministic CSV / JSON renderings (doubles at 17 significant digits).
std::string sweep_records_csv(const SweepResult& result);
std::string sweep_summary_json(const SweepResult& result);

// ---------------------------------------------------------------------------
// Subsequence N_m = floor(m (log m)^4) and the between-point gap study: along
// m = m_lo .. m_hi-1, the largest |rhobar_M - rhobar_{N_m}| over
// N_m < M <= N_{m+1} is compared against the telescoping bound
// 2 (M - N_m)/M * max_n rho and the (log m)^4 * max_n rho / N_{m+1} shape.
// rhobar_0 = 0 by convention.  The two-term decomposition
//   rhobar_M - rhobar_N = ((N - M)/M) rhobar_N + (1/M) sum_{N<n<=M} rho_n
// is re-verified at every M from independently accumulated sums.
// ---------------------------------------------------------------------------

long long subsequence_value(long long m);  // m >= 2

struct GapRecord {
  long long m = 0;
  long long N_m = 0;
  long long N_m1 = 0;
  long long arg_M = 0;        // where the max gap is attained
  double max_gap = 0.0;
  double explicit_bound = 0.0;
  double shape_bound = 0.0;
  double max_identity_gap = 0.0;  // relative, over all M in the window
};

struct GapStudy {
  std::vector<GapRecord> records;
  std::vector<BoundReport> reports;  // per m: explicit telescoping + fitted shape
  double poisson_ref = 0.0;
  double max_rho2 = 0.0;  // over all n up to N_{m_hi}
  bool identities_ok = false;
};

GapStudy gap_study(const PolynomialPhase& phase, const ApproxReal& alpha,
                   const ApproxReal& beta, long long m_lo, long long m_hi,
                   const TestFunction& f = TestFunction::fejer(),
                   IndexRange range = IndexRange::OneToN);

std::string gap_records_csv(const GapStudy& study);
std::string gap_summary_json(const GapStudy& study);

// ---------------------------------------------------------------------------
// Exponent study: least-squares fit of log rho_2^n against log n over a grid.
// ---------------------------------------------------------------------------

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares y ~ slope * x + intercept; needs >= 2 distinct x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ExponentPoint {
  long long n = 0;
  double rho2 = 0.0;
};

struct ExponentStudy {
  std::vector<ExponentPoint> points;
  LinearFit fit;  // log rho2 vs log n
  double poisson_ref = 0.0;
};

ExponentStudy exponent_study(const PolynomialPhase& phase, const ApproxReal& alpha,
                             const ApproxReal& beta,
                             const std::vector<long long>& n_grid,
                             const TestFunction& f = TestFunction::fejer(),
                             IndexRange range = IndexRange::OneToN);

std::string exponent_csv(const ExponentStudy& study);
std::string exponent_json(const ExponentStudy& study);

}  // namespace qmaps

#endif  // QMAPS_HARNESS_HPP
