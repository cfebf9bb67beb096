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

#include "qmaps/qmaps.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "qmaps/diophantine.hpp"
#include "qmaps/harness.hpp"
#include "qmaps/io.hpp"
#include "qmaps/numeric.hpp"
#include "qmaps/pcf.hpp"
#include "qmaps/spectrum.hpp"
#include "qmaps/weyl.hpp"

struct qm_phase {
  qmaps::PolynomialPhase v;
};

struct qm_testfn {
  qmaps::TestFunction v;
};

struct qm_trace_window {
  qmaps::TraceWindow v;
};

namespace {

thread_local std::string t_last_error;

qm_status status_of(qmaps::ErrorCode code) {
  using qmaps::ErrorCode;
  switch (code) {
    case ErrorCode::Ok:
      return QM_OK;
    case ErrorCode::InvalidArgument:
      return QM_INVALID_ARGUMENT;
    case ErrorCode::DegeneratePolynomial:
      return QM_DEGENERATE_POLYNOMIAL;
    case ErrorCode::PrecisionExceeded:
      return QM_PRECISION_EXCEEDED;
    case ErrorCode::WindowTooSmall:
      return QM_WINDOW_TOO_SMALL;
    case ErrorCode::UnsupportedKind:
      return QM_UNSUPPORTED_KIND;
    case ErrorCode::CostGuard:
      return QM_COST_GUARD;
    case ErrorCode::NotFound:
      return QM_NOT_FOUND;
    case ErrorCode::Io:
      return QM_IO;
    case ErrorCode::Internal:
      return QM_INTERNAL;
  }
  return QM_INTERNAL;
}

template <typename F>
qm_status guarded(F&& fn) {
  try {
    fn();
    t_last_error.clear();
    return QM_OK;
  } catch (const qmaps::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return QM_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return QM_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return QM_INTERNAL;
  }
}

char* dup_cstring(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool cond, const char* message) {
  if (!cond) throw qmaps::Error(qmaps::ErrorCode::InvalidArgument, message);
}

qmaps::ApproxReal parse_real(const char* text, const char* what) {
  require(text != nullptr, what);
  return qmaps::ApproxReal::parse(text);
}

qmaps::SpectrumParams make_params(long long n, const char* alpha, const char* beta,
                                  int symmetric_range) {
  qmaps::SpectrumParams p;
  p.n = n;
  p.alpha = parse_real(alpha, "alpha must not be NULL");
  p.beta = parse_real(beta, "beta must not be NULL");
  p.index_range =
      symmetric_range ? qmaps::IndexRange::MinusNToN : qmaps::IndexRange::OneToN;
  return p;
}

std::string join_bigints(const std::vector<qmaps::BigInt>& v) {
  std::string s = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += qmaps::json_quote(v[i].str());
  }
  s += "]";
  return s;
}

}  // namespace

extern "C" {

const char* qm_version(void) { return "1.0.0"; }

const char* qm_last_error_message(void) { return t_last_error.c_str(); }

void qm_string_free(char* s) { std::free(s); }

/* --------------------------------------------------------------------- */

qm_status qm_phase_parse(const char* coeffs_highest_first, qm_phase** out) {
  return guarded([&] {
    require(coeffs_highest_first != nullptr && out != nullptr,
            "qm_phase_parse: NULL argument");
    auto* h = new qm_phase{qmaps::PolynomialPhase::parse(coeffs_highest_first)};
    *out = h;
  });
}

void qm_phase_free(qm_phase* phase) { delete phase; }

int qm_phase_degree(const qm_phase* phase) {
  return phase ? phase->v.degree() : -1;
}

qm_status qm_testfn_parse(const char* spec, qm_testfn** out) {
  return guarded([&] {
    require(spec != nullptr && out != nullptr, "qm_testfn_parse: NULL argument");
    auto* h = new qm_testfn{qmaps::parse_testfn_spec(spec)};
    *out = h;
  });
}

void qm_testfn_free(qm_testfn* f) { delete f; }

qm_status qm_poisson_reference(const qm_testfn* f, double* value) {
  return guarded([&] {
    require(f != nullptr && value != nullptr,
            "qm_poisson_reference: NULL argument");
    *value = qmaps::poisson_reference(f->v);
  });
}

/* --------------------------------------------------------------------- */

qm_status qm_validate_hypotheses(const qm_phase* phase, const char* alpha,
                                 const char* beta, int* curvature_ok,
                                 int* drift_ok, char** details_json) {
  return guarded([&] {
    require(phase != nullptr && curvature_ok != nullptr && drift_ok != nullptr,
            "qm_validate_hypotheses: NULL argument");
    qmaps::SpectrumParams params = make_params(2, alpha, beta, 0);
    qmaps::HypothesisReport rep = qmaps::validate_hypotheses(phase->v, params);
    *curvature_ok = rep.curvature_ok ? 1 : 0;
    *drift_ok = rep.drift_ok ? 1 : 0;
    if (details_json) {
      std::string j = "{\"curvature_ok\":";
      j += rep.curvature_ok ? "true" : "false";
      j += ",\"drift_ok\":";
      j += rep.drift_ok ? "true" : "false";
      j += ",\"details\":" + qmaps::json_quote(rep.details) + "}";
      *details_json = dup_cstring(j);
    }
  });
}

qm_status qm_eigenphases(const qm_phase* phase, long long n, const char* alpha,
                         const char* beta, int symmetric_range, double* out,
                         size_t out_len, size_t* written) {
  return guarded([&] {
    require(phase != nullptr && out != nullptr && written != nullptr,
            "qm_eigenphases: NULL argument");
    qmaps::SpectrumParams params = make_params(n, alpha, beta, symmetric_range);
    qmaps::PhaseSet ps = qmaps::eigenphases(phase->v, params);
    require(out_len >= ps.count(), "qm_eigenphases: output buffer too small");
    for (size_t i = 0; i < ps.count(); ++i) out[i] = ps.phases[i];
    *written = ps.count();
  });
}

qm_status qm_trace_window_compute(const qm_phase* phase, long long n,
                                  const char* alpha, const char* beta,
                                  int symmetric_range, long long window,
                                  qm_trace_window** out) {
  return guarded([&] {
    require(phase != nullptr && out != nullptr,
            "qm_trace_window_compute: NULL argument");
    qmaps::SpectrumParams params = make_params(n, alpha, beta, symmetric_range);
    auto* h = new qm_trace_window{qmaps::trace_window(phase->v, params, window)};
    *out = h;
  });
}

void qm_trace_window_free(qm_trace_window* tw) { delete tw; }

qm_status qm_trace_get(const qm_trace_window* tw, long long ell, double* re,
                       double* im, double* abs2) {
  return guarded([&] {
    require(tw != nullptr, "qm_trace_get: NULL handle");
    require(ell >= -tw->v.window && ell <= tw->v.window,
            "qm_trace_get: ell is outside the computed window");
    std::complex<double> t = tw->v.trace(ell);
    if (re) *re = t.real();
    if (im) *im = t.imag();
    if (abs2) *abs2 = tw->v.value(ell);
  });
}

/* --------------------------------------------------------------------- */

qm_status qm_rho2_local(const qm_phase* phase, const qm_testfn* f, long long n,
                        const char* alpha, const char* beta, int symmetric_range,
                        double* value, double* poisson_ref) {
  return guarded([&] {
    require(phase != nullptr && f != nullptr && value != nullptr,
            "qm_rho2_local: NULL argument");
    qmaps::SpectrumParams params = make_params(n, alpha, beta, symmetric_range);
    qmaps::PcfValue v = qmaps::rho2_local(f->v, phase->v, params);
    *value = v.value;
    if (poisson_ref) *poisson_ref = v.poisson_ref;
  });
}

qm_status qm_rho2_cumulative(const qm_phase* phase, const qm_testfn* f,
                             long long N, const char* alpha, const char* beta,
                             int symmetric_range, double* per_n, double* value) {
  return guarded([&] {
    require(phase != nullptr && f != nullptr && value != nullptr,
            "qm_rho2_cumulative: NULL argument");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::ApproxReal b = parse_real(beta, "beta must not be NULL");
    qmaps::IndexRange range = symmetric_range ? qmaps::IndexRange::MinusNToN
                                              : qmaps::IndexRange::OneToN;
    qmaps::CumulativePcf cum = qmaps::rho2_cumulative(
        f->v, phase->v, a, b, N, /*keep_per_n=*/per_n != nullptr, range);
    if (per_n)
      for (long long i = 0; i < N; ++i)
        per_n[i] = cum.per_n[static_cast<size_t>(i)].value;
    *value = cum.value;
  });
}

qm_status qm_pair_count(const qm_testfn* f, const double* phases, size_t count,
                        long long n, long long m_cutoff, double* value) {
  return guarded([&] {
    require(f != nullptr && phases != nullptr && value != nullptr,
            "qm_pair_count: NULL argument");
    *value = qmaps::pair_count_oracle(f->v, std::span<const double>(phases, count),
                                      n, m_cutoff);
  });
}

/* --------------------------------------------------------------------- */

qm_status qm_cf_report(const char* alpha, size_t max_terms, char** json) {
  return guarded([&] {
    require(json != nullptr, "qm_cf_report: NULL output");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::ContinuedFraction cf = qmaps::ContinuedFraction::from_real(a, max_terms);
    std::string s = "{";
    s += "\"terms\":" + std::to_string(cf.terms());
    s += ",\"truncated\":" + std::string(cf.truncated ? "true" : "false");
    s += ",\"quotients\":" + join_bigints(cf.a);
    s += ",\"p\":" + join_bigints(cf.p);
    s += ",\"q\":" + join_bigints(cf.q);
    s += ",\"khinchin_levy\":[";
    for (size_t m = 1; m < cf.terms(); ++m) {
      if (m > 1) s += ",";
      s += qmaps::format_double(qmaps::khinchin_levy_stat(cf, m));
    }
    s += "]";
    if (cf.terms() >= 2) {
      qmaps::QuotientGrowthReport g = qmaps::quotient_growth_check(cf);
      s += ",\"growth\":{\"tail_statistic\":" +
           qmaps::format_double(g.tail_statistic) +
           ",\"overall_max\":" + qmaps::format_double(g.overall_max) +
           ",\"overall_argmax\":" + std::to_string(g.overall_argmax) +
           ",\"epsilon\":" + qmaps::format_double(g.epsilon) +
           ",\"flagged\":" + (g.flagged ? "true" : "false") + "}";
    }
    s += "}";
    *json = dup_cstring(s);
  });
}

qm_status qm_dirichlet(const char* alpha, const char* Q, char** json) {
  return guarded([&] {
    require(json != nullptr && Q != nullptr, "qm_dirichlet: NULL argument");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::BigInt q_limit;
    try {
      q_limit = qmaps::parse_base10_int(std::string(Q));
    } catch (const std::exception&) {
      throw qmaps::Error(qmaps::ErrorCode::InvalidArgument,
                         "qm_dirichlet: Q must be a decimal integer");
    }
    qmaps::RationalApprox ap = qmaps::dirichlet_approx(a, q_limit);
    std::string s = "{";
    s += "\"a\":" + qmaps::json_quote(ap.a.str());
    s += ",\"q\":" + qmaps::json_quote(ap.q.str());
    s += ",\"remainder_bound\":" + qmaps::format_double(ap.remainder_bound);
    s += ",\"reduced\":" + std::string(ap.reduced ? "true" : "false");
    s += ",\"convergent_index\":" + std::to_string(ap.convergent_index);
    s += "}";
    *json = dup_cstring(s);
  });
}

qm_status qm_good_convergent(const char* alpha, long long n, int k, double r,
                             double eps, char** json) {
  return guarded([&] {
    require(json != nullptr, "qm_good_convergent: NULL output");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::ContinuedFraction cf = qmaps::ContinuedFraction::from_real(a, 256);
    qmaps::GoodConvergent gc = qmaps::find_good_convergent(cf, n, k, r, eps);
    std::string s = "{";
    s += "\"m\":" + std::to_string(gc.m);
    s += ",\"p\":" + qmaps::json_quote(gc.p.str());
    s += ",\"q\":" + qmaps::json_quote(gc.q.str());
    s += ",\"g\":" + qmaps::json_quote(gc.g.str());
    s += "}";
    *json = dup_cstring(s);
  });
}

/* --------------------------------------------------------------------- */

qm_status qm_quadratic_chain(const qm_phase* phase, const char* alpha,
                             const char* beta, long long n, double r, double eps,
                             char** json) {
  return guarded([&] {
    require(phase != nullptr && json != nullptr,
            "qm_quadratic_chain: NULL argument");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::ApproxReal b = parse_real(beta, "beta must not be NULL");
    qmaps::ChainResult cr = qmaps::quadratic_bound_chain(phase->v, a, b, n, r, eps);
    *json = dup_cstring(cr.to_json());
  });
}

qm_status qm_general_chain(const qm_phase* phase, const char* alpha,
                           const char* beta, long long n, double r, double eps,
                           char** json) {
  return guarded([&] {
    require(phase != nullptr && json != nullptr,
            "qm_general_chain: NULL argument");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::ApproxReal b = parse_real(beta, "beta must not be NULL");
    qmaps::ChainResult cr = qmaps::general_bound_chain(phase->v, a, b, n, r, eps);
    *json = dup_cstring(cr.to_json());
  });
}

qm_status qm_weyl_inequality(const qm_phase* phase, long long n, long long ell,
                             int j, char** json) {
  return guarded([&] {
    require(phase != nullptr && json != nullptr,
            "qm_weyl_inequality: NULL argument");
    qmaps::BoundReport rep = qmaps::weyl_inequality_check(phase->v, n, ell, j);
    *json = dup_cstring(rep.to_json());
  });
}

/* --------------------------------------------------------------------- */

qm_status qm_sweep_run(const char* config_json, char** records_csv,
                       char** summary_json) {
  return guarded([&] {
    require(config_json != nullptr, "qm_sweep_run: NULL config");
    qmaps::SweepConfig config = qmaps::parse_sweep_config(config_json);
    qmaps::SweepResult result = qmaps::run_sweep(config);
    if (records_csv) *records_csv = dup_cstring(qmaps::sweep_records_csv(result));
    if (summary_json)
      *summary_json = dup_cstring(qmaps::sweep_summary_json(result));
  });
}

qm_status qm_gap_study(const qm_phase* phase, const char* alpha, const char* beta,
                       long long m_lo, long long m_hi, const char* testfn_spec,
                       char** records_csv, char** summary_json) {
  return guarded([&] {
    require(phase != nullptr, "qm_gap_study: NULL phase");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::ApproxReal b = parse_real(beta, "beta must not be NULL");
    qmaps::TestFunction f =
        qmaps::parse_testfn_spec(testfn_spec ? testfn_spec : "fejer");
    qmaps::GapStudy study = qmaps::gap_study(phase->v, a, b, m_lo, m_hi, f);
    if (records_csv) *records_csv = dup_cstring(qmaps::gap_records_csv(study));
    if (summary_json) *summary_json = dup_cstring(qmaps::gap_summary_json(study));
  });
}

qm_status qm_exponent_study(const qm_phase* phase, const char* alpha,
                            const char* beta, const long long* n_grid,
                            size_t n_count, const char* testfn_spec, char** csv,
                            char** json) {
  return guarded([&] {
    require(phase != nullptr && n_grid != nullptr && n_count > 0,
            "qm_exponent_study: NULL argument");
    qmaps::ApproxReal a = parse_real(alpha, "alpha must not be NULL");
    qmaps::ApproxReal b = parse_real(beta, "beta must not be NULL");
    qmaps::TestFunction f =
        qmaps::parse_testfn_spec(testfn_spec ? testfn_spec : "fejer");
    std::vector<long long> grid(n_grid, n_grid + n_count);
    qmaps::ExponentStudy study = qmaps::exponent_study(phase->v, a, b, grid, f);
    if (csv) *csv = dup_cstring(qmaps::exponent_csv(study));
    if (json) *json = dup_cstring(qmaps::exponent_json(study));
  });
}

}  // extern "C"
