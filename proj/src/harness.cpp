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

#include "qmaps/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"  // vendored nlohmann/json; used for config input only
#include "qmaps/io.hpp"

namespace qmaps {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One 53-bit draw, kept exact so downstream phase reduction stays rational.
Rational draw_unit_rational(std::mt19937_64& eng) {
  std::uint64_t mant = eng() >> 11;
  return Rational(BigInt(mant), pow_big(BigInt(2), 53));
}

ApproxReal sample_coordinate(std::mt19937_64& eng, const Rational& scale,
                             bool symmetric) {
  Rational u = draw_unit_rational(eng);
  Rational val = symmetric ? scale * (Rational(2) * u - Rational(1)) : scale * u;
  return ApproxReal::exact(val);
}

void reject_unknown_keys(const nlohmann::json& j,
                         const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw Error(ErrorCode::InvalidArgument,
                  "config: unknown key '" + item.key() + "' in " + where);
}

}  // namespace

TestFunction parse_testfn_spec(const std::string& spec) {
  if (spec == "fejer") return TestFunction::fejer();
  if (spec.rfind("triangle:", 0) == 0) {
    int p = 0;
    try {
      p = std::stoi(spec.substr(9));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument,
                  "testfn: bad power in '" + spec + "'");
    }
    return TestFunction::triangle_power(p);
  }
  if (spec.rfind("table:", 0) == 0)
    return TestFunction::from_table_file(spec.substr(6));
  throw Error(ErrorCode::UnsupportedKind,
              "testfn: expected 'fejer', 'triangle:<p>' or 'table:<path>', got '" +
                  spec + "'");
}

SweepConfig parse_sweep_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Io, std::string("config: ") + e.what());
  }
  if (!j.is_object())
    throw Error(ErrorCode::InvalidArgument, "config: top level must be an object");
  reject_unknown_keys(j,
                      {"phi", "testfn", "domain", "samples", "N_grid",
                       "subsequence", "seed", "workers", "index_range", "alpha",
                       "beta"},
                      "top level");
  SweepConfig c;
  try {
    if (j.contains("phi")) c.phase = PolynomialPhase::parse(j.at("phi").get<std::string>());
    if (j.contains("testfn"))
      c.testfn = parse_testfn_spec(j.at("testfn").get<std::string>());
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      if (!d.is_object())
        throw Error(ErrorCode::InvalidArgument, "config: domain must be an object");
      reject_unknown_keys(d, {"scale", "symmetric"}, "domain");
      if (d.contains("scale"))
        c.domain_scale = parse_rational(d.at("scale").get<std::string>());
      if (d.contains("symmetric")) c.domain_symmetric = d.at("symmetric").get<bool>();
      if (c.domain_scale <= 0)
        throw Error(ErrorCode::InvalidArgument, "config: domain scale must be > 0");
    }
    if (j.contains("samples")) c.samples = j.at("samples").get<long long>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    if (j.contains("N_grid") && j.contains("subsequence"))
      throw Error(ErrorCode::InvalidArgument,
                  "config: give N_grid or subsequence, not both");
    if (j.contains("N_grid")) {
      c.N_grid.clear();
      for (const auto& v : j.at("N_grid")) c.N_grid.push_back(v.get<long long>());
    }
    if (j.contains("subsequence")) {
      const auto& s = j.at("subsequence");
      reject_unknown_keys(s, {"m_lo", "m_hi"}, "subsequence");
      long long m_lo = s.at("m_lo").get<long long>();
      long long m_hi = s.at("m_hi").get<long long>();
      if (m_lo < 2 || m_hi < m_lo)
        throw Error(ErrorCode::InvalidArgument,
                    "config: subsequence needs 2 <= m_lo <= m_hi");
      c.N_grid.clear();
      for (long long m = m_lo; m <= m_hi; ++m) {
        long long N = subsequence_value(m);
        if (N >= 1 && (c.N_grid.empty() || c.N_grid.back() != N))
          c.N_grid.push_back(N);
      }
      if (c.N_grid.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "config: subsequence range yields no N >= 1");
    }
    if (j.contains("index_range")) {
      std::string ir = j.at("index_range").get<std::string>();
      if (ir == "one_to_n")
        c.index_range = IndexRange::OneToN;
      else if (ir == "symmetric")
        c.index_range = IndexRange::MinusNToN;
      else
        throw Error(ErrorCode::InvalidArgument,
                    "config: index_range must be 'one_to_n' or 'symmetric'");
    }
    if (j.contains("alpha") && !j.at("alpha").is_null())
      c.forced_alpha = ApproxReal::parse(j.at("alpha").get<std::string>());
    if (j.contains("beta") && !j.at("beta").is_null())
      c.forced_beta = ApproxReal::parse(j.at("beta").get<std::string>());
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

namespace {

void validate_sweep_config(const SweepConfig& c) {
  if (c.samples < 1)
    throw Error(ErrorCode::InvalidArgument, "sweep: samples must be >= 1");
  if (c.N_grid.empty())
    throw Error(ErrorCode::InvalidArgument, "sweep: N_grid must be nonempty");
  for (size_t i = 0; i < c.N_grid.size(); ++i) {
    if (c.N_grid[i] < 1)
      throw Error(ErrorCode::InvalidArgument, "sweep: N_grid entries must be >= 1");
    if (i > 0 && c.N_grid[i] <= c.N_grid[i - 1])
      throw Error(ErrorCode::InvalidArgument,
                  "sweep: N_grid must be strictly increasing");
  }
  if (c.phase.degree() < 2)
    throw Error(ErrorCode::DegeneratePolynomial,
                "sweep: phase polynomial must have degree >= 2");
}

SweepRecord run_one_sample(const SweepConfig& config, long long index,
                           double poisson_ref) {
  SweepRecord rec;
  rec.index = index;
  std::uint64_t s = splitmix64(
      config.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(index + 1)));
  std::mt19937_64 eng(s);
  ApproxReal a = config.forced_alpha
                     ? *config.forced_alpha
                     : sample_coordinate(eng, config.domain_scale,
                                         config.domain_symmetric);
  ApproxReal b = config.forced_beta
                     ? *config.forced_beta
                     : sample_coordinate(eng, config.domain_scale,
                                         config.domain_symmetric);
  rec.alpha = a.to_double();
  rec.beta = b.to_double();
  rec.alpha_exact = a.is_exact() ? a.center.str() : ("~" + format_double(rec.alpha));
  rec.beta_exact = b.is_exact() ? b.center.str() : ("~" + format_double(rec.beta));
  try {
    long long maxN = config.N_grid.back();
    CumulativePcf cum = rho2_cumulative(config.testfn, config.phase, a, b, maxN,
                                        /*keep_per_n=*/true, config.index_range);
    CumulativeAccumulator acc;
    size_t gi = 0;
    for (long long n = 1; n <= maxN && gi < config.N_grid.size(); ++n) {
      acc.add(cum.per_n[static_cast<size_t>(n - 1)].value);
      if (n == config.N_grid[gi]) {
        double mean = acc.mean();
        rec.rho_bar.push_back(mean);
        rec.abs_dev.push_back(std::abs(mean - poisson_ref));
        ++gi;
      }
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
    rec.rho_bar.assign(config.N_grid.size(), 0.0);
    rec.abs_dev.assign(config.N_grid.size(), 0.0);
  }
  return rec;
}

SweepSummary summarize(const SweepConfig& config,
                       const std::vector<SweepRecord>& records,
                       double poisson_ref) {
  SweepSummary sm;
  sm.N_grid = config.N_grid;
  sm.poisson_ref = poisson_ref;
  const size_t G = config.N_grid.size();
  sm.mean_sq_dev.assign(G, 0.0);
  sm.se_sq_dev.assign(G, 0.0);
  sm.median_abs_dev.assign(G, 0.0);
  long long improved = 0;
  for (const auto& r : records) {
    if (r.ok)
      ++sm.samples_ok;
    else
      ++sm.samples_failed;
  }
  if (sm.samples_ok == 0) return sm;
  for (size_t g = 0; g < G; ++g) {
    KahanSum sum, sumsq;
    std::vector<double> devs;
    devs.reserve(static_cast<size_t>(sm.samples_ok));
    for (const auto& r : records) {
      if (!r.ok) continue;
      double d2 = r.abs_dev[g] * r.abs_dev[g];
      sum.add(d2);
      sumsq.add(d2 * d2);
      devs.push_back(r.abs_dev[g]);
    }
    double cnt = static_cast<double>(sm.samples_ok);
    double mean = sum.value() / cnt;
    sm.mean_sq_dev[g] = mean;
    if (sm.samples_ok > 1) {
      double var = std::max(0.0, sumsq.value() / cnt - mean * mean) * cnt / (cnt - 1.0);
      sm.se_sq_dev[g] = std::sqrt(var / cnt);
    }
    std::sort(devs.begin(), devs.end());
    size_t half = devs.size() / 2;
    sm.median_abs_dev[g] = devs.size() % 2 ? devs[half]
                                           : 0.5 * (devs[half - 1] + devs[half]);
  }
  for (const auto& r : records)
    if (r.ok && r.abs_dev.back() < r.abs_dev.front()) ++improved;
  sm.improved_fraction =
      static_cast<double>(improved) / static_cast<double>(sm.samples_ok);
  std::vector<double> lx, lb, ly;
  for (size_t g = 0; g < G; ++g) {
    if (sm.mean_sq_dev[g] <= 0) continue;
    double Nd = static_cast<double>(config.N_grid[g]);
    lx.push_back(std::log(Nd));
    lb.push_back(std::log(std::log(Nd) * std::log(Nd) / Nd));
    ly.push_back(std::log(sm.mean_sq_dev[g]));
  }
  if (lx.size() >= 2) {
    sm.slope_vs_logN = linear_fit(lx, ly).slope;
    sm.slope_vs_bound = linear_fit(lb, ly).slope;
  }
  return sm;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  validate_sweep_config(config);
  SweepResult out;
  out.config = config;
  double ref = poisson_reference(config.testfn);
  out.records.resize(static_cast<size_t>(config.samples));
  int workers = std::max(1, config.workers);
  workers = static_cast<int>(
      std::min<long long>(workers, config.samples));
  std::atomic<long long> next{0};
  auto work = [&]() {
    for (;;) {
      long long i = next.fetch_add(1);
      if (i >= config.samples) break;
      out.records[static_cast<size_t>(i)] = run_one_sample(config, i, ref);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  out.summary = summarize(config, out.records, ref);
  return out;
}

std::string sweep_records_csv(const SweepResult& result) {
  std::vector<std::string> header = {"sample", "alpha", "beta", "alpha_exact",
                                     "beta_exact", "ok"};
  for (long long N : result.config.N_grid)
    header.push_back("rho_bar_" + std::to_string(N));
  for (long long N : result.config.N_grid)
    header.push_back("abs_dev_" + std::to_string(N));
  header.push_back("error");
  CsvWriter csv(header);
  for (const auto& r : result.records) {
    std::vector<std::string> row = {std::to_string(r.index),
                                    format_double(r.alpha),
                                    format_double(r.beta),
                                    r.alpha_exact,
                                    r.beta_exact,
                                    r.ok ? "1" : "0"};
    for (double v : r.rho_bar) row.push_back(format_double(v));
    if (r.rho_bar.empty())
      for (size_t i = 0; i < result.config.N_grid.size(); ++i) row.push_back("");
    for (double v : r.abs_dev) row.push_back(format_double(v));
    if (r.abs_dev.empty())
      for (size_t i = 0; i < result.config.N_grid.size(); ++i) row.push_back("");
    row.push_back(r.error);
    csv.add_row(row);
  }
  return csv.text();
}

std::string sweep_summary_json(const SweepResult& result) {
  const SweepSummary& sm = result.summary;
  std::string s = "{";
  s += "\"poisson_ref\":" + format_double(sm.poisson_ref);
  s += ",\"samples_ok\":" + std::to_string(sm.samples_ok);
  s += ",\"samples_failed\":" + std::to_string(sm.samples_failed);
  s += ",\"N_grid\":[";
  for (size_t i = 0; i < sm.N_grid.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(sm.N_grid[i]);
  }
  s += "],\"mean_sq_dev\":[";
  for (size_t i = 0; i < sm.mean_sq_dev.size(); ++i) {
    if (i) s += ",";
    s += format_double(sm.mean_sq_dev[i]);
  }
  s += "],\"se_sq_dev\":[";
  for (size_t i = 0; i < sm.se_sq_dev.size(); ++i) {
    if (i) s += ",";
    s += format_double(sm.se_sq_dev[i]);
  }
  s += "],\"median_abs_dev\":[";
  for (size_t i = 0; i < sm.median_abs_dev.size(); ++i) {
    if (i) s += ",";
    s += format_double(sm.median_abs_dev[i]);
  }
  s += "],\"slope_vs_logN\":" + format_double(sm.slope_vs_logN);
  s += ",\"slope_vs_bound\":" + format_double(sm.slope_vs_bound);
  s += ",\"improved_fraction\":" + format_double(sm.improved_fraction);
  s += "}";
  return s;
}

// ---------------------------------------------------------------------------
// Subsequence and gaps.
// ---------------------------------------------------------------------------

long long subsequence_value(long long m) {
  if (m < 2)
    throw Error(ErrorCode::InvalidArgument, "subsequence_value: m must be >= 2");
  Real50 lm = boost::multiprecision::log(Real50(m));
  Real50 v = Real50(m) * lm * lm * lm * lm;
  return boost::multiprecision::floor(v).convert_to<long long>();
}

GapStudy gap_study(const PolynomialPhase& phase, const ApproxReal& alpha,
                   const ApproxReal& beta, long long m_lo, long long m_hi,
                   const TestFunction& f, IndexRange range) {
  if (m_lo < 2 || m_hi <= m_lo)
    throw Error(ErrorCode::InvalidArgument, "gap_study: need 2 <= m_lo < m_hi");
  GapStudy out;
  out.poisson_ref = poisson_reference(f);
  const long long N_max = subsequence_value(m_hi);
  if (N_max < 1)
    throw Error(ErrorCode::InvalidArgument,
                "gap_study: subsequence value at m_hi is below 1");
  CumulativePcf cum = rho2_cumulative(f, phase, alpha, beta, N_max,
                                      /*keep_per_n=*/true, range);
  // Prefix means rhobar_n (rhobar_0 = 0) and the range maximum of the local
  // statistic.
  std::vector<double> rhobar(static_cast<size_t>(N_max) + 1, 0.0);
  {
    CumulativeAccumulator acc;
    double mx = 0.0;
    for (long long n = 1; n <= N_max; ++n) {
      double v = cum.per_n[static_cast<size_t>(n - 1)].value;
      acc.add(v);
      rhobar[static_cast<size_t>(n)] = acc.mean();
      mx = std::max(mx, v);
    }
    out.max_rho2 = mx;
  }
  bool all_ok = true;
  for (long long m = m_lo; m < m_hi; ++m) {
    GapRecord rec;
    rec.m = m;
    rec.N_m = subsequence_value(m);
    rec.N_m1 = subsequence_value(m + 1);
    double base = rhobar[static_cast<size_t>(rec.N_m)];
    double base_sum = base * static_cast<double>(rec.N_m);  // rhobar_0 = 0
    KahanSum window;  // independent accumulation of the new local values
    rec.arg_M = rec.N_m1;
    for (long long M = rec.N_m + 1; M <= rec.N_m1; ++M) {
      double local = cum.per_n[static_cast<size_t>(M - 1)].value;
      window.add(local);
      double direct = rhobar[static_cast<size_t>(M)] - base;
      double decomposed =
          (base_sum + window.value()) / static_cast<double>(M) - base;
      double scale = std::max(1.0, std::abs(rhobar[static_cast<size_t>(M)]));
      rec.max_identity_gap =
          std::max(rec.max_identity_gap,
                   std::abs(direct - decomposed) / scale);
      double gap = std::abs(direct);
      if (gap > rec.max_gap) {
        rec.max_gap = gap;
        rec.arg_M = M;
      }
    }
    rec.explicit_bound = 2.0 *
                         static_cast<double>(rec.N_m1 - rec.N_m) /
                         static_cast<double>(rec.N_m1) * out.max_rho2;
    double lm = std::log(static_cast<double>(m));
    rec.shape_bound = lm * lm * lm * lm * out.max_rho2 /
                      static_cast<double>(rec.N_m1);
    if (rec.max_identity_gap > 1e-9) all_ok = false;
    std::ostringstream en;
    en << "m=" << m << " window (" << rec.N_m << "," << rec.N_m1
       << "]; telescoping bound 2(M-N)/M * max rho";
    out.reports.push_back(make_explicit_report("subsequence-gap", rec.max_gap,
                                               rec.explicit_bound, en.str()));
    std::ostringstream sn;
    sn << "m=" << m << "; (log m)^4 * max rho / N_{m+1}";
    out.reports.push_back(make_fitted_report("subsequence-gap-shape", rec.max_gap,
                                             rec.shape_bound, sn.str()));
    out.records.push_back(rec);
  }
  out.identities_ok = all_ok;
  return out;
}

std::string gap_records_csv(const GapStudy& study) {
  CsvWriter csv({"m", "N_m", "N_m1", "arg_M", "max_gap", "explicit_bound",
                 "shape_bound", "max_identity_gap"});
  for (const auto& r : study.records) {
    csv.add_row({std::to_string(r.m), std::to_string(r.N_m),
                 std::to_string(r.N_m1), std::to_string(r.arg_M),
                 format_double(r.max_gap), format_double(r.explicit_bound),
                 format_double(r.shape_bound),
                 format_double(r.max_identity_gap)});
  }
  return csv.text();
}

std::string gap_summary_json(const GapStudy& study) {
  std::string s = "{";
  s += "\"poisson_ref\":" + format_double(study.poisson_ref);
  s += ",\"max_rho2\":" + format_double(study.max_rho2);
  s += ",\"identities_ok\":" + std::string(study.identities_ok ? "true" : "false");
  s += ",\"reports\":[";
  for (size_t i = 0; i < study.reports.size(); ++i) {
    if (i) s += ",";
    s += study.reports[i].to_json();
  }
  s += "]}";
  return s;
}

// ---------------------------------------------------------------------------
// Exponent fits.
// ---------------------------------------------------------------------------

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorCode::InvalidArgument,
                "linear_fit: need two aligned samples at least");
  const double n = static_cast<double>(x.size());
  KahanSum sx, sy;
  for (double v : x) sx.add(v);
  for (double v : y) sy.add(v);
  double mx = sx.value() / n;
  double my = sy.value() / n;
  KahanSum sxx, sxy, syy;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx;
    double dy = y[i] - my;
    sxx.add(dx * dx);
    sxy.add(dx * dy);
    syy.add(dy * dy);
  }
  if (sxx.value() <= 0)
    throw Error(ErrorCode::InvalidArgument, "linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy.value() / sxx.value();
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy.value() > 0
                      ? (sxy.value() * sxy.value()) / (sxx.value() * syy.value())
                      : 1.0;
  return fit;
}

ExponentStudy exponent_study(const PolynomialPhase& phase, const ApproxReal& alpha,
                             const ApproxReal& beta,
                             const std::vector<long long>& n_grid,
                             const TestFunction& f, IndexRange range) {
  if (n_grid.size() < 2)
    throw Error(ErrorCode::InvalidArgument,
                "exponent_study: need at least two grid points");
  ExponentStudy out;
  out.poisson_ref = poisson_reference(f);
  std::vector<double> lx, ly;
  for (long long n : n_grid) {
    if (n < 1)
      throw Error(ErrorCode::InvalidArgument, "exponent_study: n must be >= 1");
    SpectrumParams params;
    params.n = n;
    params.alpha = alpha;
    params.beta = beta;
    params.index_range = range;
    PcfValue v = rho2_local(f, phase, params);
    out.points.push_back({n, v.value});
    if (v.value > 0) {
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(v.value));
    }
  }
  if (lx.size() < 2)
    throw Error(ErrorCode::InvalidArgument,
                "exponent_study: fewer than two positive local values to fit");
  out.fit = linear_fit(lx, ly);
  return out;
}

std::string exponent_csv(const ExponentStudy& study) {
  CsvWriter csv({"n", "rho2", "log_n", "log_rho2"});
  for (const auto& p : study.points) {
    csv.add_row({std::to_string(p.n), format_double(p.rho2),
                 format_double(std::log(static_cast<double>(p.n))),
                 format_double(p.rho2 > 0 ? std::log(p.rho2) : 0.0)});
  }
  return csv.text();
}

std::string exponent_json(const ExponentStudy& study) {
  std::string s = "{";
  s += "\"poisson_ref\":" + format_double(study.poisson_ref);
  s += ",\"slope\":" + format_double(study.fit.slope);
  s += ",\"intercept\":" + format_double(study.fit.intercept);
  s += ",\"r_squared\":" + format_double(study.fit.r_squared);
  s += ",\"points\":[";
  for (size_t i = 0; i < study.points.size(); ++i) {
    if (i) s += ",";
    s += "{\"n\":" + std::to_string(study.points[i].n) +
         ",\"rho2\":" + format_double(study.points[i].rho2) + "}";
  }
  s += "]}";
  return s;
}

}  // namespace qmaps
