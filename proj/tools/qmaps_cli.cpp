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

// Command-line front end; talks to the library exclusively through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qmaps/qmaps.h"

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  qm_string_free(s);
  return out;
}

int fail(qm_status rc) {
  std::cerr << "error: " << qm_last_error_message() << "\n";
  return static_cast<int>(rc);
}

int emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open '" << out_path << "' for writing\n";
    return static_cast<int>(QM_IO);
  }
  f << text;
  return f ? 0 : static_cast<int>(QM_IO);
}

int write_into_dir(const std::string& dir, const std::string& name,
                   const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create directory '" << dir << "'\n";
    return static_cast<int>(QM_IO);
  }
  return emit(text, dir + "/" + name);
}

struct Phase {
  qm_phase* h = nullptr;
  ~Phase() { qm_phase_free(h); }
  int parse(const std::string& coeffs) {
    qm_status rc = qm_phase_parse(coeffs.c_str(), &h);
    return rc == QM_OK ? 0 : fail(rc);
  }
};

struct TestFn {
  qm_testfn* h = nullptr;
  ~TestFn() { qm_testfn_free(h); }
  int parse(const std::string& spec) {
    qm_status rc = qm_testfn_parse(spec.c_str(), &h);
    return rc == QM_OK ? 0 : fail(rc);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pair statistics of eigenphase spectra of quantized "
               "integrable maps"};
  app.require_subcommand(1);

  // Shared option storage.
  std::string phi = "1,0,0";
  std::string alpha = "0";
  std::string beta = "0";
  std::string testfn = "fejer";
  std::string out_path;
  std::string out_dir;
  bool symmetric = false;

  // ----- validate ---------------------------------------------------------
  auto* validate = app.add_subcommand(
      "validate", "check curvature and drift hypotheses of the phase");
  validate->add_option("--phi", phi, "phase polynomial, highest-first")
      ->capture_default_str();
  validate->add_option("--alpha", alpha)->capture_default_str();
  validate->add_option("--beta", beta)->capture_default_str();
  validate->add_option("-o,--out", out_path, "output file (default stdout)");

  // ----- spectrum ---------------------------------------------------------
  auto* spectrum = app.add_subcommand(
      "spectrum", "eigenphases or the trace window as CSV");
  long long spec_n = 64;
  long long window = -1;
  bool phases_mode = false;
  spectrum->add_option("--phi", phi)->capture_default_str();
  spectrum->add_option("-n,--n", spec_n, "dimension")->capture_default_str();
  spectrum->add_option("--alpha", alpha)->capture_default_str();
  spectrum->add_option("--beta", beta)->capture_default_str();
  spectrum->add_flag("--symmetric", symmetric, "index k = -n..n instead of 1..n");
  spectrum->add_option("--window", window,
                       "trace window half-width (default n)");
  spectrum->add_flag("--phases", phases_mode,
                     "emit the eigenphases instead of the traces");
  spectrum->add_option("-o,--out", out_path);

  // ----- pcf --------------------------------------------------------------
  auto* pcf = app.add_subcommand(
      "pcf", "local pair statistic and its cumulative average, as CSV");
  long long pcf_N = 256;
  pcf->add_option("--phi", phi)->capture_default_str();
  pcf->add_option("-N,--N", pcf_N, "largest dimension")->capture_default_str();
  pcf->add_option("--alpha", alpha)->capture_default_str();
  pcf->add_option("--beta", beta)->capture_default_str();
  pcf->add_option("--testfn", testfn)->capture_default_str();
  pcf->add_flag("--symmetric", symmetric);
  pcf->add_option("-o,--out", out_path);

  // ----- cf ---------------------------------------------------------------
  auto* cf = app.add_subcommand(
      "cf", "continued-fraction expansion, growth and approximation reports");
  std::size_t max_terms = 64;
  std::string dirichlet_Q;
  long long cf_n = 0;
  int cf_k = 3;
  double cf_r = 0.5;
  double cf_eps = 0.1;
  cf->add_option("--alpha", alpha)->capture_default_str();
  cf->add_option("--max-terms", max_terms)->capture_default_str();
  cf->add_option("--Q", dirichlet_Q,
                 "also report the best approximation with q <= Q");
  cf->add_option("--n", cf_n,
                 "also search a convergent with numerator in [n^(r-eps), n^r] "
                 "and small gcd with n^(k-1)");
  cf->add_option("--k", cf_k)->capture_default_str();
  cf->add_option("--r", cf_r)->capture_default_str();
  cf->add_option("--eps", cf_eps)->capture_default_str();
  cf->add_option("-o,--out", out_path);

  // ----- weyl -------------------------------------------------------------
  auto* weyl = app.add_subcommand(
      "weyl", "estimate pipeline (one report per inequality) or the "
              "differencing inequality, as JSON");
  long long weyl_n = 128;
  double weyl_r = -1.0;
  double weyl_eps = 0.1;
  long long weyl_ell = 1;
  int weyl_j = 0;
  weyl->add_option("--phi", phi)->capture_default_str();
  weyl->add_option("-n,--n", weyl_n)->capture_default_str();
  weyl->add_option("--alpha", alpha)->capture_default_str();
  weyl->add_option("--beta", beta)->capture_default_str();
  weyl->add_option("--r", weyl_r,
                   "approximation exponent (default 1.5 for degree 2, 0.5 "
                   "otherwise)");
  weyl->add_option("--eps", weyl_eps)->capture_default_str();
  weyl->add_option("--j", weyl_j,
                   "run only the order-j differencing inequality instead");
  weyl->add_option("--ell", weyl_ell, "frequency for the inequality mode")
      ->capture_default_str();
  weyl->add_option("-o,--out", out_path);

  // ----- sweep ------------------------------------------------------------
  auto* sweep = app.add_subcommand(
      "sweep", "Monte-Carlo sweep over (alpha, beta) from a JSON config");
  std::string config_path;
  std::string config_inline;
  sweep->add_option("--config", config_path, "config file (JSON)");
  sweep->add_option("--config-json", config_inline, "inline JSON config");
  sweep->add_option("--out-dir", out_dir,
                    "write records.csv and summary.json here");

  // ----- gaps -------------------------------------------------------------
  auto* gaps = app.add_subcommand(
      "gaps", "largest cumulative-average movement between subsequence points");
  long long m_lo = 4, m_hi = 8;
  gaps->add_option("--phi", phi)->capture_default_str();
  gaps->add_option("--alpha", alpha)->capture_default_str();
  gaps->add_option("--beta", beta)->capture_default_str();
  gaps->add_option("--m-lo", m_lo)->capture_default_str();
  gaps->add_option("--m-hi", m_hi)->capture_default_str();
  gaps->add_option("--testfn", testfn)->capture_default_str();
  gaps->add_option("--out-dir", out_dir, "write gaps.csv and gaps.json here");

  // ----- exponents --------------------------------------------------------
  auto* exponents = app.add_subcommand(
      "exponents", "least-squares growth exponent of the local statistic");
  std::vector<long long> n_grid = {128, 256, 512, 1024};
  exponents->add_option("--phi", phi)->capture_default_str();
  exponents->add_option("--alpha", alpha)->capture_default_str();
  exponents->add_option("--beta", beta)->capture_default_str();
  exponents
      ->add_option("--n-grid", n_grid, "dimensions to fit over (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  exponents->add_option("--testfn", testfn)->capture_default_str();
  exponents->add_option("--out-dir", out_dir,
                        "write exponents.csv and exponents.json here");

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) {
    Phase ph;
    if (int rc = ph.parse(phi)) return rc;
    int curvature = 0, drift = 0;
    char* details = nullptr;
    qm_status rc = qm_validate_hypotheses(ph.h, alpha.c_str(), beta.c_str(),
                                          &curvature, &drift, &details);
    if (rc != QM_OK) return fail(rc);
    return emit(take(details), out_path);
  }

  if (spectrum->parsed()) {
    Phase ph;
    if (int rc = ph.parse(phi)) return rc;
    if (phases_mode) {
      std::size_t cap = static_cast<std::size_t>(symmetric ? 2 * spec_n + 1 : spec_n);
      std::vector<double> buf(cap);
      std::size_t written = 0;
      qm_status rc = qm_eigenphases(ph.h, spec_n, alpha.c_str(), beta.c_str(),
                                    symmetric ? 1 : 0, buf.data(), buf.size(),
                                    &written);
      if (rc != QM_OK) return fail(rc);
      std::ostringstream csv;
      csv << "k,theta\n";
      long long k0 = symmetric ? -spec_n : 1;
      for (std::size_t i = 0; i < written; ++i)
        csv << (k0 + static_cast<long long>(i)) << "," << fmt(buf[i]) << "\n";
      return emit(csv.str(), out_path);
    }
    long long w = window < 0 ? spec_n : window;
    qm_trace_window* tw = nullptr;
    qm_status rc = qm_trace_window_compute(ph.h, spec_n, alpha.c_str(),
                                           beta.c_str(), symmetric ? 1 : 0, w, &tw);
    if (rc != QM_OK) return fail(rc);
    std::ostringstream csv;
    csv << "ell,re_trace,im_trace,abs2\n";
    for (long long ell = -w; ell <= w; ++ell) {
      double re = 0, im = 0, abs2 = 0;
      rc = qm_trace_get(tw, ell, &re, &im, &abs2);
      if (rc != QM_OK) {
        qm_trace_window_free(tw);
        return fail(rc);
      }
      csv << ell << "," << fmt(re) << "," << fmt(im) << "," << fmt(abs2) << "\n";
    }
    qm_trace_window_free(tw);
    return emit(csv.str(), out_path);
  }

  if (pcf->parsed()) {
    Phase ph;
    if (int rc = ph.parse(phi)) return rc;
    TestFn tf;
    if (int rc = tf.parse(testfn)) return rc;
    double ref = 0;
    qm_status rc = qm_poisson_reference(tf.h, &ref);
    if (rc != QM_OK) return fail(rc);
    std::vector<double> per_n(static_cast<std::size_t>(pcf_N));
    double value = 0;
    rc = qm_rho2_cumulative(ph.h, tf.h, pcf_N, alpha.c_str(), beta.c_str(),
                            symmetric ? 1 : 0, per_n.data(), &value);
    if (rc != QM_OK) return fail(rc);
    std::ostringstream csv;
    csv << "n,rho2,rho_bar,poisson_ref,abs_dev\n";
    double sum = 0.0;
    for (long long n = 1; n <= pcf_N; ++n) {
      double local = per_n[static_cast<std::size_t>(n - 1)];
      sum += local;
      double bar = sum / static_cast<double>(n);
      csv << n << "," << fmt(local) << "," << fmt(bar) << "," << fmt(ref) << ","
          << fmt(bar > ref ? bar - ref : ref - bar) << "\n";
    }
    return emit(csv.str(), out_path);
  }

  if (cf->parsed()) {
    char* body = nullptr;
    qm_status rc = qm_cf_report(alpha.c_str(), max_terms, &body);
    if (rc != QM_OK) return fail(rc);
    std::string json = "{\"expansion\":" + take(body);
    if (!dirichlet_Q.empty()) {
      char* d = nullptr;
      rc = qm_dirichlet(alpha.c_str(), dirichlet_Q.c_str(), &d);
      if (rc != QM_OK) return fail(rc);
      json += ",\"dirichlet\":" + take(d);
    }
    if (cf_n > 0) {
      char* g = nullptr;
      rc = qm_good_convergent(alpha.c_str(), cf_n, cf_k, cf_r, cf_eps, &g);
      if (rc == QM_OK) {
        json += ",\"good_convergent\":" + take(g);
      } else if (rc == QM_NOT_FOUND) {
        json += ",\"good_convergent\":null";
      } else {
        return fail(rc);
      }
    }
    json += "}";
    return emit(json, out_path);
  }

  if (weyl->parsed()) {
    Phase ph;
    if (int rc = ph.parse(phi)) return rc;
    char* body = nullptr;
    qm_status rc;
    if (weyl_j > 0) {
      rc = qm_weyl_inequality(ph.h, weyl_n, weyl_ell, weyl_j, &body);
    } else {
      int degree = qm_phase_degree(ph.h);
      double r = weyl_r > 0 ? weyl_r : (degree == 2 ? 1.5 : 0.5);
      if (degree == 2)
        rc = qm_quadratic_chain(ph.h, alpha.c_str(), beta.c_str(), weyl_n, r,
                                weyl_eps, &body);
      else
        rc = qm_general_chain(ph.h, alpha.c_str(), beta.c_str(), weyl_n, r,
                              weyl_eps, &body);
    }
    if (rc != QM_OK) return fail(rc);
    return emit(take(body), out_path);
  }

  if (sweep->parsed()) {
    std::string config = config_inline;
    if (config.empty()) {
      if (config_path.empty()) {
        std::cerr << "error: sweep needs --config or --config-json\n";
        return static_cast<int>(QM_INVALID_ARGUMENT);
      }
      std::ifstream in(config_path, std::ios::binary);
      if (!in) {
        std::cerr << "error: cannot read '" << config_path << "'\n";
        return static_cast<int>(QM_IO);
      }
      std::ostringstream ss;
      ss << in.rdbuf();
      config = ss.str();
    }
    char* records = nullptr;
    char* summary = nullptr;
    qm_status rc = qm_sweep_run(config.c_str(), &records, &summary);
    if (rc != QM_OK) return fail(rc);
    std::string records_s = take(records);
    std::string summary_s = take(summary);
    if (!out_dir.empty()) {
      if (int e = write_into_dir(out_dir, "records.csv", records_s)) return e;
      if (int e = write_into_dir(out_dir, "summary.json", summary_s)) return e;
    }
    std::cout << summary_s << "\n";
    return 0;
  }

  if (gaps->parsed()) {
    Phase ph;
    if (int rc = ph.parse(phi)) return rc;
    char* records = nullptr;
    char* summary = nullptr;
    qm_status rc = qm_gap_study(ph.h, alpha.c_str(), beta.c_str(), m_lo, m_hi,
                                testfn.c_str(), &records, &summary);
    if (rc != QM_OK) return fail(rc);
    std::string records_s = take(records);
    std::string summary_s = take(summary);
    if (!out_dir.empty()) {
      if (int e = write_into_dir(out_dir, "gaps.csv", records_s)) return e;
      if (int e = write_into_dir(out_dir, "gaps.json", summary_s)) return e;
    }
    std::cout << summary_s << "\n";
    return 0;
  }

  if (exponents->parsed()) {
    Phase ph;
    if (int rc = ph.parse(phi)) return rc;
    char* csv = nullptr;
    char* json = nullptr;
    qm_status rc = qm_exponent_study(ph.h, alpha.c_str(), beta.c_str(),
                                     n_grid.data(), n_grid.size(), testfn.c_str(),
                                     &csv, &json);
    if (rc != QM_OK) return fail(rc);
    std::string csv_s = take(csv);
    std::string json_s = take(json);
    if (!out_dir.empty()) {
      if (int e = write_into_dir(out_dir, "exponents.csv", csv_s)) return e;
      if (int e = write_into_dir(out_dir, "exponents.json", json_s)) return e;
    }
    std::cout << json_s << "\n";
    return 0;
  }

  return 0;
}
