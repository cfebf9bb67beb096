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

// Exercises the shared library through the C interface only.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qmaps/qmaps.h"

namespace {

struct Str {
  char* s = nullptr;
  ~Str() { qm_string_free(s); }
  std::string view() const { return s ? std::string(s) : std::string(); }
};

struct Phase {
  qm_phase* p = nullptr;
  explicit Phase(const char* coeffs) { REQUIRE(qm_phase_parse(coeffs, &p) == QM_OK); }
  ~Phase() { qm_phase_free(p); }
};

struct TestFn {
  qm_testfn* f = nullptr;
  explicit TestFn(const char* spec) { REQUIRE(qm_testfn_parse(spec, &f) == QM_OK); }
  ~TestFn() { qm_testfn_free(f); }
};

}  // namespace

TEST_CASE("version, error text, and null-safe frees") {
  const char* v = qm_version();
  REQUIRE(v != nullptr);
  CHECK(std::strchr(v, '.') != nullptr);
  qm_string_free(nullptr);
  qm_phase_free(nullptr);
  qm_testfn_free(nullptr);
  qm_trace_window_free(nullptr);

  qm_phase* p = nullptr;
  CHECK(qm_phase_parse("not a polynomial", &p) == QM_INVALID_ARGUMENT);
  CHECK(p == nullptr);
  CHECK(std::string(qm_last_error_message()).size() > 0);
}

TEST_CASE("phase handles") {
  Phase quad("1,0,0");
  CHECK(qm_phase_degree(quad.p) == 2);
  Phase cubic("1/2,0,-1,3");
  CHECK(qm_phase_degree(cubic.p) == 3);
  qm_phase* p = nullptr;
  CHECK(qm_phase_parse("", &p) == QM_INVALID_ARGUMENT);
  CHECK(qm_phase_parse("0x10,1,0", &p) == QM_INVALID_ARGUMENT);
}

TEST_CASE("test functions and the Poisson reference") {
  TestFn fej("fejer");
  double ref = 0.0;
  REQUIRE(qm_poisson_reference(fej.f, &ref) == QM_OK);
  CHECK(ref == doctest::Approx(2.0));
  TestFn tri("triangle:2");
  REQUIRE(qm_poisson_reference(tri.f, &ref) == QM_OK);
  CHECK(ref == doctest::Approx(1.0 + 2.0 / 3.0));
  qm_testfn* f = nullptr;
  CHECK(qm_testfn_parse("gauss", &f) == QM_UNSUPPORTED_KIND);
  CHECK(qm_testfn_parse("triangle:0", &f) == QM_INVALID_ARGUMENT);
}

TEST_CASE("hypothesis validation") {
  Phase quad("1,0,0");
  int curv = -1, drift = -1;
  Str details;
  // drift = 2*golden*x + 4 has its root near -1.236, outside [-1, 1].
  REQUIRE(qm_validate_hypotheses(quad.p, "golden", "4", &curv, &drift,
                                 &details.s) == QM_OK);
  CHECK(curv == 1);
  CHECK(drift == 1);
  // beta = 0 puts a zero of alpha*phi'(x) + beta at x = 0.
  REQUIRE(qm_validate_hypotheses(quad.p, "golden", "0", &curv, &drift, nullptr) ==
          QM_OK);
  CHECK(drift == 0);
  auto j = nlohmann::json::parse(details.view());
  CHECK(j.contains("curvature_ok"));
  Phase cubic("1,0,0,0");
  REQUIRE(qm_validate_hypotheses(cubic.p, "golden", "0", &curv, &drift, nullptr) ==
          QM_OK);
  CHECK(curv == 0);
}

TEST_CASE("eigenphases: frozen values and range checks") {
  Phase quad("1,0,0");
  double out[8] = {0};
  size_t written = 0;
  REQUIRE(qm_eigenphases(quad.p, 3, "1", "0", 0, out, 8, &written) == QM_OK);
  REQUIRE(written == 3);
  CHECK(out[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(out[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(out[2] == doctest::Approx(0.0));
  // Symmetric range: 2n+1 phases, middle one (k = 0) is zero.
  REQUIRE(qm_eigenphases(quad.p, 2, "1", "0", 1, out, 8, &written) == QM_OK);
  REQUIRE(written == 5);
  CHECK(out[2] == doctest::Approx(0.0));
  CHECK(qm_eigenphases(quad.p, 3, "1", "0", 0, out, 2, &written) ==
        QM_INVALID_ARGUMENT);
  CHECK(qm_eigenphases(quad.p, 0, "1", "0", 0, out, 8, &written) ==
        QM_INVALID_ARGUMENT);
  CHECK(qm_eigenphases(quad.p, 3, "1/0", "0", 0, out, 8, &written) ==
        QM_INVALID_ARGUMENT);
}

TEST_CASE("trace windows: frozen values at n = 4") {
  Phase quad("1,0,0");
  qm_trace_window* tw = nullptr;
  REQUIRE(qm_trace_window_compute(quad.p, 4, "1", "0", 0, 4, &tw) == QM_OK);
  double re = 0, im = 0, abs2 = 0;
  REQUIRE(qm_trace_get(tw, 0, &re, &im, &abs2) == QM_OK);
  CHECK(re == doctest::Approx(4.0));
  REQUIRE(qm_trace_get(tw, 1, &re, &im, &abs2) == QM_OK);
  CHECK(re == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(im == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(abs2 == doctest::Approx(8.0).epsilon(1e-12));
  REQUIRE(qm_trace_get(tw, -1, &re, &im, &abs2) == QM_OK);
  CHECK(im == doctest::Approx(-2.0).epsilon(1e-12));
  REQUIRE(qm_trace_get(tw, 2, &re, &im, &abs2) == QM_OK);
  CHECK(std::abs(re) < 1e-12);
  CHECK(std::abs(im) < 1e-12);
  REQUIRE(qm_trace_get(tw, 4, &re, &im, &abs2) == QM_OK);
  CHECK(re == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(qm_trace_get(tw, 5, &re, &im, &abs2) == QM_INVALID_ARGUMENT);
  qm_trace_window_free(tw);
}

TEST_CASE("pair statistics through the C interface") {
  Phase quad("1,0,0");
  TestFn fej("fejer");
  double value = 0, ref = 0;
  REQUIRE(qm_rho2_local(quad.p, fej.f, 10, "0", "0", 0, &value, &ref) == QM_OK);
  CHECK(value == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(ref == doctest::Approx(2.0));

  std::vector<double> per_n(10, 0.0);
  REQUIRE(qm_rho2_cumulative(quad.p, fej.f, 10, "0", "0", 0, per_n.data(),
                             &value) == QM_OK);
  CHECK(value == doctest::Approx(5.5).epsilon(1e-12));
  for (int n = 1; n <= 10; ++n)
    CHECK(per_n[n - 1] == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
  // per_n may be omitted.
  REQUIRE(qm_rho2_cumulative(quad.p, fej.f, 5, "0", "0", 0, nullptr, &value) ==
          QM_OK);
  CHECK(value == doctest::Approx(3.0).epsilon(1e-12));

  // Physical-side pair count: all phases zero, so the m = 0 band dominates.
  std::vector<double> phases(16, 0.0);
  double pc = 0.0;
  REQUIRE(qm_pair_count(fej.f, phases.data(), phases.size(), 16, 200, &pc) ==
          QM_OK);
  CHECK(pc == doctest::Approx(16.0).epsilon(1e-3));
  TestFn tri("triangle:2");
  CHECK(qm_pair_count(tri.f, phases.data(), phases.size(), 16, 200, &pc) ==
        QM_UNSUPPORTED_KIND);
  REQUIRE(qm_pair_count(fej.f, phases.data(), 0, 16, 200, &pc) == QM_OK);
  CHECK(pc == 0.0);  // no phases, no pairs
  CHECK(qm_pair_count(fej.f, phases.data(), phases.size(), 16, 0, &pc) ==
        QM_INVALID_ARGUMENT);
}

TEST_CASE("continued fraction reports") {
  Str json;
  REQUIRE(qm_cf_report("355/113", 10, &json.s) == QM_OK);
  auto j = nlohmann::json::parse(json.view());
  CHECK(j.at("truncated").get<bool>() == false);
  std::vector<std::string> quot = j.at("quotients");
  CHECK(quot == std::vector<std::string>{"3", "7", "16"});
  CHECK(j.at("p").back().get<std::string>() == "355");
  CHECK(j.at("q").back().get<std::string>() == "113");

  Str golden;
  REQUIRE(qm_cf_report("golden", 25, &golden.s) == QM_OK);
  auto g = nlohmann::json::parse(golden.view());
  CHECK(g.at("truncated").get<bool>() == true);
  for (const auto& a : g.at("quotients")) CHECK(a.get<std::string>() == "1");
  CHECK(g.at("growth").at("flagged").get<bool>() == false);

  Str bad;
  CHECK(qm_cf_report("1/0", 10, &bad.s) == QM_INVALID_ARGUMENT);
}

TEST_CASE("Dirichlet approximation endpoint") {
  Str json;
  REQUIRE(qm_dirichlet("sqrt2", "10", &json.s) == QM_OK);
  auto j = nlohmann::json::parse(json.view());
  CHECK(j.at("a").get<std::string>() == "7");
  CHECK(j.at("q").get<std::string>() == "5");
  CHECK(j.at("reduced").get<bool>());
  Str bad;
  CHECK(qm_dirichlet("sqrt2", "0", &bad.s) == QM_INVALID_ARGUMENT);
  CHECK(qm_dirichlet("sqrt2", "0x10", &bad.s) == QM_INVALID_ARGUMENT);
  CHECK(qm_dirichlet("~1.41", "1000000", &bad.s) == QM_PRECISION_EXCEEDED);
}

TEST_CASE("good-convergent endpoint") {
  Str json;
  REQUIRE(qm_good_convergent("golden", 10, 2, 1.4, 0.3, &json.s) == QM_OK);
  auto j = nlohmann::json::parse(json.view());
  CHECK(j.at("m").get<long long>() == 5);
  CHECK(j.at("p").get<std::string>() == "13");
  CHECK(j.at("q").get<std::string>() == "8");
  CHECK(j.at("g").get<std::string>() == "1");
  Str miss;
  CHECK(qm_good_convergent("1/2", 10, 2, 1.4, 0.3, &miss.s) == QM_NOT_FOUND);
  CHECK(qm_good_convergent("golden", 10, 2, 0.3, 1.4, &miss.s) ==
        QM_INVALID_ARGUMENT);
}

TEST_CASE("estimate pipelines over the C interface") {
  Phase quad("1,0,0");
  Str json;
  REQUIRE(qm_quadratic_chain(quad.p, "golden", "0", 64, 1.5, 0.1, &json.s) ==
          QM_OK);
  auto j = nlohmann::json::parse(json.view());
  REQUIRE(j.contains("reports"));
  CHECK(j.at("reports").size() == 11);
  for (const auto& rep : j.at("reports")) CHECK(rep.at("holds").get<bool>());
  Str guard;
  CHECK(qm_quadratic_chain(quad.p, "golden", "0", 4096, 1.5, 0.1, &guard.s) ==
        QM_COST_GUARD);

  Phase cubic("1,0,0,0");
  Str cj;
  REQUIRE(qm_general_chain(cubic.p, "golden", "0", 16, 0.5, 0.1, &cj.s) == QM_OK);
  auto c = nlohmann::json::parse(cj.view());
  CHECK(c.at("reports").size() == 11);
  for (const auto& rep : c.at("reports")) CHECK(rep.at("holds").get<bool>());
  Str wrong;
  CHECK(qm_general_chain(quad.p, "golden", "0", 16, 0.5, 0.1, &wrong.s) ==
        QM_INVALID_ARGUMENT);

  Str wj;
  REQUIRE(qm_weyl_inequality(cubic.p, 16, 2, 2, &wj.s) == QM_OK);
  auto w = nlohmann::json::parse(wj.view());
  CHECK(w.at("holds").get<bool>());
  Str wbad;
  CHECK(qm_weyl_inequality(quad.p, 16, 2, 2, &wbad.s) == QM_INVALID_ARGUMENT);
}

TEST_CASE("statistical harness endpoints") {
  Str csv, summary;
  REQUIRE(qm_sweep_run(
              R"({"samples": 2, "N_grid": [10, 20], "alpha": "0", "beta": "0"})",
              &csv.s, &summary.s) == QM_OK);
  auto lines_begin = csv.view().substr(0, csv.view().find('\n'));
  CHECK(lines_begin ==
        "sample,alpha,beta,alpha_exact,beta_exact,ok,"
        "rho_bar_10,rho_bar_20,abs_dev_10,abs_dev_20,error");
  auto sj = nlohmann::json::parse(summary.view());
  CHECK(sj.at("samples_ok").get<long long>() == 2);
  // Outputs are optional.
  REQUIRE(qm_sweep_run(R"({"samples": 1, "N_grid": [5]})", nullptr, nullptr) ==
          QM_OK);
  Str none;
  CHECK(qm_sweep_run(R"({"bogus": 1})", &none.s, nullptr) == QM_INVALID_ARGUMENT);
  CHECK(qm_sweep_run("nope", &none.s, nullptr) == QM_IO);

  Phase quad("1,0,0");
  Str gcsv, gsum;
  REQUIRE(qm_gap_study(quad.p, "golden", "0", 3, 5, "fejer", &gcsv.s, &gsum.s) ==
          QM_OK);
  CHECK(gcsv.view().rfind("m,N_m,N_m1,arg_M,max_gap,explicit_bound,", 0) == 0);
  auto gj = nlohmann::json::parse(gsum.view());
  CHECK(gj.at("identities_ok").get<bool>());
  Str gbad;
  CHECK(qm_gap_study(quad.p, "golden", "0", 1, 5, "fejer", &gbad.s, nullptr) ==
        QM_INVALID_ARGUMENT);

  long long grid[] = {8, 16, 32};
  Str ecsv, ejson;
  REQUIRE(qm_exponent_study(quad.p, "0", "0", grid, 3, "fejer", &ecsv.s,
                            &ejson.s) == QM_OK);
  CHECK(ecsv.view().rfind("n,rho2,log_n,log_rho2", 0) == 0);
  auto ej = nlohmann::json::parse(ejson.view());
  CHECK(ej.at("slope").get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  Str ebad;
  CHECK(qm_exponent_study(quad.p, "0", "0", grid, 1, "fejer", &ebad.s, nullptr) ==
        QM_INVALID_ARGUMENT);
}
