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

#include "qmaps/pcf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qmaps {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
}

TestFunction TestFunction::fejer() {
  TestFunction f;
  f.kind_ = Kind::Fejer;
  f.support_ = 1.0;
  f.power_ = 1;
  f.f_zero_ = 1.0;  // integral of (1-|t|) over [-1,1]
  return f;
}

TestFunction TestFunction::triangle_power(int p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "triangle power must be >= 1");
  TestFunction f;
  f.kind_ = Kind::TrianglePower;
  f.support_ = 1.0;
  f.power_ = p;
  f.f_zero_ = 2.0 / (p + 1);  // integral of (1-|t|)^p over [-1,1]
  return f;
}

TestFunction TestFunction::from_table(std::vector<std::pair<double, double>> nodes) {
  if (nodes.empty()) throw Error(ErrorCode::InvalidArgument, "empty test function table");
  std::sort(nodes.begin(), nodes.end());
  if (nodes.front().first != 0.0)
    throw Error(ErrorCode::InvalidArgument, "test function table must start at t = 0");
  for (size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].first == nodes[i - 1].first)
      throw Error(ErrorCode::InvalidArgument, "duplicate abscissa in test function table");
  TestFunction f;
  f.kind_ = Kind::UserTable;
  f.support_ = nodes.back().first;
  // Even extension; piecewise-linear trapezoid integral is exact for the
  // interpolant, and defines f(0).
  double integral = 0.0;
  for (size_t i = 1; i < nodes.size(); ++i) {
    integral += 0.5 * (nodes[i].second + nodes[i - 1].second) *
                (nodes[i].first - nodes[i - 1].first);
  }
  f.f_zero_ = 2.0 * integral;
  f.nodes_ = std::move(nodes);
  return f;
}

TestFunction TestFunction::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open test function table: " + path);
  std::vector<std::pair<double, double>> nodes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double t, v;
    if (is >> t >> v) nodes.emplace_back(t, v);
  }
  return from_table(std::move(nodes));
}

double TestFunction::fhat(double t) const {
  double a = std::abs(t);
  switch (kind_) {
    case Kind::Fejer:
      return a >= 1.0 ? 0.0 : 1.0 - a;
    case Kind::TrianglePower: {
      if (a >= 1.0) return 0.0;
      double base = 1.0 - a;
      double r = 1.0;
      for (int i = 0; i < power_; ++i) r *= base;
      return r;
    }
    case Kind::UserTable: {
      if (a > support_) return 0.0;
      auto it = std::lower_bound(
          nodes_.begin(), nodes_.end(), a,
          [](const std::pair<double, double>& node, double x) { return node.first < x; });
      if (it == nodes_.begin()) return it->second;
      if (it == nodes_.end()) return nodes_.back().second;
      auto prev = it - 1;
      double w = (a - prev->first) / (it->first - prev->first);
      return prev->second + w * (it->second - prev->second);
    }
  }
  return 0.0;
}

double TestFunction::f(double x) const {
  if (kind_ != Kind::Fejer)
    throw Error(ErrorCode::UnsupportedKind,
                "no position-side form available for this test function kind");
  double a = kPi * x;
  if (std::abs(a) < 1e-6) {
    double a2 = a * a;
    return 1.0 - a2 / 3.0 + 2.0 * a2 * a2 / 45.0;
  }
  double s = std::sin(a) / a;
  return s * s;
}

bool TestFunction::consistent(double tol) const {
  if (support_ == 0.0) return std::abs(f_zero_) <= tol;
  // Composite Simpson for the integral of fhat over [-S, S]; refine until two
  // successive grids agree.  For the piecewise-linear table this converges to
  // the trapezoid value (exact for the interpolant) immediately.
  auto integrate = [&](int panels) {
    double h = 2.0 * support_ / panels;
    KahanSum acc;
    acc.add(fhat(-support_));
    acc.add(fhat(support_));
    for (int i = 1; i < panels; ++i)
      acc.add((i % 2 == 1 ? 4.0 : 2.0) * fhat(-support_ + i * h));
    return acc.value() * h / 3.0;
  };
  double prev = integrate(512);
  for (int panels = 1024; panels <= 1 << 20; panels *= 2) {
    double cur = integrate(panels);
    if (std::abs(cur - prev) <= tol / 4 && std::abs(cur - f_zero_) <= tol) return true;
    prev = cur;
  }
  return std::abs(prev - f_zero_) <= tol;
}

std::string TestFunction::describe() const {
  switch (kind_) {
    case Kind::Fejer:
      return "fejer";
    case Kind::TrianglePower:
      return "triangle^" + std::to_string(power_);
    case Kind::UserTable:
      return "table[" + std::to_string(nodes_.size()) + " nodes]";
  }
  return "?";
}

PcfValue rho2_local(const TestFunction& f, const TraceWindow& tw) {
  double m = static_cast<double>(tw.phase_count);
  long long needed =
      static_cast<long long>(std::floor(f.support_radius() * m + 1e-9));
  if (tw.window < needed) {
    throw Error(ErrorCode::WindowTooSmall,
                "trace window " + std::to_string(tw.window) +
                    " too small; support requires |l| <= " + std::to_string(needed));
  }
  KahanSum acc;
  acc.add(f.fhat(0.0) * tw.value(0));
  for (long long l = 1; l <= needed; ++l) {
    double w = f.fhat(static_cast<double>(l) / m);
    if (w != 0.0) acc.add(2.0 * w * tw.value(l));  // evenness of fhat and |Tr|^2
  }
  PcfValue out;
  out.n = tw.n;
  out.ell_window = needed;
  out.value = acc.value() / (m * m);
  out.poisson_ref = poisson_reference(f);
  return out;
}

PcfValue rho2_local(const TestFunction& f, const PolynomialPhase& phase,
                    const SpectrumParams& params) {
  PhaseSet ps = eigenphases(phase, params);
  long long needed = static_cast<long long>(
      std::floor(f.support_radius() * static_cast<double>(ps.count()) + 1e-9));
  return rho2_local(f, trace_window(ps, needed));
}

CumulativePcf rho2_cumulative(const TestFunction& f, const PolynomialPhase& phase,
                              const ApproxReal& alpha, const ApproxReal& beta,
                              long long N, bool keep_per_n, IndexRange range) {
  if (N < 1) throw Error(ErrorCode::InvalidArgument, "cumulative cutoff N must be >= 1");
  CumulativeAccumulator acc;
  CumulativePcf out;
  out.N = N;
  if (keep_per_n) out.per_n.reserve(static_cast<size_t>(N));
  for (long long n = 1; n <= N; ++n) {
    SpectrumParams p{n, alpha, beta, range};
    PcfValue v = rho2_local(f, phase, p);
    acc.add(v.value);
    if (keep_per_n) out.per_n.push_back(v);
  }
  out.value = acc.mean();
  return out;
}

double poisson_reference(const TestFunction& f) { return f.fhat_zero() + f.f_zero(); }

long long recommended_m_cutoff(long long n, double per_pair_tol) {
  if (per_pair_tol <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "tail tolerance must be positive");
  // Tail bound: sum_{|m| > M} f(n(theta+m)) <= 2/(pi^2 n^2 (M-2)).
  double need = 2.0 / (kPi * kPi * static_cast<double>(n) * static_cast<double>(n) *
                       per_pair_tol);
  return static_cast<long long>(std::ceil(need)) + 2;
}

namespace {

// sum_{|m| <= M} f(n (theta + m)) for the Fejer pair.  Exploits
// sin^2(pi n (theta+m)) = sin^2(pi n theta) for integer n*m, so the bulk of
// the loop is one division per term.
double fejer_m_sum(const TestFunction& f, double theta, long long n, long long M) {
  double s = std::sin(kPi * static_cast<double>(n) * theta);
  double scale = s * s / (kPi * static_cast<double>(n) * kPi * static_cast<double>(n));
  double nearest = std::round(-theta);  // m where theta + m crosses zero
  KahanSum acc;
  for (long long m = -M; m <= M; ++m) {
    double t = theta + static_cast<double>(m);
    if (static_cast<double>(m) == nearest && std::abs(t) * static_cast<double>(n) < 0.5) {
      acc.add(f.f(static_cast<double>(n) * t));  // series-safe near the peak
    } else {
      acc.add(scale / (t * t));
    }
  }
  return acc.value();
}

}  // namespace

double pair_count_oracle(const TestFunction& f, std::span<const double> phases,
                         long long n, long long m_cutoff) {
  if (!f.has_physical_form())
    throw Error(ErrorCode::UnsupportedKind,
                "pair counting needs the position-side form; only the Fejer pair has one");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (m_cutoff < 1) throw Error(ErrorCode::InvalidArgument, "m_cutoff must be >= 1");
  size_t count = phases.size();
  KahanSum total;
  // Diagonal pairs: theta = 0.
  for (size_t j = 0; j < count; ++j) total.add(fejer_m_sum(f, 0.0, n, m_cutoff));
  // Off-diagonal: theta and -theta give the same m-sum after m -> -m.
  for (size_t j = 0; j < count; ++j) {
    for (size_t k = j + 1; k < count; ++k) {
      total.add(2.0 * fejer_m_sum(f, phases[j] - phases[k], n, m_cutoff));
    }
  }
  return total.value() / static_cast<double>(n);
}

OscillationDecomposition oscillation_decomposition(const TestFunction& f,
                                                   const PolynomialPhase& phase,
                                                   const ApproxReal& alpha,
                                                   const ApproxReal& beta, long long N,
                                                   long long M, IndexRange range) {
  if (!(1 <= N && N < M))
    throw Error(ErrorCode::InvalidArgument, "need 1 <= N < M for the decomposition");
  CumulativePcf upTo = rho2_cumulative(f, phase, alpha, beta, M, true, range);
  KahanSum prefix;
  for (long long n = 1; n <= N; ++n) prefix.add(upTo.per_n[static_cast<size_t>(n - 1)].value);
  double rhobar_N = prefix.value() / static_cast<double>(N);
  double rhobar_M = upTo.value;
  KahanSum fresh;
  for (long long n = N + 1; n <= M; ++n) fresh.add(upTo.per_n[static_cast<size_t>(n - 1)].value);

  OscillationDecomposition out;
  out.term_scaled_prev =
      (static_cast<double>(N) - static_cast<double>(M)) / static_cast<double>(M) * rhobar_N;
  out.term_new_levels = fresh.value() / static_cast<double>(M);
  out.sum = out.term_scaled_prev + out.term_new_levels;
  out.direct_difference = rhobar_M - rhobar_N;
  out.identity_holds = close_rel(out.sum, out.direct_difference, 1e-10, 1e-8);
  return out;
}

}  // namespace qmaps
