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

#include "qmaps/rational_poly.hpp"

#include <algorithm>
#include <sstream>

namespace qmaps {

RationalPoly::RationalPoly(std::vector<Rational> ascending) : c_(std::move(ascending)) {
  trim();
}

RationalPoly RationalPoly::from_highest_first(const std::vector<Rational>& coeffs) {
  std::vector<Rational> asc(coeffs.rbegin(), coeffs.rend());
  return RationalPoly(std::move(asc));
}

void RationalPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

const Rational& RationalPoly::leading() const {
  if (c_.empty()) throw Error(ErrorCode::InvalidArgument, "leading() of zero polynomial");
  return c_.back();
}

Rational RationalPoly::coeff(int j) const {
  if (j < 0 || j >= static_cast<int>(c_.size())) return Rational(0);
  return c_[static_cast<size_t>(j)];
}

Rational RationalPoly::eval(const Rational& x) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Real50 RationalPoly::eval(const Real50& x) const {
  Real50 acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Real50(*it);
  return acc;
}

double RationalPoly::eval(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    acc = acc * x + it->convert_to<double>();
  return acc;
}

RationalPoly RationalPoly::derivative() const {
  if (c_.size() <= 1) return RationalPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (size_t j = 1; j < c_.size(); ++j) d[j - 1] = c_[j] * static_cast<long>(j);
  return RationalPoly(std::move(d));
}

RationalPoly RationalPoly::shifted(const Rational& h) const {
  // Repeated synthetic division by (x - (-h)) accumulates the Taylor
  // coefficients of p(x + h).
  std::vector<Rational> work = c_;
  std::vector<Rational> out(c_.size(), Rational(0));
  size_t n = c_.size();
  for (size_t j = 0; j < n; ++j) {
    for (size_t i = n; i-- > j + 1;) work[i - 1] += work[i] * h;
    out[j] = work[j];
  }
  return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return RationalPoly(std::move(r));
}

RationalPoly RationalPoly::operator-(const RationalPoly& o) const {
  std::vector<Rational> r(std::max(c_.size(), o.c_.size()), Rational(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return RationalPoly(std::move(r));
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
  if (c_.empty() || o.c_.empty()) return RationalPoly();
  std::vector<Rational> r(c_.size() + o.c_.size() - 1, Rational(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return RationalPoly(std::move(r));
}

RationalPoly RationalPoly::scaled(const Rational& s) const {
  std::vector<Rational> r = c_;
  for (auto& v : r) v *= s;
  return RationalPoly(std::move(r));
}

std::string RationalPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int j = degree(); j >= 0; --j) {
    Rational v = coeff(j);
    if (v == 0) continue;
    if (!first) os << (v > 0 ? " + " : " - ");
    else if (v < 0) os << "-";
    Rational a = v < 0 ? Rational(-v) : v;
    bool unit = (a == 1) && j > 0;
    if (!unit) os << a;
    if (j > 0) {
      if (!unit) os << " ";
      os << "x";
      if (j > 1) os << "^" << j;
    }
    first = false;
  }
  return os.str();
}

namespace {

int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Polynomial remainder (exact rational division).
RationalPoly rem(const RationalPoly& a, const RationalPoly& b) {
  std::vector<Rational> r = a.coeffs();
  const auto& bc = b.coeffs();
  int db = b.degree();
  while (static_cast<int>(r.size()) - 1 >= db) {
    int dr = static_cast<int>(r.size()) - 1;
    Rational factor = r.back() / bc.back();
    for (int i = 0; i <= db; ++i)
      r[static_cast<size_t>(dr - db + i)] -= factor * bc[static_cast<size_t>(i)];
    while (!r.empty() && r.back() == 0) r.pop_back();
    if (r.empty()) break;
  }
  return RationalPoly(std::move(r));
}

RationalPoly poly_gcd(RationalPoly a, RationalPoly b) {
  while (!b.is_zero()) {
    RationalPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<RationalPoly> sturm_chain(const RationalPoly& p) {
  std::vector<RationalPoly> chain;
  chain.push_back(p);
  chain.push_back(p.derivative());
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    RationalPoly r = rem(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(r.scaled(Rational(-1)));
  }
  // Chain may end early when gcd(p, p') is nontrivial; that is fine for
  // sign-variation counting on the squarefree part handled by the caller.
  return chain;
}

int sign_variations(const std::vector<RationalPoly>& chain, const Rational& x) {
  int vars = 0, prev = 0;
  for (const auto& q : chain) {
    if (q.is_zero()) continue;
    int s = sign_of(q.eval(x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++vars;
    prev = s;
  }
  return vars;
}

RationalPoly squarefree_part(const RationalPoly& p) {
  RationalPoly g = poly_gcd(p, p.derivative());
  if (g.degree() <= 0) return p;
  // Exact division p / g via repeated synthetic elimination.
  std::vector<Rational> num = p.coeffs();
  const auto& den = g.coeffs();
  int dq = p.degree() - g.degree();
  std::vector<Rational> q(static_cast<size_t>(dq) + 1, Rational(0));
  for (int i = dq; i >= 0; --i) {
    Rational f = num[static_cast<size_t>(i + g.degree())] / den.back();
    q[static_cast<size_t>(i)] = f;
    for (int j = 0; j <= g.degree(); ++j)
      num[static_cast<size_t>(i + j)] -= f * den[static_cast<size_t>(j)];
  }
  return RationalPoly(std::move(q));
}

}  // namespace

int count_roots_open(const RationalPoly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) throw Error(ErrorCode::InvalidArgument, "root count of zero polynomial");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty interval");
  RationalPoly sf = squarefree_part(p);
  if (sf.degree() == 0) return 0;
  if (sf.eval(lo) == 0 || sf.eval(hi) == 0) {
    throw Error(ErrorCode::InvalidArgument, "count_roots_open: root at endpoint");
  }
  auto chain = sturm_chain(sf);
  return sign_variations(chain, lo) - sign_variations(chain, hi);
}

bool has_root_in_closed(const RationalPoly& p, const Rational& lo, const Rational& hi) {
  if (p.is_zero()) return true;
  if (p.degree() == 0) return false;
  if (p.eval(lo) == 0 || p.eval(hi) == 0) return true;
  if (!(lo < hi)) return false;
  return count_roots_open(p, lo, hi) > 0;
}

}  // namespace qmaps
