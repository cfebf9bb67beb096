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

#include "qmaps/report.hpp"

#include <cmath>

#include "qmaps/io.hpp"

namespace qmaps {

BoundReport make_explicit_report(const std::string& tag, double lhs, double rhs,
                                 const std::string& notes) {
  BoundReport r;
  r.tag = tag;
  r.lhs = lhs;
  r.rhs = rhs;
  r.explicit_constant = true;
  // 1e-12 relative slack so identity-tight cases are not lost to rounding.
  double slack = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  r.holds = lhs <= rhs + slack;
  r.ratio = rhs != 0.0 ? lhs / rhs : 0.0;
  r.notes = notes;
  return r;
}

BoundReport make_fitted_report(const std::string& tag, double lhs, double rhs,
                               const std::string& notes) {
  BoundReport r;
  r.tag = tag;
  r.lhs = lhs;
  r.rhs = rhs;
  r.explicit_constant = false;
  r.holds = true;  // implied constant: nothing to falsify in a single run
  r.ratio = rhs != 0.0 ? lhs / rhs : 0.0;
  r.fitted_constant = r.ratio;
  r.notes = notes;
  return r;
}

BoundReport make_exact_report(const std::string& tag, const BigInt& lhs,
                              const BigInt& rhs, const std::string& notes) {
  BoundReport r;
  r.tag = tag;
  r.lhs = lhs.convert_to<double>();
  r.rhs = rhs.convert_to<double>();
  r.explicit_constant = true;
  r.holds = lhs <= rhs;  // exact integer comparison
  r.ratio = rhs != 0 ? r.lhs / r.rhs : 0.0;
  r.lhs_exact = lhs.str();
  r.rhs_exact = rhs.str();
  r.notes = notes;
  return r;
}

std::string BoundReport::to_json() const {
  std::string s = "{";
  s += "\"tag\":" + json_quote(tag);
  s += ",\"lhs\":" + format_double(lhs);
  s += ",\"rhs\":" + format_double(rhs);
  s += ",\"holds\":" + std::string(holds ? "true" : "false");
  s += ",\"explicit_constant\":" + std::string(explicit_constant ? "true" : "false");
  s += ",\"ratio\":" + format_double(ratio);
  if (fitted_constant) s += ",\"fitted_constant\":" + format_double(*fitted_constant);
  if (lhs_exact) s += ",\"lhs_exact\":" + json_quote(*lhs_exact);
  if (rhs_exact) s += ",\"rhs_exact\":" + json_quote(*rhs_exact);
  if (!notes.empty()) s += ",\"notes\":" + json_quote(notes);
  s += "}";
  return s;
}

}  // namespace qmaps
