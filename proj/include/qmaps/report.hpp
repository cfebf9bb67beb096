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

#ifndef QMAPS_REPORT_HPP
#define QMAPS_REPORT_HPP

#include <optional>
#include <string>

#include "qmaps/numeric.hpp"

namespace qmaps {

// Result of checking one displayed inequality.  Two flavors:
//  - explicit-constant bounds: `holds` is the decision lhs <= rhs at 1e-12
//    relative slack (or an exact integer comparison when both sides are
//    exact; see lhs_exact/rhs_exact);
//  - implied-constant bounds (<<): no truth value to assert, so `holds` is
//    true by convention and `fitted_constant` = lhs/rhs records the constant
//    a run realizes.  Stability of that constant across a parameter grid is
//    what the tests monitor.
struct BoundReport {
  std::string tag;      // which inequality, e.g. "weyl-difference-bound"
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  bool explicit_constant = false;
  double ratio = 0.0;   // lhs/rhs (0 when rhs == 0)
  std::optional<double> fitted_constant;
  std::optional<std::string> lhs_exact;  // decimal strings for exact checks
  std::optional<std::string> rhs_exact;
  std::string notes;

  std::string to_json() const;
};

BoundReport make_explicit_report(const std::string& tag, double lhs, double rhs,
                                 const std::string& notes = "");
BoundReport make_fitted_report(const std::string& tag, double lhs, double rhs,
                               const std::string& notes = "");
BoundReport make_exact_report(const std::string& tag, const BigInt& lhs,
                              const BigInt& rhs, const std::string& notes = "");

}  // namespace qmaps

#endif  // QMAPS_REPORT_HPP
