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

#ifndef QMAPS_IO_HPP
#define QMAPS_IO_HPP

#include <string>
#include <vector>

namespace qmaps {

// All floating-point output goes through this: 17 significant digits, which
// round-trips IEEE doubles exactly and keeps reruns byte-identical.
std::string format_double(double v);

std::string json_quote(const std::string& s);

// Minimal deterministic CSV writer.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(std::vector<std::string> cells);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

 private:
  size_t columns_;
  std::string text_;
};

void write_text_file(const std::string& path, const std::string& text);
void ensure_directory(const std::string& path);

}  // namespace qmaps

#endif  // QMAPS_IO_HPP
