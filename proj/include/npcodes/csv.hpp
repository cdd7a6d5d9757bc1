// Copyright 2026 The npcodes Authors
//
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


#pragma once

// Plot-ready CSV output with full-precision numbers.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace npcodes {

/// 17 significant digits in scientific notation; non-finite values as nan/inf.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

/// One CSV row built from heterogeneous cells.
class CsvRow {
 public:
  CsvRow& add(const std::string& s) { return push(csv_field(s)); }
  CsvRow& add(const char* s) { return add(std::string(s)); }
  CsvRow& add(double v) { return push(csv_number(v)); }
  CsvRow& add(int v) { return push(std::to_string(v)); }
  CsvRow& add(long v) { return push(std::to_string(v)); }
  CsvRow& add(long long v) { return push(std::to_string(v)); }
  CsvRow& add(unsigned long long v) { return push(std::to_string(v)); }
  CsvRow& add(unsigned long v) { return push(std::to_string(v)); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i) out += ',';
      out += cells_[i];
    }
    return out;
  }

 private:
  CsvRow& push(std::string s) {
    cells_.push_back(std::move(s));
    return *this;
  }
  std::vector<std::string> cells_;
};

inline void write_csv_header(std::ostream& os, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

}  // namespace npcodes
