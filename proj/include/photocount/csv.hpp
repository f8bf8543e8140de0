// Copyright 2026 The photocount authors
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

#ifndef PHOTOCOUNT_CSV_HPP
#define PHOTOCOUNT_CSV_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

// RFC-4180-style CSV output: header row, LF line endings, '.' decimal
// separator, floats at 12 significant digits, no locale dependence. Byte
// determinism is what the golden-file tests rely on.

namespace photocount::csvio {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

inline std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << quote_if_needed(cells[i]);
    }
    os_ << '\n';
  }

 private:
  std::ostream& os_;
};

}  // namespace photocount::csvio

#endif  // PHOTOCOUNT_CSV_HPP
