// Copyright 2026 The mintime Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mintime/csv_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mintime/errors.hpp"

namespace mintime {
namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string tok;
  std::stringstream ss(line);
  while (std::getline(ss, tok, ',')) {
    // trim
    size_t a = tok.find_first_not_of(" \t\r");
    size_t b = tok.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? std::string() : tok.substr(a, b - a + 1));
  }
  return out;
}

bool parse_double(const std::string& s, double* v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  *v = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size();
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open CSV file: " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto toks = split_line(line);
    std::vector<double> row(toks.size());
    bool numeric = true;
    for (size_t i = 0; i < toks.size(); ++i) {
      if (!parse_double(toks[i], &row[i])) {
        numeric = false;
        break;
      }
    }
    if (first && !numeric) {
      table.header = toks;
      first = false;
      continue;
    }
    first = false;
    if (!numeric) {
      throw InvalidArgumentError(path + ":" + std::to_string(lineno) +
                                 ": non-numeric CSV row");
    }
    if (!table.rows.empty() && row.size() != table.rows[0].size()) {
      throw InvalidArgumentError(path + ":" + std::to_string(lineno) +
                                 ": inconsistent column count");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidArgumentError("cannot open CSV file for write: " + path);
  out.precision(17);
  for (size_t i = 0; i < header.size(); ++i) {
    out << header[i] << (i + 1 < header.size() ? "," : "");
  }
  if (!header.empty()) out << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      out << row[i] << (i + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
}

}  // namespace mintime
