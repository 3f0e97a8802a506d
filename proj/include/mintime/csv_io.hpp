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

#pragma once

#include <string>
#include <vector>

namespace mintime {

// Minimal numeric CSV support. First line may be a header (detected by any
// non-numeric token); all remaining rows must have the same column count.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int cols() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }
  // Column index by header name, -1 if absent.
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace mintime
