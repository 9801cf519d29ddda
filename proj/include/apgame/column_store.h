// Copyright 2026 The apgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef APGAME_COLUMN_STORE_H_
#define APGAME_COLUMN_STORE_H_

#include <string>
#include <vector>

#include "json.hpp"

namespace apgame {

struct ColumnTable {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  void Add(std::string name, std::vector<double> values) {
    names.push_back(std::move(name));
    columns.push_back(std::move(values));
  }
  size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
};

// Layout: "APGCOL1\0", u32 little-endian header length, JSON header
// {"meta", "columns", "rows"}, then each column as little-endian f64.
void WriteColumnStore(const std::string& path, const ColumnTable& table);
ColumnTable ReadColumnStore(const std::string& path);

// Header lines "# key=value" from meta, then a CSV with names as header.
void WriteCsv(const std::string& path, const ColumnTable& table);

}  // namespace apgame

#endif  // APGAME_COLUMN_STORE_H_
