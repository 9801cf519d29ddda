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

#include "apgame/column_store.h"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "apgame/errors.h"

namespace apgame {

namespace {

constexpr char kMagic[8] = {'A', 'P', 'G', 'C', 'O', 'L', '1', '\0'};

template <typename T>
T ToLittle(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

}  // namespace

void WriteColumnStore(const std::string& path, const ColumnTable& table) {
  for (const auto& c : table.columns) {
    if (c.size() != table.rows()) throw Error("column store: ragged columns");
  }
  nlohmann::json header{{"meta", table.meta},
                        {"columns", table.names},
                        {"rows", table.rows()}};
  const std::string h = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(kMagic, 8);
  const uint32_t len = ToLittle(static_cast<uint32_t>(h.size()));
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const auto& c : table.columns) {
    for (double v : c) {
      const double le = ToLittle(v);
      out.write(reinterpret_cast<const char*>(&le), 8);
    }
  }
  if (!out) throw Error("write failed: " + path);
}

ColumnTable ReadColumnStore(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) {
    throw Error(path + " is not a column store");
  }
  uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  len = ToLittle(len);
  std::string h(len, '\0');
  in.read(h.data(), len);
  const auto header = nlohmann::json::parse(h);
  ColumnTable t;
  t.meta = header.at("meta");
  const size_t rows = header.at("rows").get<size_t>();
  for (const auto& name : header.at("columns")) {
    std::vector<double> col(rows);
    for (size_t r = 0; r < rows; ++r) {
      double v;
      in.read(reinterpret_cast<char*>(&v), 8);
      col[r] = ToLittle(v);
    }
    t.Add(name.get<std::string>(), std::move(col));
  }
  if (!in) throw Error("truncated column store: " + path);
  return t;
}

void WriteCsv(const std::string& path, const ColumnTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  for (auto it = table.meta.begin(); it != table.meta.end(); ++it) {
    out << "# " << it.key() << "=" << it.value().dump() << "\n";
  }
  for (size_t c = 0; c < table.names.size(); ++c) {
    out << (c ? "," : "") << table.names[c];
  }
  out << "\n";
  char buf[32];
  for (size_t r = 0; r < table.rows(); ++r) {
    for (size_t c = 0; c < table.columns.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", table.columns[c][r]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace apgame
