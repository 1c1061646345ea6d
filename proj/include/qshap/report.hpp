// Copyright 2026 The qshap Authors
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

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qshap/errors.hpp"

namespace qshap {

/// One estimate compared against the exact value.
struct ResultRow {
  std::string scenario;
  unsigned ell = 0;
  std::string method;
  unsigned player = 0;
  double estimate = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
  double bound = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "scenario,ell,method,player,estimate,exact,abs_error,bound,seed";

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    os << r.scenario << ',' << r.ell << ',' << r.method << ',' << r.player << ',' << format_double(r.estimate) << ','
       << format_double(r.exact) << ',' << format_double(r.abs_error) << ',' << format_double(r.bound) << ','
       << r.seed << '\n';
  }
}

inline std::vector<ResultRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw ParseError("unexpected CSV header");
  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw ParseError("CSV row needs 9 fields");
    try {
      rows.push_back({f[0], static_cast<unsigned>(std::stoul(f[1])), f[2], static_cast<unsigned>(std::stoul(f[3])),
                      std::stod(f[4]), std::stod(f[5]), std::stod(f[6]), std::stod(f[7]), std::stoull(f[8])});
    } catch (const std::exception&) {
      throw ParseError("bad CSV field in: " + line);
    }
  }
  return rows;
}

inline nlohmann::json rows_to_json(const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ResultRow& r : rows) {
    arr.push_back({{"scenario", r.scenario},
                   {"ell", r.ell},
                   {"method", r.method},
                   {"player", r.player},
                   {"estimate", r.estimate},
                   {"exact", r.exact},
                   {"abs_error", r.abs_error},
                   {"bound", r.bound},
                   {"seed", r.seed}});
  }
  return {{"schema_version", kSchemaVersion}, {"rows", arr}};
}

inline std::vector<ResultRow> rows_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema_version", 0) != kSchemaVersion) throw ParseError("unsupported schema_version");
  std::vector<ResultRow> rows;
  try {
    for (const auto& r : j.at("rows")) {
      rows.push_back({r.at("scenario").get<std::string>(), r.at("ell").get<unsigned>(), r.at("method").get<std::string>(),
                      r.at("player").get<unsigned>(), r.at("estimate").get<double>(), r.at("exact").get<double>(),
                      r.at("abs_error").get<double>(), r.at("bound").get<double>(), r.at("seed").get<std::uint64_t>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad result JSON: ") + e.what());
  }
  return rows;
}

}  // namespace qshap
