// Copyright 2026 The qcp authors
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

// The provenance envelope every CLI run emits, plus the CSV helpers.
// Output is locale-free and byte-reproducible: numbers go through
// std::to_chars, JSON keys are ordered, and the timestamp honors
// SOURCE_DATE_EPOCH so replays of the same command line are identical.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcp/version.hpp"

namespace qcp {

/// Shortest round-trip decimal form, '.' separator, locale-free.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// ISO-8601 UTC timestamp.  SOURCE_DATE_EPOCH, when set, pins it for
/// byte-identical replays.
inline std::string run_timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// One CLI invocation: inputs, outputs, and where each number came from.
struct RunRecord {
  std::string command;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json outputs = nlohmann::json::object();
  std::string formula_path;
  std::optional<std::uint64_t> seed;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["formula_path"] = formula_path;
    if (seed) j["seed"] = *seed;
    j["version"] = kVersion;
    j["timestamp"] = run_timestamp();
    return j;
  }
};

/// A numeric output tagged with the formula that produced it.
inline nlohmann::json tagged(double value, const std::string& formula_path) {
  return nlohmann::json{{"value", value}, {"formula_path", formula_path}};
}

/// Minimal RFC-4180 writer: header row, '.' decimal separator, LF endings.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(cells[i]);
    }
    out_ << '\n';
  }

  static std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string quoted = "\"";
    for (char c : cell) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    return quoted;
  }

 private:
  std::ostream& out_;
};

}  // namespace qcp
