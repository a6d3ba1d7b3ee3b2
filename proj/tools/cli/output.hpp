// Copyright 2026 The tragame Authors
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

#ifndef TRAGAME_TOOLS_OUTPUT_HPP_
#define TRAGAME_TOOLS_OUTPUT_HPP_

// Tabular output shared by the CLI subcommands.
//
// CSV files start with '#' comment lines (tool version, command, parameters,
// generation time) followed by a column header. JSON-lines files start with a
// single {"_meta": ...} object carrying the same information. The generation
// time is the only field that varies between identical invocations; see
// comparable_text().

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace tragame::cli {

enum class Format { kCsv, kJsonLines };

std::string_view file_extension(Format format);

using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

struct OutputHeader {
  std::string command;
  std::vector<std::pair<std::string, std::string>> params;

  void add(std::string key, std::string value) {
    params.emplace_back(std::move(key), std::move(value));
  }
};

// Shortest round-trip decimal form.
std::string format_double(double value);

// UTC timestamp; honours SOURCE_DATE_EPOCH when set.
std::string generation_timestamp();

class TableWriter {
 public:
  TableWriter(std::ostream& out, Format format, const OutputHeader& header,
              std::vector<std::string> columns);

  void row(const std::vector<Cell>& cells);

 private:
  std::ostream& out_;
  Format format_;
  std::vector<std::string> columns_;
};

// Drops the generation timestamp so that two outputs can be compared
// byte for byte.
std::string comparable_text(std::string_view text);

}  // namespace tragame::cli

#endif  // TRAGAME_TOOLS_OUTPUT_HPP_
