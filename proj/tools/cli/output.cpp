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

#include "output.hpp"

#include <charconv>
#include <cstdlib>
#include <ctime>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tragame::cli {

using nlohmann::ordered_json;

std::string_view file_extension(Format format) {
  return format == Format::kCsv ? "csv" : "jsonl";
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string generation_timestamp() {
  std::time_t now = std::time(nullptr);
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    now = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  }
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

namespace {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string csv_cell(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(bool b) const { return b ? "1" : "0"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& s) const { return csv_field(s); }
  };
  return std::visit(Visitor{}, cell);
}

ordered_json json_cell(const Cell& cell) {
  struct Visitor {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(bool b) const { return b; }
    ordered_json operator()(std::int64_t v) const { return v; }
    ordered_json operator()(std::uint64_t v) const { return v; }
    ordered_json operator()(double v) const { return v; }
    ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, cell);
}

constexpr std::string_view kGeneratedPrefix = "# generated: ";

}  // namespace

TableWriter::TableWriter(std::ostream& out, Format format, const OutputHeader& header,
                         std::vector<std::string> columns)
    : out_(out), format_(format), columns_(std::move(columns)) {
  if (format_ == Format::kCsv) {
    out_ << "# tragame " << TRAGAME_VERSION << '\n';
    out_ << "# command: " << header.command << '\n';
    for (const auto& [key, value] : header.params) out_ << "# " << key << ": " << value << '\n';
    out_ << kGeneratedPrefix << generation_timestamp() << '\n';
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      out_ << (c ? "," : "") << csv_field(columns_[c]);
    }
    out_ << '\n';
  } else {
    ordered_json meta;
    meta["tool"] = "tragame";
    meta["version"] = TRAGAME_VERSION;
    meta["command"] = header.command;
    ordered_json params = ordered_json::object();
    for (const auto& [key, value] : header.params) params[key] = value;
    meta["params"] = std::move(params);
    meta["columns"] = columns_;
    meta["generated"] = generation_timestamp();
    out_ << ordered_json{{"_meta", meta}}.dump() << '\n';
  }
}

void TableWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_.size()) {
    throw std::logic_error("row has " + std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(columns_.size()));
  }
  if (format_ == Format::kCsv) {
    for (std::size_t c = 0; c < cells.size(); ++c) out_ << (c ? "," : "") << csv_cell(cells[c]);
    out_ << '\n';
  } else {
    ordered_json obj = ordered_json::object();
    for (std::size_t c = 0; c < cells.size(); ++c) obj[columns_[c]] = json_cell(cells[c]);
    out_ << obj.dump() << '\n';
  }
}

std::string comparable_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string result;
  for (std::string line; std::getline(in, line);) {
    if (line.starts_with(kGeneratedPrefix)) continue;
    if (line.starts_with("{\"_meta\"")) {
      auto meta = ordered_json::parse(line);
      meta["_meta"].erase("generated");
      line = meta.dump();
    }
    result += line;
    result += '\n';
  }
  return result;
}

}  // namespace tragame::cli
