// Copyright 2026 The dpblogs Authors
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

#include "dpblogs/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "dpblogs/errors.h"

namespace dpblogs {
namespace {

void DumpTo(const Json& value, int indent, int level, std::string& out) {
  const auto newline = [&](int depth) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<size_t>(indent * depth), ' ');
  };
  switch (value.type()) {
    case Json::value_t::number_float: {
      const double v = value.get<double>();
      out += std::isfinite(v) ? FormatDouble(v) : "null";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        DumpTo(item, indent, level + 1, out);
      }
      newline(level);
      out += ']';
      return;
    }
    case Json::value_t::object: {
      if (value.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out += ',';
        first = false;
        newline(level + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        DumpTo(item, indent, level + 1, out);
      }
      newline(level);
      out += '}';
      return;
    }
    default:
      out += value.dump();
  }
}

double ParseCsvField(std::string_view field, size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
    field.remove_prefix(1);
  }
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                            field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() ||
      ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw ValidationError("gradient CSV line " + std::to_string(line) +
                          ": '" + std::string(field) +
                          "' is not a finite decimal number");
  }
  return value;
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", kSignificantDigits, value);
  return buf;
}

std::string DumpJson(const Json& value, int indent) {
  std::string out;
  DumpTo(value, indent, 0, out);
  return out;
}

ModelSpec ParseModelSpec(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("model spec is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object() || !doc.contains("groups") ||
      !doc["groups"].is_array()) {
    throw ValidationError(
        "model spec must be an object with a \"groups\" array");
  }
  std::vector<ParameterGroup> groups;
  for (const auto& item : doc["groups"]) {
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string() || !item.contains("dim") ||
        !item["dim"].is_number_integer() || item["dim"].get<int64_t>() < 1) {
      throw ValidationError(
          "each model group needs a string \"name\" and an integer "
          "\"dim\" >= 1");
    }
    groups.push_back({item["name"].get<std::string>(),
                      static_cast<size_t>(item["dim"].get<int64_t>())});
  }
  return ModelSpec(std::move(groups));
}

Json ModelSpecToJson(const ModelSpec& model) {
  Json groups = Json::array();
  for (const auto& g : model.groups()) {
    groups.push_back({{"name", g.name}, {"dim", g.dim}});
  }
  return {{"groups", groups}};
}

Json BlockPlanToJson(const BlockPlan& plan) {
  return {{"block_sizes", plan.block_sizes},
          {"per_group_epsilon", plan.per_group_epsilon},
          {"epsilon_per_step", plan.epsilon_per_step},
          {"epsilon_total", plan.epsilon_total},
          {"target_gap", plan.target_gap},
          {"warnings", plan.warnings}};
}

Json BoundReportToJson(const BoundReport& report) {
  Json out = {{"name", report.name},
              {"value", report.value},
              {"inputs", report.inputs}};
  if (report.diagnostic) out["diagnostic"] = *report.diagnostic;
  if (!report.details.empty()) out["details"] = report.details;
  if (!report.warnings.empty()) out["warnings"] = report.warnings;
  return out;
}

std::vector<std::vector<double>> ParseGradientCsv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const size_t comma = rest.find(',');
      row.push_back(ParseCsvField(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteGradientCsv(std::ostream& out,
                      const std::vector<std::vector<double>>& rows) {
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      out << FormatDouble(row[i]);
    }
    out << '\n';
  }
}

std::vector<size_t> ParseShape(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("shape is not valid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw ValidationError("shape must be a nonempty JSON array of integers");
  }
  std::vector<size_t> shape;
  for (const auto& extent : doc) {
    if (!extent.is_number_integer() || extent.get<int64_t>() < 1) {
      throw ValidationError("shape extents must be positive integers");
    }
    shape.push_back(static_cast<size_t>(extent.get<int64_t>()));
  }
  return shape;
}

}  // namespace dpblogs
