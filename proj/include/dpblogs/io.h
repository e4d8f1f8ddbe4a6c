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

// File formats: ModelSpec / BlockPlan / BoundReport JSON, gradient CSV, and
// the fixed 12-significant-digit number formatting every output uses.

#ifndef DPBLOGS_IO_H_
#define DPBLOGS_IO_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "dpblogs/accountant.h"
#include "dpblogs/bounds.h"

namespace dpblogs {

inline constexpr int kSignificantDigits = 12;

// printf("%.12g"); non-finite values render as "inf", "-inf" or "nan".
std::string FormatDouble(double value);

// Serializes with FormatDouble for floats so output is byte-stable across
// platforms. Non-finite floats become null. Compact unless indent >= 0.
std::string DumpJson(const Json& value, int indent = -1);

// {"groups":[{"name":"<string>","dim":<int>}, ...]}
ModelSpec ParseModelSpec(std::string_view text);
Json ModelSpecToJson(const ModelSpec& model);

Json BlockPlanToJson(const BlockPlan& plan);
Json BoundReportToJson(const BoundReport& report);

// One gradient per line, comma separated finite decimals. Blank lines are
// skipped.
std::vector<std::vector<double>> ParseGradientCsv(std::istream& in);
void WriteGradientCsv(std::ostream& out,
                      const std::vector<std::vector<double>>& rows);

// JSON array of positive integers, e.g. "[2,3]".
std::vector<size_t> ParseShape(std::string_view text);

}  // namespace dpblogs

#endif  // DPBLOGS_IO_H_
