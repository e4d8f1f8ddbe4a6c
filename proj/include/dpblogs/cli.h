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

#ifndef DPBLOGS_CLI_H_
#define DPBLOGS_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

namespace dpblogs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumericDomain = 2;

// Runs the `dpblogs` command line. args[0] is the program name. Results go
// to `out`, error messages to `err`.
int RunCli(std::span<const std::string> args, std::ostream& out,
           std::ostream& err);

}  // namespace dpblogs

#endif  // DPBLOGS_CLI_H_
