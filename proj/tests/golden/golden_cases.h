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

// Golden-file runner shared by the gtest suite and the acceptance binary.
// Each case in cases.txt has <name>.out (stdout, then stderr after a
// "--- stderr" line) and <name>.code.

#ifndef DPBLOGS_TESTS_GOLDEN_GOLDEN_CASES_H_
#define DPBLOGS_TESTS_GOLDEN_GOLDEN_CASES_H_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dpblogs/cli.h"

namespace dpblogs::golden {

struct Case {
  std::string name;
  std::vector<std::string> args;
};

inline std::string Trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t");
  const size_t b = s.find_last_not_of(" \t\r");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

inline std::vector<Case> LoadCases(const std::string& dir) {
  std::ifstream in(dir + "/cases.txt");
  std::vector<Case> cases;
  std::string line;
  while (std::getline(in, line)) {
    if (Trim(line).empty() || line[0] == '#') continue;
    const size_t bar = line.find('|');
    Case c;
    c.name = Trim(line.substr(0, bar));
    c.args.push_back("dpblogs");
    std::istringstream words(line.substr(bar + 1));
    std::string word;
    while (words >> word) {
      for (size_t at; (at = word.find("@DIR@")) != std::string::npos;) {
        word.replace(at, 5, dir);
      }
      c.args.push_back(word);
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

// Exit code line followed by stdout and stderr.
inline std::string Render(const Case& c) {
  std::ostringstream out, err;
  const int code = RunCli(c.args, out, err);
  return "exit " + std::to_string(code) + "\n" + out.str() +
         "--- stderr\n" + err.str();
}

inline std::string ReadExpected(const std::string& dir, const Case& c) {
  std::ifstream in(dir + "/" + c.name + ".golden", std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace dpblogs::golden

#endif  // DPBLOGS_TESTS_GOLDEN_GOLDEN_CASES_H_
