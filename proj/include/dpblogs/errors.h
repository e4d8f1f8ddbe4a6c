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

#ifndef DPBLOGS_ERRORS_H_
#define DPBLOGS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpblogs {

// Raised when an argument violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when inputs are well-formed but the requested quantity does not
// exist (e.g. no finite solution) or a computation left its numeric domain.
class NumericDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace dpblogs

#endif  // DPBLOGS_ERRORS_H_
