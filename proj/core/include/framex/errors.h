// Copyright 2026 The framex Authors.
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

#ifndef FRAMEX_ERRORS_H_
#define FRAMEX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace framex {

// Every failure raised by the library derives from Error. The CLI maps the
// three concrete kinds onto exit codes 2, 3 and 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed input (files, parameters).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A configured work or size budget would be exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace framex

#endif  // FRAMEX_ERRORS_H_
