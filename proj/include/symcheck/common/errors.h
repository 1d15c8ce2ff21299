// Copyright 2026 The Symcheck Authors.
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

#ifndef SYMCHECK_COMMON_ERRORS_H_
#define SYMCHECK_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace symcheck {

// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation did not hold (terminal session advanced,
// empty training batch, out-of-range configuration, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

class AlreadyReviewed : public Error {
 public:
  using Error::Error;
};

// Evidence has zero probability under every branch of the spread model.
class InconsistentEvidence : public Error {
 public:
  using Error::Error;
};

class SizeError : public Error {
 public:
  using Error::Error;
};

// Malformed input file or record.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace symcheck

#endif  // SYMCHECK_COMMON_ERRORS_H_
