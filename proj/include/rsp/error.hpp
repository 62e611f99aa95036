// Copyright 2026 The Authors.
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

#ifndef RSP_ERROR_HPP_
#define RSP_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or truncated input file. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::string field = {})
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

// Input parsed fine but violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// File missing, unreadable or unwritable.
class IoError : public Error {
 public:
  using Error::Error;
};

// A solver refused an instance (e.g. too large for enumeration).
class GuardError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsp

#endif  // RSP_ERROR_HPP_
