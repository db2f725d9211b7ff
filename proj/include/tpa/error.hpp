/*
 * Copyright 2026 The TPA Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TPA_ERROR_HPP
#define TPA_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tpa {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Position in a source text, 1-based.
struct SourceLocation {
  std::size_t line = 0;
  std::size_t column = 0;

  std::string str() const {
    return std::to_string(line) + ":" + std::to_string(column);
  }
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, SourceLocation where)
      : Error(where.str() + ": " + what), where_(where) {}

  const SourceLocation& where() const { return where_; }

 private:
  SourceLocation where_;
};

/// A term violates a precondition (open, unguarded, non-regular, ...).
class IllFormedTerm : public Error {
 public:
  using Error::Error;
};

/// A state or subset budget ran out. Callers turn this into an
/// Incomplete verdict rather than a crash.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Operation called on inputs that violate its contract.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace tpa

#endif  // TPA_ERROR_HPP
