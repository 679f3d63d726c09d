/* Copyright 2026 The tlk Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef TLK_ERROR_HPP
#define TLK_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlk {

// Byte offsets into parsed input, half open.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed surface syntax, unknown symbols, arity mismatches, NNF violations.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourceSpan span)
      : Error(message + " at " + std::to_string(span.start) + ".." +
              std::to_string(span.end)),
        span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

// Structurally invalid input to an operation (bad model file, wrong fragment,
// precondition of a translation route not met).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed its configured budget. Never a
// verdict: callers must not read this as "false".
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

// A semantic invariant the implementation relies on was observed broken.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace tlk

#endif  // TLK_ERROR_HPP
