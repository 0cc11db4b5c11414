/*
 * Copyright 2026 The hierembed Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HIEREMBED_ERRORS_H_
#define HIEREMBED_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hierembed {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line == 0 ? message
                        : "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class TaxonomyError : public Error {
 public:
  enum class Kind {
    kCycle,
    kMultipleRoots,
    kNoRoot,
    kUnknownNode,
    kDuplicateEdge,
    kDuplicateClass,
    kNoClasses,
    kDegenerateHeight,
    kNoRootPath,
  };

  TaxonomyError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Numerical failure: unrealizable similarities, singular systems, solver
// non-convergence, divergence during training.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace hierembed

#endif  // HIEREMBED_ERRORS_H_
