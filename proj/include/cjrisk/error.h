// Copyright 2026 The cjrisk Authors.
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

#ifndef CJRISK_ERROR_H_
#define CJRISK_ERROR_H_

#include <stdexcept>
#include <string>

namespace cjrisk {

// Root of every domain failure raised by the library. The CLI maps these to
// exit code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a schema or shape contract (unknown attribute, level out of
// range, dimension mismatch).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Caller asked for something the algorithm cannot be configured to do, such
// as a design smaller than the number of model columns.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Every exchange restart started from (or collapsed into) a singular
// information matrix.
class DegenerateCandidateError : public Error {
 public:
  using Error::Error;
};

class ImpossiblePairingError : public Error {
 public:
  using Error::Error;
};

// Difference matrix is rank deficient. `what()` names the collinear
// attributes.
class IdentifiabilityError : public Error {
 public:
  using Error::Error;
};

// Likelihood is unbounded along some direction. `what()` names the diverging
// attribute.
class SeparationError : public Error {
 public:
  using Error::Error;
};

// Alpha model cannot be evaluated (all weights zero, missing attribute).
class ModelError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed file. Carries the offending file, line and field when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, int line, const std::string& field,
             const std::string& message)
      : Error(Format(file, line, field, message)),
        file_(file),
        line_(line),
        field_(field) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  static std::string Format(const std::string& file, int line,
                            const std::string& field,
                            const std::string& message) {
    std::string out = file;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += " [" + field + "]";
    return out + ": " + message;
  }

  std::string file_;
  int line_;
  std::string field_;
};

// Cross-reference between bundle components does not resolve.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Service asked to act without the state it needs (no plan loaded).
class ServiceStateError : public Error {
 public:
  using Error::Error;
};

// Uniqueness or ordering rule violated: duplicate open session, repeated
// submission for a cursor, or a submission against a completed survey.
class ConflictError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace cjrisk

#endif  // CJRISK_ERROR_H_
