// Copyright 2026 The piezo-rkhs Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace piezo {

/// Root of the library's exception hierarchy.
///
/// Two families exist and the CLI maps them onto its exit codes:
/// ValidationError (bad input, exit 1) and NumericalError (a computation
/// that could not be completed, exit 2).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Vector or matrix sizes that do not agree.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Config file problem. `key()` names the offending field ("" when the
/// problem is not tied to a single key, e.g. an unreadable file).
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string key, const std::string& what)
      : ValidationError(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Derived plant is physically meaningless (e.g. non-positive stiffness).
class InvalidModelError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Malformed input file; `row()` is the 1-based line number.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t row, const std::string& what)
      : ValidationError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Gram matrix could not be factorized even after regularization.
class IllConditionedError : public NumericalError {
 public:
  IllConditionedError(double smallest_eigenvalue, const std::string& what)
      : NumericalError(what), smallest_eigenvalue_(smallest_eigenvalue) {}
  double smallest_eigenvalue() const noexcept { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// Lyapunov equation has no symmetric positive definite solution.
class LyapunovError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Integration produced a non-finite state at `time()`.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(double time, const std::string& what)
      : NumericalError(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace piezo
