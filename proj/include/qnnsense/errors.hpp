// Copyright 2026 The qnnsense Authors
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
/**
 * @file
 * Exception hierarchy shared by every module. Each error kind maps to a
 * process exit status used by the command-line front end.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qnnsense {

/// Process exit statuses.
enum class ExitStatus : int {
    Success = 0,
    CheckFailed = 1,
    Usage = 2,
    Numeric = 3,
    Resource = 4,
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual ExitStatus status() const noexcept {
        return ExitStatus::Numeric;
    }
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] ExitStatus status() const noexcept override {
        return ExitStatus::Usage;
    }
};

/// Shapes or dimensions that do not fit together.
class StructuralError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] ExitStatus status() const noexcept override {
        return ExitStatus::Usage;
    }
};

class UsageError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] ExitStatus status() const noexcept override {
        return ExitStatus::Usage;
    }
};

/// Non-finite values or an undefined quantity (e.g. zero response slope).
class NumericError : public Error {
  public:
    using Error::Error;
};

/// Krylov propagation failed to reach the requested accuracy.
class ConvergenceError : public NumericError {
  public:
    ConvergenceError(const std::string &what, double residual)
        : NumericError(what + " (residual estimate " +
                       std::to_string(residual) + ")"),
          residual_(residual) {}
    [[nodiscard]] double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// The optimiser found its maximum on the edge of the search interval.
class BracketError : public NumericError {
  public:
    using NumericError::NumericError;
};

/// Problem size beyond a documented simulation bound.
class ResourceError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] ExitStatus status() const noexcept override {
        return ExitStatus::Resource;
    }
};

class IoError : public Error {
  public:
    using Error::Error;
    [[nodiscard]] ExitStatus status() const noexcept override {
        return ExitStatus::CheckFailed;
    }
};

} // namespace qnnsense
