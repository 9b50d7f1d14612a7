// Copyright 2026 The noknow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NOKNOW_ERRORS_HPP
#define NOKNOW_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace noknow {

enum class ErrorKind {
    Dimension,
    Model,
    State,
    Numerical,
    Index,
    Config,
    Record,
    Resource,
    Solver,
    NonHermitianChannel,
    Angle,
    NonUnitary,
    NoQuadrature,
    Parse,
    Validation,
};

std::string_view error_kind_name(ErrorKind kind);

/// Base of every exception thrown by the library. The kind is what the CLI maps to
/// an exit code; the concrete subclass is what callers catch.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message) : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

template <ErrorKind K>
class KindError : public Error {
  public:
    explicit KindError(const std::string &message) : Error(K, message) {}
};

using DimensionError = KindError<ErrorKind::Dimension>;
using ModelError = KindError<ErrorKind::Model>;
using StateError = KindError<ErrorKind::State>;
using NumericalError = KindError<ErrorKind::Numerical>;
using IndexError = KindError<ErrorKind::Index>;
using ConfigError = KindError<ErrorKind::Config>;
using RecordError = KindError<ErrorKind::Record>;
using ResourceError = KindError<ErrorKind::Resource>;
using SolverError = KindError<ErrorKind::Solver>;
using NonHermitianChannelError = KindError<ErrorKind::NonHermitianChannel>;
using AngleError = KindError<ErrorKind::Angle>;
using NonUnitaryError = KindError<ErrorKind::NonUnitary>;
using NoQuadratureError = KindError<ErrorKind::NoQuadrature>;
using ParseError = KindError<ErrorKind::Parse>;
using ValidationError = KindError<ErrorKind::Validation>;

/// Throws the concrete exception type matching `kind`.
[[noreturn]] void throw_error(ErrorKind kind, const std::string &message);

/// Re-throws `e` as the same concrete type with `context` prepended to its message.
[[noreturn]] void rethrow_with_context(const Error &e, std::string_view context);

}  // namespace noknow

#endif  // NOKNOW_ERRORS_HPP
