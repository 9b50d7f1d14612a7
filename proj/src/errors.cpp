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

#include "noknow/errors.hpp"

namespace noknow {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Dimension: return "dimension";
        case ErrorKind::Model: return "model";
        case ErrorKind::State: return "state";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::Index: return "index";
        case ErrorKind::Config: return "config";
        case ErrorKind::Record: return "record";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::Solver: return "solver";
        case ErrorKind::NonHermitianChannel: return "non_hermitian_channel";
        case ErrorKind::Angle: return "angle";
        case ErrorKind::NonUnitary: return "non_unitary";
        case ErrorKind::NoQuadrature: return "no_quadrature";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
    }
    return "unknown";
}

void throw_error(ErrorKind kind, const std::string &message) {
    switch (kind) {
        case ErrorKind::Dimension: throw DimensionError(message);
        case ErrorKind::Model: throw ModelError(message);
        case ErrorKind::State: throw StateError(message);
        case ErrorKind::Numerical: throw NumericalError(message);
        case ErrorKind::Index: throw IndexError(message);
        case ErrorKind::Config: throw ConfigError(message);
        case ErrorKind::Record: throw RecordError(message);
        case ErrorKind::Resource: throw ResourceError(message);
        case ErrorKind::Solver: throw SolverError(message);
        case ErrorKind::NonHermitianChannel: throw NonHermitianChannelError(message);
        case ErrorKind::Angle: throw AngleError(message);
        case ErrorKind::NonUnitary: throw NonUnitaryError(message);
        case ErrorKind::NoQuadrature: throw NoQuadratureError(message);
        case ErrorKind::Parse: throw ParseError(message);
        case ErrorKind::Validation: throw ValidationError(message);
    }
    throw Error(kind, message);
}

void rethrow_with_context(const Error &e, std::string_view context) {
    throw_error(e.kind(), std::string(context) + ": " + e.what());
}

}  // namespace noknow
