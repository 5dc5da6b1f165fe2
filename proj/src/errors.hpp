// Copyright 2026 the qdlaser authors
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

namespace qdl {

// Error codes shared with the C API. Values are part of the ABI; append only.
enum class ErrorCode : int {
    ok = 0,
    invalid_arg = 1,
    config = 2,
    quadrature = 3,
    singular = 4,
    no_convergence = 5,
    negative_rate = 6,
    io = 7,
    internal = 8,
};

// Stable lowercase code names, shared by diagnostics and the C API.
inline const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::ok: return "ok";
        case ErrorCode::invalid_arg: return "invalid_arg";
        case ErrorCode::config: return "config";
        case ErrorCode::quadrature: return "quadrature";
        case ErrorCode::singular: return "singular";
        case ErrorCode::no_convergence: return "no_convergence";
        case ErrorCode::negative_rate: return "negative_rate";
        case ErrorCode::io: return "io";
        case ErrorCode::internal: return "internal";
    }
    return "?";
}

class QdlError : public std::runtime_error {
  public:
    QdlError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

struct InvalidArgError : QdlError {
    explicit InvalidArgError(const std::string& what)
        : QdlError(ErrorCode::invalid_arg, what) {}
};

struct ConfigError : QdlError {
    explicit ConfigError(const std::string& what)
        : QdlError(ErrorCode::config, what) {}
};

struct QuadratureError : QdlError {
    explicit QuadratureError(const std::string& what)
        : QdlError(ErrorCode::quadrature, what) {}
};

struct SingularError : QdlError {
    explicit SingularError(const std::string& what)
        : QdlError(ErrorCode::singular, what) {}
};

struct NoConvergenceError : QdlError {
    explicit NoConvergenceError(const std::string& what)
        : QdlError(ErrorCode::no_convergence, what) {}
};

struct NegativeRateError : QdlError {
    explicit NegativeRateError(const std::string& what)
        : QdlError(ErrorCode::negative_rate, what) {}
};

struct IoError : QdlError {
    explicit IoError(const std::string& what) : QdlError(ErrorCode::io, what) {}
};

struct InternalError : QdlError {
    explicit InternalError(const std::string& what)
        : QdlError(ErrorCode::internal, what) {}
};

}  // namespace qdl
