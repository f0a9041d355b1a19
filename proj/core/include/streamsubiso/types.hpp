/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace streamsubiso {

/// Logical time supplied by the stream producer. The engine never reads a clock.
using Timestamp = std::int64_t;

/// 1-based position of an update in processing order; 0 means "not from the stream".
using Seq = std::uint64_t;

inline constexpr Timestamp kMaxTimestamp = INT64_MAX;

/// Attribute value: integer, decimal or string.
using Scalar = std::variant<std::int64_t, double, std::string>;
using Attributes = std::map<std::string, Scalar, std::less<>>;

std::string to_string(const Scalar& value);

bool is_numeric(const Scalar& value);

enum class ErrorCode {
    DuplicateEdgeId,
    UnknownEdgeId,
    LabelConflict,
    InvalidUpdate,
    InvalidQuery,
    DuplicateQueryName,
    UnknownQuery,
    InvalidGate,
    OutOfOrderTimestamp,
    UnknownQueryState,
    ClusterGapUnitUnsupported,
    InsufficientData,
    SyntaxError,
    UndefinedVariable,
    DuplicateName,
    StreamFormat,
};

std::string_view to_string(ErrorCode code);

/**
 * Base exception for every failure the library reports. `origin` carries a
 * caller-supplied tag (the CLI uses the stream line number) when the failing
 * update was submitted with one.
 */
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message, std::optional<std::uint64_t> origin = std::nullopt)
        : std::runtime_error(message), code_(code), origin_(origin) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] std::optional<std::uint64_t> origin() const noexcept { return origin_; }

  private:
    ErrorCode code_;
    std::optional<std::uint64_t> origin_;
};

}// namespace streamsubiso
