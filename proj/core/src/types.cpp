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

#include <streamsubiso/types.hpp>

#include <charconv>
#include <cmath>

namespace streamsubiso {

std::string to_string(const Scalar& value) {
    struct Visitor {
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(double v) const {
            char buf[64];
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
            return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
        }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, value);
}

bool is_numeric(const Scalar& value) { return !std::holds_alternative<std::string>(value); }

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DuplicateEdgeId: return "DuplicateEdgeId";
        case ErrorCode::UnknownEdgeId: return "UnknownEdgeId";
        case ErrorCode::LabelConflict: return "LabelConflict";
        case ErrorCode::InvalidUpdate: return "InvalidUpdate";
        case ErrorCode::InvalidQuery: return "InvalidQuery";
        case ErrorCode::DuplicateQueryName: return "DuplicateQueryName";
        case ErrorCode::UnknownQuery: return "UnknownQuery";
        case ErrorCode::InvalidGate: return "InvalidGate";
        case ErrorCode::OutOfOrderTimestamp: return "OutOfOrderTimestamp";
        case ErrorCode::UnknownQueryState: return "UnknownQueryState";
        case ErrorCode::ClusterGapUnitUnsupported: return "ClusterGapUnitUnsupported";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::UndefinedVariable: return "UndefinedVariable";
        case ErrorCode::DuplicateName: return "DuplicateName";
        case ErrorCode::StreamFormat: return "StreamFormat";
    }
    return "Unknown";
}

}// namespace streamsubiso
