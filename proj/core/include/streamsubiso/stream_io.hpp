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

#include <streamsubiso/graph_store.hpp>
#include <streamsubiso/match.hpp>
#include <streamsubiso/query.hpp>
#include <streamsubiso/query_dsl.hpp>

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace streamsubiso {

/**
 * Stream wire format, one update per line, tab separated:
 *
 *   ts  op  edge_id  src_id  src_label  edge_type  dst_id  dst_label  [attrs]
 *
 * op is "+" or "-". attrs is "k=v;k=v"; a bare integer value is an integer,
 * anything else a string, optionally double-quoted (quotes allow whitespace,
 * ';' and backslash escapes). Keys prefixed "src." or "dst." set attributes of
 * the endpoint vertex when it is created.
 *
 * Throws ParseError(StreamFormat) with the span of the offending field; the
 * span's line is `line` (0-based).
 */
StreamUpdate parse_stream_record(std::string_view text, std::size_t line = 0);

struct StreamLine {
    /// 1-based line number in the source.
    std::uint64_t line = 0;
    StreamUpdate update;
};

/// Reads every record, skipping blank lines and lines starting with '#'.
std::vector<StreamLine> read_stream(std::istream& in);

/// Inverse of parse_stream_record (without trailing newline).
std::string format_stream_record(const StreamUpdate& update);

/// query  completion_ts  emit_seq  var=vertex...(by var)  edge=edge_id@ts...(by query edge order)
std::string format_result_record(const QueryGraph& query, const MatchResult& result);

}// namespace streamsubiso
