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

#include <streamsubiso/query.hpp>
#include <streamsubiso/types.hpp>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace streamsubiso {

/// 0-based position in the query text.
struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;

    bool operator==(const SourceSpan&) const = default;
};

/// Failure while reading query text. The message is prefixed with the 1-based "line:column".
class ParseError : public Error {
  public:
    ParseError(ErrorCode code, SourceSpan span, const std::string& detail);

    [[nodiscard]] const SourceSpan& span() const noexcept { return span_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

  private:
    SourceSpan span_;
    std::string detail_;
};

/*
 * Grammar:
 *
 *   query      := "query" IDENT "{" decl* "}"
 *   decl       := vertexDecl | edgeDecl | constraint
 *   vertexDecl := "vertex" IDENT ":" IDENT [ "(" pred ("," pred)* ")" ] ";"
 *   edgeDecl   := "edge" IDENT ":" IDENT "-" IDENT "->" IDENT [ "(" pred ("," pred)* ")" ] [ "order" INT ] ";"
 *   pred       := IDENT CMP literal            CMP := "=" | "!=" | "<" | "<=" | ">" | ">="
 *   constraint := "constraint" ( "window" INT | "cluster_gap" INT ("time"|"updates") | "before" IDENT IDENT ) ";"
 *
 * Literals are integers or double-quoted strings with backslash escapes.
 * "#" starts a comment running to the end of the line. Edges carrying
 * distinct "order" ranks are ordered pairwise by rank.
 */

/// Parses exactly one query block; the result passes validate().
QueryGraph parse_query(std::string_view text);

/// Parses a query file holding one or more query blocks with distinct names.
std::vector<QueryGraph> parse_queries(std::string_view text);

/// Canonical text for a valid query: vertices, edges, then explicit "before" pairs and limits.
std::string unparse(const QueryGraph& query);

}// namespace streamsubiso
