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

#include <streamsubiso/stream_io.hpp>

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace streamsubiso {

namespace {

struct Field {
    std::string_view text;
    std::size_t column = 0;
};

std::vector<Field> split_tabs(std::string_view text) {
    std::vector<Field> out;
    std::size_t start = 0;
    while (true) {
        auto tab = text.find('\t', start);
        out.push_back({text.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start), start});
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return out;
}

[[noreturn]] void fail(std::size_t line, std::size_t column, std::size_t offset, const std::string& detail) {
    throw ParseError(ErrorCode::StreamFormat, SourceSpan{line, column, offset}, detail);
}

std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    if (s.empty()) return std::nullopt;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

void parse_attrs(const Field& f, std::size_t line, StreamUpdate& u) {
    std::string_view s = f.text;
    std::size_t i = 0;
    auto at = [&](std::size_t pos) { return f.column + pos; };
    while (i < s.size()) {
        const std::size_t key_start = i;
        while (i < s.size() && s[i] != '=' && s[i] != ';') ++i;
        std::string key(s.substr(key_start, i - key_start));
        if (key.empty()) fail(line, at(key_start), at(key_start), "empty attribute key");
        if (i == s.size() || s[i] != '=') fail(line, at(i), at(i), "expected '=' after attribute key '" + key + "'");
        ++i;
        Scalar value;
        const std::size_t value_start = i;
        if (i < s.size() && s[i] == '"') {
            std::string str;
            ++i;
            bool closed = false;
            while (i < s.size()) {
                char c = s[i++];
                if (c == '"') {
                    closed = true;
                    break;
                }
                if (c == '\\') {
                    if (i == s.size()) break;
                    char e = s[i++];
                    switch (e) {
                        case 'n': str += '\n'; break;
                        case 't': str += '\t'; break;
                        case 'r': str += '\r'; break;
                        case '"':
                        case '\\': str += e; break;
                        default: fail(line, at(i - 2), at(i - 2), std::string("unknown escape '\\") + e + "'");
                    }
                    continue;
                }
                str += c;
            }
            if (!closed) fail(line, at(value_start), at(value_start), "unterminated quoted value");
            if (i < s.size() && s[i] != ';') fail(line, at(i), at(i), "expected ';' after quoted value");
            value = std::move(str);
        } else {
            while (i < s.size() && s[i] != ';') ++i;
            std::string_view raw = s.substr(value_start, i - value_start);
            if (raw.find_first_of(" \"\r\n") != std::string_view::npos) {
                fail(line, at(value_start), at(value_start), "unquoted value for '" + key + "' contains whitespace or quotes");
            }
            if (auto n = parse_int(raw)) {
                value = *n;
            } else {
                value = std::string(raw);
            }
        }
        Attributes* target = &u.attributes;
        std::string name = key;
        if (key.starts_with("src.")) {
            target = &u.src.attributes;
            name = key.substr(4);
        } else if (key.starts_with("dst.")) {
            target = &u.dst.attributes;
            name = key.substr(4);
        }
        if (name.empty()) fail(line, at(key_start), at(key_start), "empty attribute key");
        if (!target->emplace(name, std::move(value)).second) {
            fail(line, at(key_start), at(key_start), "duplicate attribute '" + key + "'");
        }
        if (i < s.size()) ++i;// ';'
    }
}

bool needs_quotes(const std::string& s) {
    if (s.empty() || parse_int(s)) return true;
    return s.find_first_of(" \t\r\n;\"\\") != std::string::npos;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out + "\"";
}

void append_attrs(std::string& out, const Attributes& attrs, std::string_view prefix, bool& first) {
    for (const auto& [k, v] : attrs) {
        if (!first) out += ';';
        first = false;
        out += prefix;
        out += k;
        out += '=';
        if (const auto* s = std::get_if<std::string>(&v)) {
            out += needs_quotes(*s) ? quote(*s) : *s;
        } else if (std::holds_alternative<double>(v)) {
            // Decimals have no wire type; they travel as strings.
            out += quote(to_string(v));
        } else {
            out += to_string(v);
        }
    }
}

}// namespace

StreamUpdate parse_stream_record(std::string_view text, std::size_t line) {
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    auto fields = split_tabs(text);
    if (fields.size() != 8 && fields.size() != 9) {
        fail(line, 0, 0, "expected 8 or 9 tab-separated fields, found " + std::to_string(fields.size()));
    }
    StreamUpdate u;
    auto ts = parse_int(fields[0].text);
    if (!ts || *ts < 0) fail(line, fields[0].column, fields[0].column, "timestamp must be a non-negative integer");
    u.timestamp = *ts;
    if (fields[1].text == "+") {
        u.op = UpdateOp::Insert;
    } else if (fields[1].text == "-") {
        u.op = UpdateOp::Delete;
    } else {
        fail(line, fields[1].column, fields[1].column, "op must be '+' or '-'");
    }
    static constexpr const char* kNames[] = {"", "", "edge_id", "src_id", "src_label", "edge_type", "dst_id", "dst_label"};
    for (std::size_t i = 2; i < 8; ++i) {
        if (fields[i].text.empty()) fail(line, fields[i].column, fields[i].column, std::string(kNames[i]) + " is empty");
    }
    u.edge_id = fields[2].text;
    u.src.id = fields[3].text;
    u.src.label = fields[4].text;
    u.edge_type = fields[5].text;
    u.dst.id = fields[6].text;
    u.dst.label = fields[7].text;
    if (fields.size() == 9) parse_attrs(fields[8], line, u);
    return u;
}

std::vector<StreamLine> read_stream(std::istream& in) {
    std::vector<StreamLine> out;
    std::string text;
    std::uint64_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        std::string_view view = text;
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.empty() || view.front() == '#') continue;
        out.push_back({line, parse_stream_record(view, line - 1)});
    }
    return out;
}

std::string format_stream_record(const StreamUpdate& u) {
    std::string out = std::to_string(u.timestamp);
    out += u.op == UpdateOp::Insert ? "\t+\t" : "\t-\t";
    for (const std::string* f : {&u.edge_id, &u.src.id, &u.src.label, &u.edge_type, &u.dst.id, &u.dst.label}) {
        out += *f;
        out += '\t';
    }
    out.pop_back();
    if (!u.attributes.empty() || !u.src.attributes.empty() || !u.dst.attributes.empty()) {
        out += '\t';
        bool first = true;
        append_attrs(out, u.attributes, "", first);
        append_attrs(out, u.src.attributes, "src.", first);
        append_attrs(out, u.dst.attributes, "dst.", first);
    }
    return out;
}

std::string format_result_record(const QueryGraph& query, const MatchResult& result) {
    std::ostringstream out;
    out << result.query_name << '\t' << result.completion_ts << '\t' << result.emit_seq;
    std::vector<std::size_t> order(query.vertices.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return query.vertices[a].var < query.vertices[b].var; });
    for (std::size_t v : order) out << '\t' << query.vertices[v].var << '=' << result.embedding.vertices.at(v);
    for (std::size_t e = 0; e < query.edges.size(); ++e) {
        const auto& b = result.embedding.edges.at(e);
        out << '\t' << query.edges[e].name << '=' << b.edge_id << '@' << b.timestamp;
    }
    return out.str();
}

}// namespace streamsubiso
