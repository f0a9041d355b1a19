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

#include <streamsubiso/query_dsl.hpp>

#include <charconv>
#include <map>
#include <optional>
#include <sstream>

namespace streamsubiso {

namespace {

std::string describe(SourceSpan span, const std::string& detail) {
    return std::to_string(span.line + 1) + ":" + std::to_string(span.column + 1) + ": " + detail;
}

}// namespace

ParseError::ParseError(ErrorCode code, SourceSpan span, const std::string& detail)
    : Error(code, describe(span, detail)), span_(span), detail_(detail) {}

namespace {

enum class Tok { Ident, Int, String, LBrace, RBrace, Colon, Semi, LParen, RParen, Comma, Minus, Arrow, Cmp, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;// identifier name, decoded string, integer digits, or operator spelling
    SourceSpan span;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token tok;
        tok.span = here();
        if (pos_ >= src_.size()) {
            tok.kind = Tok::End;
            return tok;
        }
        const char c = src_[pos_];
        if (is_ident_start(c)) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
            tok.kind = Tok::Ident;
            tok.text = std::string(src_.substr(start, pos_ - start));
            return tok;
        }
        if (c >= '0' && c <= '9') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') advance();
            tok.kind = Tok::Int;
            tok.text = std::string(src_.substr(start, pos_ - start));
            return tok;
        }
        if (c == '"') {
            tok.kind = Tok::String;
            tok.text = read_string(tok.span);
            return tok;
        }
        advance();
        switch (c) {
            case '{': tok.kind = Tok::LBrace; return tok;
            case '}': tok.kind = Tok::RBrace; return tok;
            case ':': tok.kind = Tok::Colon; return tok;
            case ';': tok.kind = Tok::Semi; return tok;
            case '(': tok.kind = Tok::LParen; return tok;
            case ')': tok.kind = Tok::RParen; return tok;
            case ',': tok.kind = Tok::Comma; return tok;
            case '-':
                if (peek_is('>')) {
                    advance();
                    tok.kind = Tok::Arrow;
                    tok.text = "->";
                } else {
                    tok.kind = Tok::Minus;
                    tok.text = "-";
                }
                return tok;
            case '=': tok.kind = Tok::Cmp; tok.text = "="; return tok;
            case '!':
                if (peek_is('=')) {
                    advance();
                    tok.kind = Tok::Cmp;
                    tok.text = "!=";
                    return tok;
                }
                break;
            case '<':
            case '>':
                tok.kind = Tok::Cmp;
                tok.text = std::string(1, c);
                if (peek_is('=')) {
                    advance();
                    tok.text += '=';
                }
                return tok;
            default: break;
        }
        throw ParseError(ErrorCode::SyntaxError, tok.span, "unexpected character " + printable(c));
    }

  private:
    static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

    static std::string printable(char c) {
        auto u = static_cast<unsigned char>(c);
        if (u >= 0x20 && u < 0x7f) return std::string("'") + c + "'";
        const char* hex = "0123456789abcdef";
        return std::string("0x") + hex[u >> 4] + hex[u & 0xf];
    }

    SourceSpan here() const { return SourceSpan{line_, column_, pos_}; }
    bool peek_is(char c) const { return pos_ < src_.size() && src_[pos_] == c; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 0;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            const char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string read_string(SourceSpan start) {
        advance();// opening quote
        std::string out;
        while (true) {
            if (pos_ >= src_.size() || src_[pos_] == '\n') {
                throw ParseError(ErrorCode::SyntaxError, start, "unterminated string literal");
            }
            const char c = src_[pos_];
            if (c == '"') {
                advance();
                return out;
            }
            if (c == '\\') {
                SourceSpan esc = here();
                advance();
                if (pos_ >= src_.size()) {
                    throw ParseError(ErrorCode::SyntaxError, start, "unterminated string literal");
                }
                switch (src_[pos_]) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    default: throw ParseError(ErrorCode::SyntaxError, esc, "unknown escape sequence");
                }
                advance();
                continue;
            }
            out += c;
            advance();
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

struct VarUse {
    std::string name;
    SourceSpan span;
};

struct PendingEdge {
    VarUse src;
    VarUse dst;
    std::optional<std::int64_t> rank;
};

struct PendingBefore {
    VarUse first;
    VarUse second;
};

class Parser {
  public:
    explicit Parser(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

    std::vector<QueryGraph> parse_all() {
        std::vector<QueryGraph> out;
        std::map<std::string, SourceSpan> names;
        do {
            SourceSpan at = cur_.span;
            QueryGraph q = parse_block();
            if (!names.emplace(q.name, at).second) {
                throw ParseError(ErrorCode::DuplicateName, at, "query '" + q.name + "' defined twice");
            }
            out.push_back(std::move(q));
        } while (cur_.kind != Tok::End);
        return out;
    }

    QueryGraph parse_one() {
        QueryGraph q = parse_block();
        if (cur_.kind != Tok::End) {
            throw ParseError(ErrorCode::SyntaxError, cur_.span, "expected end of input after query block");
        }
        return q;
    }

  private:
    Token take() {
        Token t = std::move(cur_);
        cur_ = lexer_.next();
        return t;
    }

    static std::string tok_name(Tok kind) {
        switch (kind) {
            case Tok::Ident: return "identifier";
            case Tok::Int: return "integer";
            case Tok::String: return "string";
            case Tok::LBrace: return "'{'";
            case Tok::RBrace: return "'}'";
            case Tok::Colon: return "':'";
            case Tok::Semi: return "';'";
            case Tok::LParen: return "'('";
            case Tok::RParen: return "')'";
            case Tok::Comma: return "','";
            case Tok::Minus: return "'-'";
            case Tok::Arrow: return "'->'";
            case Tok::Cmp: return "comparison";
            case Tok::End: return "end of input";
        }
        return "token";
    }

    [[noreturn]] void fail_expected(const std::string& what) {
        std::string found = cur_.kind == Tok::Ident ? "'" + cur_.text + "'" : tok_name(cur_.kind);
        throw ParseError(ErrorCode::SyntaxError, cur_.span, "expected " + what + ", found " + found);
    }

    Token expect(Tok kind) {
        if (cur_.kind != kind) fail_expected(tok_name(kind));
        return take();
    }

    void expect_keyword(std::string_view kw) {
        if (cur_.kind != Tok::Ident || cur_.text != kw) fail_expected("'" + std::string(kw) + "'");
        take();
    }

    bool at_keyword(std::string_view kw) const { return cur_.kind == Tok::Ident && cur_.text == kw; }

    std::int64_t parse_int(const Token& t, bool negative) {
        std::uint64_t magnitude = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), magnitude);
        const std::uint64_t limit = negative ? std::uint64_t{1} << 63 : (std::uint64_t{1} << 63) - 1;
        if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || magnitude > limit) {
            throw ParseError(ErrorCode::SyntaxError, t.span, "integer literal out of range");
        }
        if (negative) {
            return magnitude == (std::uint64_t{1} << 63) ? INT64_MIN : -static_cast<std::int64_t>(magnitude);
        }
        return static_cast<std::int64_t>(magnitude);
    }

    Scalar parse_literal() {
        if (cur_.kind == Tok::String) {
            return take().text;
        }
        bool negative = false;
        if (cur_.kind == Tok::Minus) {
            take();
            negative = true;
        }
        if (cur_.kind != Tok::Int) fail_expected("literal");
        Token t = take();
        return parse_int(t, negative);
    }

    std::vector<AttributePredicate> parse_predicates() {
        std::vector<AttributePredicate> preds;
        if (cur_.kind != Tok::LParen) return preds;
        take();
        while (true) {
            AttributePredicate p;
            p.attribute = expect(Tok::Ident).text;
            if (cur_.kind != Tok::Cmp) fail_expected("comparison operator");
            const std::string op = take().text;
            p.cmp = op == "=" ? Comparison::Eq
                  : op == "!=" ? Comparison::Ne
                  : op == "<" ? Comparison::Lt
                  : op == "<=" ? Comparison::Le
                  : op == ">" ? Comparison::Gt
                              : Comparison::Ge;
            p.value = parse_literal();
            preds.push_back(std::move(p));
            if (cur_.kind == Tok::Comma) {
                take();
                continue;
            }
            expect(Tok::RParen);
            return preds;
        }
    }

    std::int64_t parse_positive_int() {
        Token t = expect(Tok::Int);
        return parse_int(t, false);
    }

    QueryGraph parse_block() {
        const SourceSpan query_span = cur_.span;
        expect_keyword("query");
        QueryGraph q;
        q.name = expect(Tok::Ident).text;
        expect(Tok::LBrace);

        std::map<std::string, SourceSpan, std::less<>> decl_spans;// vars and edge names
        std::map<std::string, SourceSpan, std::less<>> edge_spans;
        std::vector<PendingEdge> pending;
        std::vector<PendingBefore> befores;
        std::optional<SourceSpan> window_at, gap_at;

        while (cur_.kind != Tok::RBrace) {
            if (at_keyword("vertex")) {
                take();
                Token var = expect(Tok::Ident);
                expect(Tok::Colon);
                QueryVertex v;
                v.var = var.text;
                v.label = expect(Tok::Ident).text;
                v.predicates = parse_predicates();
                expect(Tok::Semi);
                if (!decl_spans.emplace(v.var, var.span).second) {
                    throw ParseError(ErrorCode::DuplicateName, var.span, "variable '" + v.var + "' declared twice");
                }
                q.vertices.push_back(std::move(v));
            } else if (at_keyword("edge")) {
                take();
                Token name = expect(Tok::Ident);
                expect(Tok::Colon);
                PendingEdge pe;
                Token src = expect(Tok::Ident);
                expect(Tok::Minus);
                Token type = expect(Tok::Ident);
                expect(Tok::Arrow);
                Token dst = expect(Tok::Ident);
                QueryEdge e;
                e.name = name.text;
                e.src_var = src.text;
                e.dst_var = dst.text;
                e.edge_type = type.text;
                e.predicates = parse_predicates();
                if (at_keyword("order")) {
                    take();
                    pe.rank = parse_positive_int();
                }
                expect(Tok::Semi);
                if (!edge_spans.emplace(e.name, name.span).second) {
                    throw ParseError(ErrorCode::DuplicateName, name.span, "edge '" + e.name + "' declared twice");
                }
                pe.src = {src.text, src.span};
                pe.dst = {dst.text, dst.span};
                pending.push_back(std::move(pe));
                q.edges.push_back(std::move(e));
            } else if (at_keyword("constraint")) {
                take();
                if (at_keyword("window")) {
                    SourceSpan at = take().span;
                    if (window_at) throw ParseError(ErrorCode::DuplicateName, at, "window given twice");
                    window_at = at;
                    q.constraints.window = parse_positive_int();
                } else if (at_keyword("cluster_gap")) {
                    SourceSpan at = take().span;
                    if (gap_at) throw ParseError(ErrorCode::DuplicateName, at, "cluster_gap given twice");
                    gap_at = at;
                    ClusterGap gap;
                    gap.gap = parse_positive_int();
                    if (at_keyword("time")) {
                        gap.unit = GapUnit::Time;
                    } else if (at_keyword("updates")) {
                        gap.unit = GapUnit::Updates;
                    } else {
                        fail_expected("'time' or 'updates'");
                    }
                    take();
                    q.constraints.cluster_gap = gap;
                } else if (at_keyword("before")) {
                    take();
                    Token a = expect(Tok::Ident);
                    Token b = expect(Tok::Ident);
                    befores.push_back({{a.text, a.span}, {b.text, b.span}});
                } else {
                    fail_expected("'window', 'cluster_gap' or 'before'");
                }
                expect(Tok::Semi);
            } else {
                fail_expected("'vertex', 'edge', 'constraint' or '}'");
            }
        }
        const SourceSpan close = take().span;

        for (const auto& pe : pending) {
            for (const VarUse* use : {&pe.src, &pe.dst}) {
                if (!decl_spans.contains(use->name)) {
                    throw ParseError(ErrorCode::UndefinedVariable, use->span, "undefined variable '" + use->name + "'");
                }
            }
        }
        for (std::size_t a = 0; a < pending.size(); ++a) {
            for (std::size_t b = 0; b < pending.size(); ++b) {
                if (pending[a].rank && pending[b].rank && *pending[a].rank < *pending[b].rank) {
                    q.constraints.arrival_order.emplace(a, b);
                }
            }
        }
        for (const auto& bf : befores) {
            auto a = q.edge_index(bf.first.name);
            if (!a) throw ParseError(ErrorCode::UndefinedVariable, bf.first.span, "undefined edge '" + bf.first.name + "'");
            auto b = q.edge_index(bf.second.name);
            if (!b) throw ParseError(ErrorCode::UndefinedVariable, bf.second.span, "undefined edge '" + bf.second.name + "'");
            q.constraints.arrival_order.emplace(*a, *b);
        }

        auto report = validate(q);
        if (!report.ok()) {
            const Violation& v = report.violations.front();
            SourceSpan at = query_span;
            if (auto it = decl_spans.find(v.subject); !v.subject.empty() && it != decl_spans.end()) at = it->second;
            if (auto it = edge_spans.find(v.subject); !v.subject.empty() && it != edge_spans.end()) at = it->second;
            if ((v.kind == ViolationKind::NonPositiveWindow || v.kind == ViolationKind::GapExceedsWindow) && window_at) {
                at = *window_at;
            } else if (v.kind == ViolationKind::NonPositiveGap && gap_at) {
                at = *gap_at;
            } else if (v.kind == ViolationKind::NoEdges) {
                at = close;
            }
            throw ParseError(ErrorCode::InvalidQuery, at, "invalid query '" + q.name + "': " + report.summary());
        }
        return q;
    }

    Lexer lexer_;
    Token cur_;
};

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    auto start = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    if (!start(s[0])) return false;
    for (char c : s) {
        if (!start(c) && !(c >= '0' && c <= '9')) return false;
    }
    return true;
}

std::string ident(std::string_view s) {
    if (!is_identifier(s)) {
        throw Error(ErrorCode::InvalidQuery, "'" + std::string(s) + "' cannot be written as an identifier");
    }
    return std::string(s);
}

std::string literal(const Scalar& value) {
    if (std::holds_alternative<std::int64_t>(value)) {
        return std::to_string(std::get<std::int64_t>(value));
    }
    if (std::holds_alternative<double>(value)) {
        throw Error(ErrorCode::InvalidQuery, "decimal literals have no text form");
    }
    std::string out = "\"";
    for (char c : std::get<std::string>(value)) {
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

std::string predicates(const std::vector<AttributePredicate>& preds) {
    if (preds.empty()) return "";
    std::string out = "(";
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (i) out += ", ";
        out += ident(preds[i].attribute);
        out += ' ';
        out += to_string(preds[i].cmp);
        out += ' ';
        out += literal(preds[i].value);
    }
    return out + ")";
}

}// namespace

QueryGraph parse_query(std::string_view text) { return Parser(text).parse_one(); }

std::vector<QueryGraph> parse_queries(std::string_view text) { return Parser(text).parse_all(); }

std::string unparse(const QueryGraph& query) {
    std::ostringstream out;
    out << "query " << ident(query.name) << " {\n";
    for (const auto& v : query.vertices) {
        out << "  vertex " << ident(v.var) << ": " << ident(v.label) << predicates(v.predicates) << ";\n";
    }
    for (const auto& e : query.edges) {
        out << "  edge " << ident(e.name) << ": " << ident(e.src_var) << "-" << ident(e.edge_type) << "->"
            << ident(e.dst_var) << predicates(e.predicates) << ";\n";
    }
    for (auto [a, b] : query.constraints.arrival_order) {
        out << "  constraint before " << query.edges.at(a).name << " " << query.edges.at(b).name << ";\n";
    }
    if (query.constraints.window) {
        out << "  constraint window " << *query.constraints.window << ";\n";
    }
    if (const auto& gap = query.constraints.cluster_gap) {
        out << "  constraint cluster_gap " << gap->gap << (gap->unit == GapUnit::Time ? " time" : " updates") << ";\n";
    }
    out << "}\n";
    return out.str();
}

}// namespace streamsubiso
