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

#include <builders.hpp>
#include <streamsubiso/workload.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace streamsubiso;

namespace {

ParseError record_failure(std::string_view text) {
    try {
        parse_stream_record(text, 4);
    } catch (const ParseError& e) {
        return e;
    }
    throw std::logic_error("record unexpectedly parsed");
}

}// namespace

TEST(StreamRecord, EightFields) {
    auto u = parse_stream_record("1\t+\tw1\talice\tAuthor\tauthored\tpaperA\tPaper");
    EXPECT_EQ(u.timestamp, 1);
    EXPECT_EQ(u.op, UpdateOp::Insert);
    EXPECT_EQ(u.edge_id, "w1");
    EXPECT_EQ(u.src.id, "alice");
    EXPECT_EQ(u.src.label, "Author");
    EXPECT_EQ(u.edge_type, "authored");
    EXPECT_EQ(u.dst.id, "paperA");
    EXPECT_EQ(u.dst.label, "Paper");
    EXPECT_TRUE(u.attributes.empty());
}

TEST(StreamRecord, TypedAttributes) {
    auto u = parse_stream_record(
        "7\t-\tw1\ta\tA\tt\tb\tB\tn=-12;s=ICDM;q=\"two words; and \\\"quotes\\\"\";f=1.5;src.age=40;dst.venue=KDD");
    EXPECT_EQ(u.op, UpdateOp::Delete);
    EXPECT_EQ(u.attributes.at("n"), Scalar{std::int64_t{-12}});
    EXPECT_EQ(u.attributes.at("s"), Scalar{std::string("ICDM")});
    EXPECT_EQ(u.attributes.at("q"), Scalar{std::string("two words; and \"quotes\"")});
    EXPECT_EQ(u.attributes.at("f"), Scalar{std::string("1.5")});
    EXPECT_EQ(u.src.attributes.at("age"), Scalar{std::int64_t{40}});
    EXPECT_EQ(u.dst.attributes.at("venue"), Scalar{std::string("KDD")});
}

TEST(StreamRecord, QuotedIntegerStaysString) {
    auto u = parse_stream_record("0\t+\te\ta\tA\tt\tb\tB\tyear=\"2006\"");
    EXPECT_EQ(u.attributes.at("year"), Scalar{std::string("2006")});
}

TEST(StreamRecord, ErrorsAreSpanned) {
    auto e = record_failure("1\t+\tw1\ta\tA\tt\tb");
    EXPECT_EQ(e.code(), ErrorCode::StreamFormat);
    EXPECT_EQ(e.span().line, 4u);
    EXPECT_EQ(record_failure("-1\t+\tw1\ta\tA\tt\tb\tB").span().column, 0u);
    EXPECT_EQ(record_failure("1\t*\tw1\ta\tA\tt\tb\tB").span().column, 2u);
    EXPECT_EQ(record_failure("1\t+\t\ta\tA\tt\tb\tB").span().column, 4u);
    EXPECT_EQ(record_failure("1\t+\tw\ta\tA\tt\tb\tB\tk").span().column, 17u);
    EXPECT_EQ(record_failure("1\t+\tw\ta\tA\tt\tb\tB\tk=\"open").span().column, 18u);
    EXPECT_EQ(record_failure("1\t+\tw\ta\tA\tt\tb\tB\tk=1;k=2").code(), ErrorCode::StreamFormat);
    EXPECT_EQ(std::string(record_failure("x\t+\tw\ta\tA\tt\tb\tB").what()).substr(0, 4), "5:1:");
}

TEST(StreamRecord, ReadSkipsCommentsAndBlankLines) {
    std::istringstream in("# header\n\n1\t+\tw1\ta\tA\tt\tb\tB\r\n\n2\t-\tw1\ta\tA\tt\tb\tB\n");
    auto lines = read_stream(in);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0].line, 3u);
    EXPECT_EQ(lines[1].line, 5u);
    EXPECT_EQ(lines[0].update.dst.label, "B");
}

TEST(StreamRecord, ReadReportsFileLine) {
    std::istringstream in("1\t+\tw1\ta\tA\tt\tb\tB\n\nbroken\n");
    try {
        read_stream(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.span().line, 2u);
        EXPECT_EQ(std::string(e.what()).substr(0, 4), "3:1:");
    }
}

// Property: format then parse is the identity on generated updates.
TEST(StreamRecordProperty, RoundTrip) {
    std::mt19937_64 rng(seed_from_env(3));
    StreamGenConfig cfg;
    cfg.updates = 500;
    cfg.weight_range = 100;
    cfg.delete_probability = 0.2;
    auto stream = generate_stream(cfg, rng);
    stream[0].attributes["note"] = std::string("has space; semicolon \"q\" \\ and\ttab");
    stream[0].attributes["num_like"] = std::string("42");
    stream[0].attributes["empty"] = std::string();
    stream[0].src.attributes["age"] = std::int64_t{-3};
    for (const auto& u : stream) {
        const auto text = format_stream_record(u);
        ASSERT_EQ(parse_stream_record(text), u) << text;
    }
}

TEST(ResultRecord, FieldOrder) {
    auto q = parse_query("query r { vertex zed: Z; vertex alpha: A; edge second: zed -t-> alpha; edge first: alpha -t-> zed; }");
    MatchResult r{QueryId{0}, "r", Embedding{{"z1", "a1"}, {{"x1", 4}, {"x2", 9}}}, 9, 17};
    EXPECT_EQ(format_result_record(q, r), "r\t9\t17\talpha=a1\tzed=z1\tsecond=x1@4\tfirst=x2@9");
}
