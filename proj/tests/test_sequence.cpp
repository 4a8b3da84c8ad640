#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "exie/sequence.hpp"
#include "support/rng.hpp"

using exie::ChannelSelector;
using exie::EditSequence;
using exie::Operator;
using exie::OpFamily;
using testsupport::TestRng;

TEST_CASE("serialize emits a stable golden form") {
  EditSequence seq;
  seq.ops.push_back({OpFamily::Brightness, 0.05, ChannelSelector::All});
  const std::string want =
      "{\n"
      "  \"meta\": {},\n"
      "  \"operators\": [\n"
      "    {\n"
      "      \"channels\": \"all\",\n"
      "      \"family\": \"brightness\",\n"
      "      \"param\": 0.05\n"
      "    }\n"
      "  ],\n"
      "  \"version\": 1\n"
      "}\n";
  CHECK(exie::serialize(seq) == want);
  CHECK(exie::serialize(seq) == exie::serialize(seq));
}

TEST_CASE("serialize then parse round-trips operators and meta") {
  TestRng rng(10001);
  const std::vector<Operator> all = exie::enumerate_all();
  for (int it = 0; it < 25; ++it) {
    EditSequence seq;
    const std::size_t len = rng.index(6);
    for (std::size_t k = 0; k < len; ++k)
      seq.ops.push_back(all[rng.index(all.size())]);
    seq.meta = {{"source", "a.png"}, {"iteration", it}};
    const EditSequence back = exie::parse_sequence(exie::serialize(seq));
    REQUIRE(back.ops.size() == seq.ops.size());
    for (std::size_t k = 0; k < len; ++k) CHECK(back.ops[k] == seq.ops[k]);
    CHECK(back.meta == seq.meta);
  }
}

TEST_CASE("parse accepts near-menu params and snaps them exactly") {
  const std::string text = R"({
    "version": 1,
    "operators": [
      {"family": "brightness", "param": 0.05000000000001, "channels": "r"},
      {"family": "contrast",  "param": 1.3999999999999,  "channels": "g"}
    ]
  })";
  const EditSequence seq = exie::parse_sequence(text);
  REQUIRE(seq.ops.size() == 2);
  CHECK(seq.ops[0].param == 0.05);
  CHECK(seq.ops[1].param == 1.4);
  CHECK(seq.meta.is_object());
  CHECK(seq.meta.empty());
}

TEST_CASE("parse rejects malformed documents") {
  using exie::parse_sequence;
  using exie::ParseError;
  CHECK_THROWS_AS(parse_sequence("not json"), ParseError);
  CHECK_THROWS_AS(parse_sequence("[1,2,3]"), ParseError);
  CHECK_THROWS_AS(parse_sequence(R"({"operators": []})"), ParseError);
  CHECK_THROWS_AS(parse_sequence(R"({"version": 2, "operators": []})"),
                  ParseError);
  CHECK_THROWS_AS(parse_sequence(R"({"version": 1})"), ParseError);
  CHECK_THROWS_AS(parse_sequence(R"({"version": 1, "operators": [42]})"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_sequence(
          R"({"version": 1, "operators": [{"family": "blur", "param": 0.05, "channels": "all"}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_sequence(
          R"({"version": 1, "operators": [{"family": "brightness", "param": 0.07, "channels": "all"}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_sequence(
          R"({"version": 1, "operators": [{"family": "brightness", "param": 0.05, "channels": "rgb"}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_sequence(
          R"({"version": 1, "operators": [{"family": "brightness", "channels": "all"}]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_sequence(R"({"version": 1, "operators": [], "meta": [1]})"),
      ParseError);
}

TEST_CASE("parse errors name the offending entry") {
  try {
    exie::parse_sequence(
        R"({"version": 1, "operators": [
          {"family": "gamma", "param": 0.6, "channels": "all"},
          {"family": "gamma", "param": 2.2, "channels": "all"}
        ]})");
    FAIL("expected ParseError");
  } catch (const exie::ParseError& e) {
    CHECK(std::string(e.what()).find("operators[1]") != std::string::npos);
    CHECK(std::string(e.what()).find("2.2") != std::string::npos);
  }
}

TEST_CASE("empty sequences serialize and parse") {
  EditSequence seq;
  const EditSequence back = exie::parse_sequence(exie::serialize(seq));
  CHECK(back.ops.empty());
  CHECK(back.meta == nlohmann::json::object());
}

TEST_CASE("histogram counts operators and groups") {
  EditSequence seq;
  const Operator b_all{OpFamily::Brightness, 0.05, ChannelSelector::All};
  const Operator b_r{OpFamily::Brightness, -0.05, ChannelSelector::R};
  const Operator g_all{OpFamily::Gamma, 0.6, ChannelSelector::All};
  seq.ops = {b_all, b_all, b_r, g_all};
  const exie::OperatorHistogram h = exie::op_histogram(seq);
  CHECK(h.total == 4);
  CHECK(h.per_operator.at(b_all) == 2);
  CHECK(h.per_operator.at(b_r) == 1);
  CHECK(h.per_operator.at(g_all) == 1);
  CHECK(h.per_group.at({"brightness", "all"}) == 2);
  CHECK(h.per_group.at({"brightness", "r"}) == 1);
  CHECK(h.per_group.at({"gamma", "all"}) == 1);

  exie::OperatorHistogram agg;
  agg.add(seq);
  agg.add(seq);
  CHECK(agg.total == 8);
  CHECK(agg.per_operator.at(b_all) == 4);
}
