#include <doctest.h>

#include <sstream>

#include "incnlu/corpus.hpp"
#include "incnlu/seq2seq.hpp"
#include "helpers.hpp"

using namespace incnlu;

namespace {

AnnotatedUtterance utterance(const std::string& tokens, const std::string& tags,
                             const std::string& intents) {
  AnnotatedUtterance u;
  u.id = "t";
  u.tokens = split_ws(tokens);
  u.tags = split_ws(tags);
  for (const std::string& part : split_char(intents, '#')) u.intents.push_back(part);
  return u;
}

SlotLexicon lexicon(std::initializer_list<std::string> slots) {
  SlotLexicon lex;
  for (const std::string& s : slots) lex.slots.insert(s);
  return lex;
}

}  // namespace

TEST_CASE("conversion emits intents, then slot name and tokens per chunk") {
  const auto u = utterance("which flights go from new york to pittsburgh",
                           "O O O O B-fromloc I-fromloc O B-toloc", "atis_flight");
  CHECK(iob_to_target(u).text == "atis_flight fromloc new york toloc pittsburgh");
}

TEST_CASE("conversion of a chunk-free utterance is the intent label alone") {
  CHECK(iob_to_target(utterance("what does lh mean", "O O O O", "atis_abbreviation")).text ==
        "atis_abbreviation");
}

TEST_CASE("multiple intents join with the number sign") {
  CHECK(iob_to_target(utterance("a b", "O O", "atis_airline#atis_flight_no")).text ==
        "atis_airline#atis_flight_no");
}

TEST_CASE("adjacent chunks of the same slot stay separate") {
  // B- after I- of the same slot opens a new chunk; the slot name repeats.
  const auto u = utterance("boston denver", "B-city B-city", "atis_flight");
  CHECK(iob_to_target(u).text == "atis_flight city boston city denver");
}

TEST_CASE("target parsing inverts conversion on lexicon-clean data") {
  const auto classes = parse_target("atis_flight fromloc new york toloc pittsburgh",
                                    lexicon({"fromloc", "toloc"}));
  REQUIRE(classes.size() == 3);
  CHECK(classes[0] == SeqClass::make_intent("atis_flight"));
  CHECK(classes[1] == SeqClass::make_param("fromloc", {"new", "york"}));
  CHECK(classes[2] == SeqClass::make_param("toloc", {"pittsburgh"}));
}

TEST_CASE("target parsing splits multi-intent labels") {
  const auto classes = parse_target("atis_airline#atis_flight_no", lexicon({}));
  REQUIRE(classes.size() == 2);
  CHECK(classes[0] == SeqClass::make_intent("atis_airline"));
  CHECK(classes[1] == SeqClass::make_intent("atis_flight_no"));
}

TEST_CASE("value tokens that collide with slot names open empty params") {
  // "or" is both a value and a slot name here; greedy segmentation reads the
  // two value occurrences as two value-less params, giving 9 classes total.
  const auto classes = parse_target(
      "atis_flight fromloc.city_name milwaukee toloc.city_name orlando "
      "depart_date.day_name wednesday depart_time.period_of_day evening or or "
      "depart_date.day_name thursday depart_time.period_of_day morning",
      lexicon({"fromloc.city_name", "toloc.city_name", "depart_date.day_name",
               "depart_time.period_of_day", "or"}));
  REQUIRE(classes.size() == 9);
  CHECK(classes[0] == SeqClass::make_intent("atis_flight"));
  CHECK(classes[1] == SeqClass::make_param("fromloc.city_name", {"milwaukee"}));
  CHECK(classes[2] == SeqClass::make_param("toloc.city_name", {"orlando"}));
  CHECK(classes[3] == SeqClass::make_param("depart_date.day_name", {"wednesday"}));
  CHECK(classes[4] == SeqClass::make_param("depart_time.period_of_day", {"evening"}));
  CHECK(classes[5] == SeqClass::make_param("or", {}));
  CHECK(classes[6] == SeqClass::make_param("or", {}));
  CHECK(classes[7] == SeqClass::make_param("depart_date.day_name", {"thursday"}));
  CHECK(classes[8] == SeqClass::make_param("depart_time.period_of_day", {"morning"}));
}

TEST_CASE("value tokens before any slot name collect into a dangling param") {
  const auto classes = parse_target("intent a b x c", lexicon({"x"}));
  REQUIRE(classes.size() == 3);
  CHECK(classes[1] == SeqClass::make_param(std::string(kDanglingSlot), {"a", "b"}));
  CHECK(classes[2] == SeqClass::make_param("x", {"c"}));
}

TEST_CASE("target parsing never throws") {
  const SlotLexicon lex = lexicon({"x"});
  CHECK(parse_target("", lex).empty());
  CHECK_NOTHROW(parse_target("###", lex));
  CHECK_NOTHROW(parse_target("   \t  ", lex));
  CHECK_NOTHROW(parse_target("x x x # # x", lex));
  CHECK(parse_target("#a#b#", lex).size() == 2);
}

TEST_CASE("conversion and parsing round-trip random utterances") {
  std::mt19937_64 rng(20240812);
  for (int round = 0; round < 300; ++round) {
    const auto u = testutil::random_utterance(rng, "r");
    const SlotLexicon lex = slot_lexicon(std::vector<AnnotatedUtterance>{u});
    const auto classes = parse_target(iob_to_target(u).text, lex);

    // expected classes straight from the annotation
    ClassSequence expected;
    for (const std::string& intent : u.intents) expected.push_back(SeqClass::make_intent(intent));
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      const std::string& tag = u.tags[i];
      if (tag == "O") continue;
      if (tag[0] == 'B')
        expected.push_back(SeqClass::make_param(tag.substr(2), {u.tokens[i]}));
      else
        expected.back().values.push_back(u.tokens[i]);
    }
    CHECK(classes == expected);
  }
}

TEST_CASE("target token count matches the chunk arithmetic") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 100; ++round) {
    const auto u = testutil::random_utterance(rng, "r");
    std::size_t expected = 1;  // intents token
    for (std::size_t i = 0; i < u.tags.size(); ++i) {
      if (u.tags[i] == "O") continue;
      if (u.tags[i][0] == 'B') ++expected;  // slot name token
      ++expected;                           // value token
    }
    CHECK(split_ws(iob_to_target(u).text).size() == expected);
  }
}

TEST_CASE("intent names come back in sequence order") {
  const auto classes = parse_target("b#a x", lexicon({"x"}));
  CHECK(intent_names(classes) == std::vector<std::string>{"b", "a"});
}
