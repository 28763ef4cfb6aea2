#include <doctest.h>

#include <random>

#include "incnlu/errors.hpp"
#include "incnlu/metrics.hpp"
#include "incnlu/seq2seq.hpp"
#include "helpers.hpp"

using namespace incnlu;

namespace {

SlotLexicon atis_lexicon() {
  SlotLexicon lex;
  lex.slots = {"fromloc.city_name", "toloc.city_name", "depart_date.day_name",
               "depart_time.period_of_day", "or"};
  return lex;
}

const char* kReferenceTarget =
    "atis_flight fromloc.city_name milwaukee toloc.city_name orlando "
    "depart_date.day_name wednesday depart_time.period_of_day evening or or "
    "depart_date.day_name thursday depart_time.period_of_day morning";

const char* kSwappedTarget =
    "atis_flight fromloc.city_name milwaukee toloc.city_name orlando "
    "depart_date.day_name thursday depart_time.period_of_day evening or or "
    "depart_date.day_name wednesday depart_time.period_of_day morning";

}  // namespace

TEST_CASE("identical sequences score their full length") {
  std::mt19937_64 rng(1);
  for (int round = 0; round < 50; ++round) {
    const ClassSequence seq = testutil::random_class_sequence(rng, 8, 5);
    CHECK(true_positives(seq, seq) == seq.size());
  }
}

TEST_CASE("swapping the two day names costs both matches") {
  const SlotLexicon lex = atis_lexicon();
  const ClassSequence ref = parse_target(kReferenceTarget, lex);
  const ClassSequence hyp = parse_target(kSwappedTarget, lex);
  REQUIRE(ref.size() == 9);
  REQUIRE(hyp.size() == 9);
  CHECK(true_positives(ref, hyp) == 7);
}

TEST_CASE("true positives equal exhaustive subsequence enumeration") {
  std::mt19937_64 rng(20240813);
  for (int round = 0; round < 500; ++round) {
    const ClassSequence ref = testutil::random_class_sequence(rng, 8, 5);
    const ClassSequence hyp = testutil::random_class_sequence(rng, 8, 5);
    CHECK(true_positives(ref, hyp) == testutil::brute_lcs(ref, hyp));
  }
}

TEST_CASE("true positives are bounded, symmetric and exact on self") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 200; ++round) {
    const ClassSequence a = testutil::random_class_sequence(rng, 8, 4);
    const ClassSequence b = testutil::random_class_sequence(rng, 8, 4);
    const std::uint64_t tp = true_positives(a, b);
    CHECK(tp <= std::min(a.size(), b.size()));
    CHECK(tp == true_positives(b, a));
  }
}

TEST_CASE("perfect corpus scores one across the board") {
  std::mt19937_64 rng(3);
  std::vector<ScorePair> pairs;
  for (int i = 0; i < 20; ++i) {
    ClassSequence seq = testutil::random_class_sequence(rng, 8, 5);
    pairs.push_back(ScorePair{seq, seq});
  }
  const CorpusScores s = co_mc_scores(pairs);
  CHECK(s.precision == 1.0);
  CHECK(s.recall == 1.0);
  CHECK(s.f1 == 1.0);
}

TEST_CASE("the nine-class pair scores seven ninths") {
  const SlotLexicon lex = atis_lexicon();
  std::vector<ScorePair> pairs{
      ScorePair{parse_target(kReferenceTarget, lex), parse_target(kSwappedTarget, lex)}};
  const CorpusScores s = co_mc_scores(pairs);
  CHECK(s.true_positives == 7);
  CHECK(s.ref_len_sum == 9);
  CHECK(s.hyp_len_sum == 9);
  CHECK(s.precision == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
  CHECK(s.recall == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
  CHECK(s.f1 == doctest::Approx(7.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("zero conventions") {
  ClassSequence some{SeqClass::make_intent("a")};
  SUBCASE("empty hypothesis against a nonempty reference") {
    const CorpusScores s = co_mc_scores(std::vector<ScorePair>{ScorePair{some, {}}});
    CHECK(s.precision == 0.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f1 == 0.0);
  }
  SUBCASE("empty reference against a nonempty hypothesis") {
    const CorpusScores s = co_mc_scores(std::vector<ScorePair>{ScorePair{{}, some}});
    CHECK(s.precision == 0.0);
    CHECK(s.recall == 0.0);
    CHECK(s.f1 == 0.0);
  }
  SUBCASE("both sides empty count as a perfect match") {
    const CorpusScores s = co_mc_scores(std::vector<ScorePair>{ScorePair{{}, {}}});
    CHECK(s.precision == 1.0);
    CHECK(s.recall == 1.0);
    CHECK(s.f1 == 1.0);
  }
}

TEST_CASE("micro-averaging is additive over corpus concatenation") {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 30; ++round) {
    std::vector<ScorePair> a, b, both;
    for (int i = 0; i < 6; ++i)
      a.push_back(ScorePair{testutil::random_class_sequence(rng, 8, 5),
                            testutil::random_class_sequence(rng, 8, 5)});
    for (int i = 0; i < 4; ++i)
      b.push_back(ScorePair{testutil::random_class_sequence(rng, 8, 5),
                            testutil::random_class_sequence(rng, 8, 5)});
    both = a;
    both.insert(both.end(), b.begin(), b.end());
    const CorpusScores sa = co_mc_scores(a);
    const CorpusScores sb = co_mc_scores(b);
    const CorpusScores sboth = co_mc_scores(both);
    CHECK(sboth.true_positives == sa.true_positives + sb.true_positives);
    CHECK(sboth.ref_len_sum == sa.ref_len_sum + sb.ref_len_sum);
    CHECK(sboth.hyp_len_sum == sa.hyp_len_sum + sb.hyp_len_sum);
    const CorpusScores recombined = scores_from_sums(
        sa.true_positives + sb.true_positives, sa.ref_len_sum + sb.ref_len_sum,
        sa.hyp_len_sum + sb.hyp_len_sum);
    CHECK(sboth.precision == recombined.precision);
    CHECK(sboth.recall == recombined.recall);
    CHECK(sboth.f1 == recombined.f1);
  }
}

TEST_CASE("order-sensitive matching is never more generous than multiset overlap") {
  std::mt19937_64 rng(123);
  for (int round = 0; round < 500; ++round) {
    const ClassSequence ref = testutil::random_class_sequence(rng, 8, 5);
    const ClassSequence hyp = testutil::random_class_sequence(rng, 8, 5);
    CHECK(true_positives(ref, hyp) <= testutil::multiset_overlap(ref, hyp));
  }
}

TEST_CASE("intents accuracy is all-or-nothing and order-insensitive") {
  using Intents = std::vector<std::string>;
  CHECK(intents_accuracy(std::vector<IntentPair>{{Intents{"atis_flight"},
                                                  Intents{"atis_flight"}}}) == 1.0);
  CHECK(intents_accuracy(std::vector<IntentPair>{
            {Intents{"atis_flight"}, Intents{"atis_flight", "atis_airfare"}}}) == 0.0);
  CHECK(intents_accuracy(std::vector<IntentPair>{{Intents{"a", "b"}, Intents{"b", "a"}}}) == 1.0);
  CHECK(intents_accuracy(std::vector<IntentPair>{{Intents{"a", "a"}, Intents{"a"}}}) == 0.0);

  std::vector<IntentPair> corpus{{Intents{"a"}, Intents{"a"}},
                                 {Intents{"b"}, Intents{"b"}},
                                 {Intents{"c"}, Intents{"c"}},
                                 {Intents{"d"}, Intents{"x"}}};
  CHECK(intents_accuracy(corpus) == 0.75);
}

TEST_CASE("intents accuracy rejects an empty corpus") {
  CHECK_THROWS_AS(intents_accuracy(std::vector<IntentPair>{}), DataError);
}
