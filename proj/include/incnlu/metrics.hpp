#ifndef INCNLU_METRICS_HPP
#define INCNLU_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "incnlu/seq2seq.hpp"

namespace incnlu {

struct ScorePair {
  ClassSequence reference;
  ClassSequence hypothesis;
};

// Micro-averaged corpus scores: precision = TP / sum(|h|),
// recall = TP / sum(|r|), f1 their harmonic mean. A zero denominator gives 1
// when the other side is empty too and 0 otherwise; f1 is 0 when p + r = 0.
struct CorpusScores {
  std::uint64_t true_positives = 0;
  std::uint64_t ref_len_sum = 0;
  std::uint64_t hyp_len_sum = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// In-order true-positive count between two class sequences: a Levenshtein-
// style dynamic program over class equality where only a match moves the
// score (by one) and the best of the three predecessors is kept. Equals the
// longest-common-subsequence length of the two sequences.
//
// The boundary cells are 0, not the row/column index: nonzero boundaries
// under the max recurrence would count absent classes as matches and push
// the result past min(|r|, |h|), breaking precision <= 1.
std::uint64_t true_positives(const ClassSequence& ref, const ClassSequence& hyp);

CorpusScores scores_from_sums(std::uint64_t true_positives, std::uint64_t ref_len_sum,
                              std::uint64_t hyp_len_sum);

CorpusScores co_mc_scores(std::span<const ScorePair> pairs);

using IntentPair = std::pair<std::vector<std::string>, std::vector<std::string>>;

// All-or-nothing per utterance: 1 when reference and hypothesis intents are
// equal as multisets, else 0; returns the corpus mean. Errors on an empty
// corpus.
double intents_accuracy(std::span<const IntentPair> pairs);

}  // namespace incnlu

#endif
