#include "incnlu/metrics.hpp"

#include <algorithm>

#include "incnlu/errors.hpp"

namespace incnlu {

std::uint64_t true_positives(const ClassSequence& ref, const ClassSequence& hyp) {
  // Two-row DP; row i covers hypothesis classes, column j reference classes.
  // Boundary row and column stay 0 (see header).
  const std::size_t rows = hyp.size();
  const std::size_t cols = ref.size();
  std::vector<std::uint64_t> prev(cols + 1, 0);
  std::vector<std::uint64_t> cur(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    cur[0] = 0;
    for (std::size_t j = 1; j <= cols; ++j) {
      std::uint64_t best = prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 1 : 0);
      best = std::max(best, prev[j]);
      best = std::max(best, cur[j - 1]);
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[cols];
}

CorpusScores scores_from_sums(std::uint64_t true_positives, std::uint64_t ref_len_sum,
                              std::uint64_t hyp_len_sum) {
  CorpusScores s;
  s.true_positives = true_positives;
  s.ref_len_sum = ref_len_sum;
  s.hyp_len_sum = hyp_len_sum;
  s.precision = hyp_len_sum > 0 ? static_cast<double>(true_positives) / hyp_len_sum
                                : (ref_len_sum == 0 ? 1.0 : 0.0);
  s.recall = ref_len_sum > 0 ? static_cast<double>(true_positives) / ref_len_sum
                             : (hyp_len_sum == 0 ? 1.0 : 0.0);
  s.f1 = s.precision + s.recall > 0.0
             ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
             : 0.0;
  return s;
}

CorpusScores co_mc_scores(std::span<const ScorePair> pairs) {
  std::uint64_t tp = 0, ref_sum = 0, hyp_sum = 0;
  for (const ScorePair& p : pairs) {
    tp += true_positives(p.reference, p.hypothesis);
    ref_sum += p.reference.size();
    hyp_sum += p.hypothesis.size();
  }
  return scores_from_sums(tp, ref_sum, hyp_sum);
}

double intents_accuracy(std::span<const IntentPair> pairs) {
  if (pairs.empty()) throw DataError("intents accuracy is undefined on an empty corpus");
  std::uint64_t hits = 0;
  for (const IntentPair& p : pairs) {
    std::vector<std::string> ref = p.first;
    std::vector<std::string> hyp = p.second;
    std::sort(ref.begin(), ref.end());
    std::sort(hyp.begin(), hyp.end());
    if (ref == hyp) ++hits;
  }
  return static_cast<double>(hits) / pairs.size();
}

}  // namespace incnlu
