#ifndef INCNLU_BASELINE_HPP
#define INCNLU_BASELINE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "incnlu/corpus.hpp"
#include "incnlu/evaluation.hpp"

namespace incnlu {

// Deterministic reference predictor: additive-smoothed unigram naive Bayes
// over atomic intent labels (multi-intent labels keep their "#"-joined
// form), plus a per-token most-frequent-tag lookup. It exists to drive the
// pipeline end to end, not to compete with a trained sequence model.
struct BaselineModel {
  double alpha = 1.0;
  std::map<std::string, std::uint64_t> class_counts;  // label -> utterances
  std::map<std::string, std::map<std::string, std::uint64_t>> token_counts;  // label -> token -> count
  std::map<std::string, std::uint64_t> class_token_totals;  // label -> total tokens
  std::map<std::string, std::map<std::string, std::uint64_t>> tag_counts;  // token -> tag -> count
  std::uint64_t total_utterances = 0;
  std::size_t vocabulary_size = 0;  // distinct training tokens
};

BaselineModel train_baseline(std::span<const AnnotatedUtterance> records, double alpha);

// Posterior over intent labels, normalized to sum to 1, in label order.
std::vector<std::pair<std::string, double>> intent_posterior(const BaselineModel& model,
                                                             std::span<const std::string> prefix);

// Argmax-label hypothesis (ties broken lexicographically) with the max
// posterior as confidence. Tags come from the lookup table (unknown tokens
// get "O"), orphaned "I-x" tags are repaired to "B-x", and the target text
// is the standard conversion of the induced annotation.
Hypothesis predict(const BaselineModel& model, std::span<const std::string> prefix);

// Versioned line-delimited count dump.
void save_model(std::ostream& out, const BaselineModel& model);
BaselineModel load_model(std::istream& in);

}  // namespace incnlu

#endif
