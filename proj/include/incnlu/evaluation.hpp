#ifndef INCNLU_EVALUATION_HPP
#define INCNLU_EVALUATION_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "incnlu/corpus.hpp"
#include "incnlu/incremental.hpp"
#include "incnlu/metrics.hpp"

namespace incnlu {

// Model output for one partial.
struct Hypothesis {
  std::string target;
  double intent_confidence = 0.0;

  bool operator==(const Hypothesis&) const = default;
};

struct TraceEntry {
  std::size_t prefix_len = 0;
  Hypothesis hypothesis;
};

// Per-partial hypotheses of one utterance in emission order; the last entry
// is the full utterance and defines the length every usage percentage is
// relative to.
struct ConfidenceTrace {
  std::string utterance_id;
  std::vector<TraceEntry> entries;

  std::size_t full_len() const { return entries.back().prefix_len; }
};

struct PartialEvalRow {
  int percent = 0;
  CorpusScores scores;
  double intents_accuracy = 0.0;
  std::size_t pairs = 0;
};

struct ConfidenceEvalRow {
  double threshold = 0.0;
  double intents_accuracy = 0.0;
  double mean_token_percent = 0.0;  // in (0, 100], capped at 100 per utterance
  std::size_t utterances = 0;
};

struct EvalReport {
  std::vector<PartialEvalRow> partial_rows;
  std::vector<ConfidenceEvalRow> confidence_rows;
};

// (utterance_id, prefix token count) -> hypothesis.
using HypothesisMap = std::map<std::pair<std::string, std::size_t>, Hypothesis>;

// Partial-percentage scheme: per percentage cut, selects one record per gold
// series, pairs its parsed target with the parsed hypothesis for the same
// (utterance, length) key, and reports CO-MC scores plus intents accuracy.
// Missing hypotheses raise a DataError listing every missing key.
EvalReport evaluate_partial(std::span<const IncrementalSeries> gold,
                            const HypothesisMap& hypotheses, std::span<const int> percents,
                            SelectMode mode, const SlotLexicon& lexicon);

// Confidence scheme: per threshold, each utterance is decided by the first
// trace entry whose intent confidence clears the threshold, falling back to
// the final (full) entry. Reports intents accuracy of the decisions and the
// mean percentage of tokens consumed.
EvalReport evaluate_confidence(std::span<const ConfidenceTrace> traces,
                               const std::map<std::string, std::vector<std::string>>& gold_intents,
                               std::span<const double> thresholds);

// Hypothesis file: one JSON object per line with fields `utterance_id`,
// `prefix_len`, `target`, `intent_confidence`, in emission order.
void write_hypotheses(std::ostream& out, std::span<const std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines);
std::vector<std::pair<std::pair<std::string, std::size_t>, Hypothesis>> read_hypothesis_lines(std::istream& in);

// First occurrence wins when a (utterance, length) key repeats, matching the
// first-record rule of select_prefix on ASR series.
HypothesisMap hypothesis_map(std::span<const std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines);

// Groups hypothesis lines into per-utterance traces, preserving file order
// within an utterance. Lines of one utterance must be contiguous.
std::vector<ConfidenceTrace> build_traces(std::span<const std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines);

// Reports are rendered with two decimals, matching the usual table layout.
void render_report_text(std::ostream& out, const EvalReport& report);
std::string report_to_json(const EvalReport& report);

}  // namespace incnlu

#endif
