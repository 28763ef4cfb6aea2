#ifndef INCNLU_INCREMENTAL_HPP
#define INCNLU_INCREMENTAL_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "incnlu/corpus.hpp"
#include "incnlu/seq2seq.hpp"

namespace incnlu {

// One partial of an utterance (a clean prefix or an ASR revision), paired
// with the target it should be decoded to.
struct IncrementalRecord {
  std::vector<std::string> tokens;
  TargetSequence target;
  bool is_full = false;

  bool operator==(const IncrementalRecord&) const = default;
};

struct IncrementalSeries {
  std::string utterance_id;
  std::vector<IncrementalRecord> records;

  const IncrementalRecord& full_record() const { return records.back(); }

  bool operator==(const IncrementalSeries&) const = default;
};

// Splits an n-token utterance into n prefix records; record i holds the
// first i tokens and the target built from the first i tags, so a chunk cut
// mid-way keeps only the tokens seen so far. The gold intents are attached
// to every prefix.
IncrementalSeries generate_prefixes(const AnnotatedUtterance& u);

struct AsrAlignStats {
  std::size_t skipped_empty = 0;
};

// Gives each ASR partial the target of the human prefix with the same token
// count; partials longer than the full human transcript get the full
// target. Empty partials are dropped (counted in `stats`).
IncrementalSeries align_asr_partials(std::span<const std::vector<std::string>> asr_partials,
                                     const IncrementalSeries& human,
                                     AsrAlignStats* stats = nullptr);

enum class SelectMode { exact, at_least };

// Picks the record for a percentage cut: i = max(1, floor(percent/100 * n))
// with n the full record's token count. `exact` requires a record of length
// exactly i (clean/human prefix series); `at_least` takes the first record
// with length >= i and falls back to the last one (ASR series).
const IncrementalRecord& select_prefix(const IncrementalSeries& series, int percent,
                                       SelectMode mode);

// Incremental dataset file: one JSON object per line with fields
// `utterance_id`, `index`, `tokens`, `target`, `is_full`. Records of one
// utterance are contiguous and in emission order.
void write_incremental(std::ostream& out, std::span<const IncrementalSeries> series);
std::vector<IncrementalSeries> read_incremental(std::istream& in);

}  // namespace incnlu

#endif
