#ifndef INCNLU_STATS_HPP
#define INCNLU_STATS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "incnlu/corpus.hpp"

namespace incnlu {

struct CorpusStats {
  std::size_t utterances = 0;
  double avg_tokens = 0.0;
  double avg_params = 0.0;  // IOB2 chunks per utterance
  std::size_t slot_count = 0;
  // "#"-joined intent label -> share in percent, sorted by share (desc),
  // then label.
  std::vector<std::pair<std::string, double>> intent_percent;
};

CorpusStats compute_stats(std::span<const AnnotatedUtterance> records);

void render_stats_text(std::ostream& out, const CorpusStats& stats);
std::string stats_to_json(const CorpusStats& stats);

}  // namespace incnlu

#endif
