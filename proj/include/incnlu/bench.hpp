#ifndef INCNLU_BENCH_HPP
#define INCNLU_BENCH_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "incnlu/evaluation.hpp"
#include "incnlu/incremental.hpp"

namespace incnlu {

struct UtteranceLatency {
  std::string utterance_id;
  std::size_t prefix_count = 0;
  std::uint64_t samples = 0;
  double max_ms = 0.0;
  double mean_ms = 0.0;
  double p99_ms = 0.0;  // nearest-rank percentile
};

struct LatencyReport {
  double duration_s = 0.0;
  int thread_count = 1;
  std::vector<UtteranceLatency> utterances;
};

// Feeds every record of every series through `model`, over and over, until
// `duration_s` of wall clock has elapsed (each pass runs to completion, so
// every prefix gets the same number of samples). Single measurement thread;
// per-prefix wall times are aggregated per utterance.
LatencyReport bench_latency(const std::function<Hypothesis(std::span<const std::string>)>& model,
                            std::span<const IncrementalSeries> utterances, double duration_s);

}  // namespace incnlu

#endif
