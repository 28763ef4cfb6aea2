#include "incnlu/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "incnlu/errors.hpp"

namespace incnlu {

namespace {

// Keeps per-prefix wall times for the percentile; max and mean are tracked
// exactly. Very fast models over long durations would otherwise grow the
// sample vector without bound, so it is decimated (every other sample
// dropped, stride doubled) once it hits the cap.
struct SampleSet {
  static constexpr std::size_t kCap = 1u << 22;

  std::vector<double> samples;
  std::uint64_t count = 0;
  std::uint64_t stride = 1;
  double max_ms = 0.0;
  double sum_ms = 0.0;

  void add(double ms) {
    ++count;
    sum_ms += ms;
    max_ms = std::max(max_ms, ms);
    if (count % stride == 0) {
      samples.push_back(ms);
      if (samples.size() >= kCap) {
        std::vector<double> kept;
        kept.reserve(samples.size() / 2);
        for (std::size_t i = 1; i < samples.size(); i += 2) kept.push_back(samples[i]);
        samples = std::move(kept);
        stride *= 2;
      }
    }
  }

  double p99() {
    if (samples.empty()) return max_ms;
    std::sort(samples.begin(), samples.end());
    const std::size_t rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(samples.size())));
    return samples[std::max<std::size_t>(rank, 1) - 1];
  }
};

}  // namespace

LatencyReport bench_latency(const std::function<Hypothesis(std::span<const std::string>)>& model,
                            std::span<const IncrementalSeries> utterances, double duration_s) {
  if (!(duration_s > 0.0)) throw DataError("bench duration must be > 0");
  if (utterances.empty()) throw DataError("no utterances to benchmark");

  using clock = std::chrono::steady_clock;
  std::vector<SampleSet> sets(utterances.size());
  const clock::time_point start = clock::now();
  const clock::duration budget =
      std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(duration_s));
  // Whole passes only, so every prefix is sampled equally often; each series
  // is fed prefix by prefix, the way an incremental consumer would.
  do {
    for (std::size_t u = 0; u < utterances.size(); ++u) {
      for (const IncrementalRecord& record : utterances[u].records) {
        const clock::time_point t0 = clock::now();
        volatile double sink = model(record.tokens).intent_confidence;
        (void)sink;
        const clock::time_point t1 = clock::now();
        sets[u].add(std::chrono::duration<double, std::milli>(t1 - t0).count());
      }
    }
  } while (clock::now() - start < budget);

  LatencyReport report;
  report.duration_s =
      std::chrono::duration<double>(clock::now() - start).count();
  for (std::size_t u = 0; u < utterances.size(); ++u) {
    UtteranceLatency lat;
    lat.utterance_id = utterances[u].utterance_id;
    lat.prefix_count = utterances[u].records.size();
    lat.samples = sets[u].count;
    lat.max_ms = sets[u].max_ms;
    lat.mean_ms = sets[u].count > 0 ? sets[u].sum_ms / static_cast<double>(sets[u].count) : 0.0;
    lat.p99_ms = sets[u].p99();
    report.utterances.push_back(std::move(lat));
  }
  return report;
}

}  // namespace incnlu
