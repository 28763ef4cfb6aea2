#include "incnlu/incremental.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "incnlu/errors.hpp"

namespace incnlu {

namespace {
using nlohmann::json;
}

IncrementalSeries generate_prefixes(const AnnotatedUtterance& u) {
  if (u.tokens.empty()) throw DataError("cannot generate prefixes of an empty utterance");
  IncrementalSeries series;
  series.utterance_id = u.id;
  const std::size_t n = u.tokens.size();
  series.records.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) {
    AnnotatedUtterance prefix;
    prefix.id = u.id;
    prefix.tokens.assign(u.tokens.begin(), u.tokens.begin() + i);
    prefix.tags.assign(u.tags.begin(), u.tags.begin() + i);
    prefix.intents = u.intents;
    series.records.push_back(IncrementalRecord{
        prefix.tokens, iob_to_target(prefix), i == n});
  }
  return series;
}

IncrementalSeries align_asr_partials(std::span<const std::vector<std::string>> asr_partials,
                                     const IncrementalSeries& human, AsrAlignStats* stats) {
  if (asr_partials.empty()) throw DataError("no ASR partials for utterance " + human.utterance_id);
  if (human.records.empty())
    throw DataError("empty human series for utterance " + human.utterance_id);
  IncrementalSeries out;
  out.utterance_id = human.utterance_id;
  for (const std::vector<std::string>& partial : asr_partials) {
    if (partial.empty()) {
      if (stats) ++stats->skipped_empty;
      continue;
    }
    // Human prefix series: record of length L sits at index L-1. Partials
    // longer than the full transcript get the full target.
    const std::size_t len = partial.size();
    const IncrementalRecord* match = nullptr;
    if (len <= human.records.size() && human.records[len - 1].tokens.size() == len) {
      match = &human.records[len - 1];
    } else {
      for (const IncrementalRecord& r : human.records)
        if (r.tokens.size() == len) {
          match = &r;
          break;
        }
      if (match == nullptr) match = &human.full_record();
    }
    out.records.push_back(IncrementalRecord{partial, match->target, false});
  }
  if (!out.records.empty()) out.records.back().is_full = true;
  return out;
}

const IncrementalRecord& select_prefix(const IncrementalSeries& series, int percent,
                                       SelectMode mode) {
  if (percent <= 0 || percent > 100)
    throw DataError("percent must be in (0, 100], got " + std::to_string(percent));
  if (series.records.empty()) throw DataError("empty series " + series.utterance_id);
  const std::size_t n = series.full_record().tokens.size();
  const std::size_t i = std::max<std::size_t>(1, percent * n / 100);
  if (mode == SelectMode::exact) {
    for (const IncrementalRecord& r : series.records)
      if (r.tokens.size() == i) return r;
    throw DataError("series " + series.utterance_id + " has no record of length " +
                    std::to_string(i) + " (not a prefix series?)");
  }
  for (const IncrementalRecord& r : series.records)
    if (r.tokens.size() >= i) return r;
  return series.records.back();
}

void write_incremental(std::ostream& out, std::span<const IncrementalSeries> series) {
  for (const IncrementalSeries& s : series) {
    for (std::size_t i = 0; i < s.records.size(); ++i) {
      const IncrementalRecord& r = s.records[i];
      json j;
      j["utterance_id"] = s.utterance_id;
      j["index"] = i;
      j["tokens"] = r.tokens;
      j["target"] = r.target.text;
      j["is_full"] = r.is_full;
      out << j.dump() << '\n';
    }
  }
}

std::vector<IncrementalSeries> read_incremental(std::istream& in) {
  std::vector<IncrementalSeries> series;
  std::set<std::string> closed;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("not a JSON object", lineno);
    if (!j.contains("utterance_id") || !j.contains("tokens") || !j.contains("target"))
      throw ParseError("record needs `utterance_id`, `tokens` and `target`", lineno);
    std::string id = j["utterance_id"].is_string() ? j["utterance_id"].get<std::string>()
                                                   : j["utterance_id"].dump();
    IncrementalRecord rec;
    for (const auto& t : j["tokens"]) {
      if (!t.is_string()) throw ParseError("non-string entry in `tokens`", lineno);
      rec.tokens.push_back(t.get<std::string>());
    }
    rec.target.text = j["target"].get<std::string>();
    rec.is_full = j.value("is_full", false);
    if (series.empty() || series.back().utterance_id != id) {
      if (closed.count(id))
        throw ParseError("records for utterance " + id + " are not contiguous", lineno);
      if (!series.empty()) closed.insert(series.back().utterance_id);
      series.push_back(IncrementalSeries{id, {}});
    }
    series.back().records.push_back(std::move(rec));
  }
  return series;
}

}  // namespace incnlu
