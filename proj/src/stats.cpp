#include "incnlu/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "incnlu/errors.hpp"
#include "incnlu/io.hpp"

namespace incnlu {

CorpusStats compute_stats(std::span<const AnnotatedUtterance> records) {
  if (records.empty()) throw DataError("cannot compute stats of an empty corpus");
  CorpusStats stats;
  stats.utterances = records.size();
  std::size_t token_sum = 0;
  std::size_t chunk_sum = 0;
  std::map<std::string, std::size_t> label_counts;
  std::set<std::string> slots;
  for (const AnnotatedUtterance& u : records) {
    token_sum += u.tokens.size();
    label_counts[join(u.intents, "#")] += 1;
    for (std::size_t i = 0; i < u.tags.size(); ++i) {
      const std::string& tag = u.tags[i];
      if (tag.size() > 2 && tag[1] == '-') {
        if (tag[0] == 'B')
          ++chunk_sum;
        else if (tag[0] == 'I' && (i == 0 || u.tags[i - 1] == "O"))
          ++chunk_sum;  // tolerate orphaned continuations in uncleaned data
        slots.insert(tag.substr(2));
      }
    }
  }
  stats.avg_tokens = static_cast<double>(token_sum) / static_cast<double>(records.size());
  stats.avg_params = static_cast<double>(chunk_sum) / static_cast<double>(records.size());
  stats.slot_count = slots.size();
  for (const auto& [label, count] : label_counts)
    stats.intent_percent.emplace_back(
        label, 100.0 * static_cast<double>(count) / static_cast<double>(records.size()));
  std::sort(stats.intent_percent.begin(), stats.intent_percent.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return stats;
}

void render_stats_text(std::ostream& out, const CorpusStats& stats) {
  std::ostream::fmtflags flags = out.flags();
  out << std::fixed << std::setprecision(2);
  out << "utterances:      " << stats.utterances << '\n';
  out << "avg tokens:      " << stats.avg_tokens << '\n';
  out << "avg parameters:  " << stats.avg_params << '\n';
  out << "slot names:      " << stats.slot_count << '\n';
  out << "intents distribution (percent):\n";
  for (const auto& [label, pct] : stats.intent_percent)
    out << "  " << std::setw(6) << pct << "  " << label << '\n';
  out.flags(flags);
}

std::string stats_to_json(const CorpusStats& stats) {
  nlohmann::json j;
  j["utterances"] = stats.utterances;
  j["avg_tokens"] = stats.avg_tokens;
  j["avg_params"] = stats.avg_params;
  j["slot_count"] = stats.slot_count;
  nlohmann::json dist = nlohmann::json::array();
  for (const auto& [label, pct] : stats.intent_percent) {
    nlohmann::json row;
    row["intents"] = label;
    row["percent"] = static_cast<double>(std::llround(pct * 100.0)) / 100.0;
    dist.push_back(std::move(row));
  }
  j["intents_distribution"] = std::move(dist);
  return j.dump(2);
}

}  // namespace incnlu
