#include "incnlu/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "incnlu/errors.hpp"
#include "incnlu/io.hpp"

namespace incnlu {

namespace {

using nlohmann::json;

// Two-decimal percentage, as the usual result tables print it.
double pct2(double fraction) {
  return static_cast<double>(std::llround(fraction * 10000.0)) / 100.0;
}

double round2(double value) {
  return static_cast<double>(std::llround(value * 100.0)) / 100.0;
}

std::vector<std::string> hyp_intents(const std::string& target) {
  const std::vector<std::string> tokens = split_ws(target);
  std::vector<std::string> intents;
  if (tokens.empty()) return intents;
  for (const std::string& part : split_char(tokens[0], '#'))
    if (!part.empty()) intents.push_back(part);
  return intents;
}

}  // namespace

EvalReport evaluate_partial(std::span<const IncrementalSeries> gold,
                            const HypothesisMap& hypotheses, std::span<const int> percents,
                            SelectMode mode, const SlotLexicon& lexicon) {
  if (gold.empty()) throw DataError("no gold series to evaluate");
  EvalReport report;
  for (int percent : percents) {
    std::vector<ScorePair> pairs;
    std::vector<IntentPair> intent_pairs;
    std::vector<std::string> missing;
    pairs.reserve(gold.size());
    for (const IncrementalSeries& series : gold) {
      const IncrementalRecord& record = select_prefix(series, percent, mode);
      const auto it = hypotheses.find({series.utterance_id, record.tokens.size()});
      if (it == hypotheses.end()) {
        missing.push_back(series.utterance_id + ":" + std::to_string(record.tokens.size()));
        continue;
      }
      ClassSequence ref = parse_target(record.target.text, lexicon);
      ClassSequence hyp = parse_target(it->second.target, lexicon);
      intent_pairs.emplace_back(intent_names(ref), intent_names(hyp));
      pairs.push_back(ScorePair{std::move(ref), std::move(hyp)});
    }
    if (!missing.empty())
      throw DataError("missing hypotheses for " + std::to_string(missing.size()) +
                      " selected prefixes at " + std::to_string(percent) + "%: " +
                      join(missing, ", "));
    PartialEvalRow row;
    row.percent = percent;
    row.scores = co_mc_scores(pairs);
    row.intents_accuracy = intents_accuracy(intent_pairs);
    row.pairs = pairs.size();
    report.partial_rows.push_back(std::move(row));
  }
  return report;
}

EvalReport evaluate_confidence(std::span<const ConfidenceTrace> traces,
                               const std::map<std::string, std::vector<std::string>>& gold_intents,
                               std::span<const double> thresholds) {
  if (traces.empty()) throw DataError("no confidence traces to evaluate");
  if (gold_intents.empty()) throw DataError("no gold intents to evaluate against");
  std::map<std::string, const ConfidenceTrace*> by_id;
  for (const ConfidenceTrace& trace : traces) {
    if (trace.entries.empty())
      throw DataError("trace for utterance " + trace.utterance_id + " has no full entry");
    by_id.emplace(trace.utterance_id, &trace);
  }
  std::vector<std::string> missing;
  for (const auto& [id, intents] : gold_intents)
    if (!by_id.count(id)) missing.push_back(id);
  if (!missing.empty())
    throw DataError("missing traces for " + std::to_string(missing.size()) +
                    " utterances: " + join(missing, ", "));

  EvalReport report;
  for (double threshold : thresholds) {
    if (threshold < 0.0 || threshold > 1.0 + 1e-9)
      throw DataError("confidence threshold out of range: " + std::to_string(threshold));
    std::vector<IntentPair> intent_pairs;
    double usage_sum = 0.0;
    for (const auto& [id, gold] : gold_intents) {
      const ConfidenceTrace& trace = *by_id.at(id);
      const TraceEntry* chosen = &trace.entries.back();
      for (const TraceEntry& entry : trace.entries) {
        if (entry.hypothesis.intent_confidence >= threshold) {
          chosen = &entry;
          break;
        }
      }
      intent_pairs.emplace_back(gold, hyp_intents(chosen->hypothesis.target));
      const double n = static_cast<double>(trace.full_len());
      // ASR partials can be longer than the final transcript; cap at 100.
      usage_sum += std::min(100.0, 100.0 * static_cast<double>(chosen->prefix_len) / n);
    }
    ConfidenceEvalRow row;
    row.threshold = threshold;
    row.intents_accuracy = intents_accuracy(intent_pairs);
    row.mean_token_percent = usage_sum / static_cast<double>(gold_intents.size());
    row.utterances = gold_intents.size();
    report.confidence_rows.push_back(row);
  }
  return report;
}

void write_hypotheses(
    std::ostream& out,
    std::span<const std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines) {
  for (const auto& [key, hyp] : lines) {
    json j;
    j["utterance_id"] = key.first;
    j["prefix_len"] = key.second;
    j["target"] = hyp.target;
    j["intent_confidence"] = hyp.intent_confidence;
    out << j.dump() << '\n';
  }
}

std::vector<std::pair<std::pair<std::string, std::size_t>, Hypothesis>> read_hypothesis_lines(
    std::istream& in) {
  std::vector<std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError("not a JSON object", lineno);
    if (!j.contains("utterance_id") || !j.contains("prefix_len") || !j.contains("target") ||
        !j.contains("intent_confidence"))
      throw ParseError(
          "hypothesis needs `utterance_id`, `prefix_len`, `target` and `intent_confidence`",
          lineno);
    std::string id = j["utterance_id"].is_string() ? j["utterance_id"].get<std::string>()
                                                   : j["utterance_id"].dump();
    if (!j["prefix_len"].is_number_unsigned() && !j["prefix_len"].is_number_integer())
      throw ParseError("`prefix_len` must be an integer", lineno);
    const long long len = j["prefix_len"].get<long long>();
    if (len < 1) throw ParseError("`prefix_len` must be >= 1", lineno);
    Hypothesis hyp;
    hyp.target = j["target"].get<std::string>();
    if (!j["intent_confidence"].is_number())
      throw ParseError("`intent_confidence` must be a number", lineno);
    hyp.intent_confidence = j["intent_confidence"].get<double>();
    if (hyp.intent_confidence < 0.0 || hyp.intent_confidence > 1.0)
      throw ParseError("`intent_confidence` out of [0, 1]", lineno);
    lines.emplace_back(std::make_pair(std::move(id), static_cast<std::size_t>(len)),
                       std::move(hyp));
  }
  return lines;
}

HypothesisMap hypothesis_map(
    std::span<const std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines) {
  HypothesisMap map;
  for (const auto& [key, hyp] : lines) map.emplace(key, hyp);  // first occurrence wins
  return map;
}

std::vector<ConfidenceTrace> build_traces(
    std::span<const std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines) {
  std::vector<ConfidenceTrace> traces;
  std::set<std::string> closed;
  for (const auto& [key, hyp] : lines) {
    if (traces.empty() || traces.back().utterance_id != key.first) {
      if (closed.count(key.first))
        throw DataError("hypothesis lines for utterance " + key.first + " are not contiguous");
      if (!traces.empty()) closed.insert(traces.back().utterance_id);
      traces.push_back(ConfidenceTrace{key.first, {}});
    }
    traces.back().entries.push_back(TraceEntry{key.second, hyp});
  }
  return traces;
}

void render_report_text(std::ostream& out, const EvalReport& report) {
  std::ostream::fmtflags flags = out.flags();
  out << std::fixed << std::setprecision(2);
  if (!report.partial_rows.empty()) {
    out << "percent  co-mc-f1  precision  recall  intents-acc  pairs\n";
    for (const PartialEvalRow& row : report.partial_rows) {
      out << std::setw(7) << row.percent << "  " << std::setw(8) << pct2(row.scores.f1) << "  "
          << std::setw(9) << pct2(row.scores.precision) << "  " << std::setw(6)
          << pct2(row.scores.recall) << "  " << std::setw(11) << pct2(row.intents_accuracy)
          << "  " << std::setw(5) << row.pairs << '\n';
    }
  }
  if (!report.confidence_rows.empty()) {
    out << "threshold  intents-acc  mean-tokens-used\n";
    for (const ConfidenceEvalRow& row : report.confidence_rows) {
      out << std::setw(9) << row.threshold << "  " << std::setw(11)
          << pct2(row.intents_accuracy) << "  " << std::setw(16)
          << round2(row.mean_token_percent) << '\n';
    }
  }
  out.flags(flags);
}

std::string report_to_json(const EvalReport& report) {
  json j;
  if (!report.partial_rows.empty()) {
    json rows = json::array();
    for (const PartialEvalRow& row : report.partial_rows) {
      json r;
      r["percent"] = row.percent;
      r["pairs"] = row.pairs;
      r["tp"] = row.scores.true_positives;
      r["ref_len"] = row.scores.ref_len_sum;
      r["hyp_len"] = row.scores.hyp_len_sum;
      r["precision"] = pct2(row.scores.precision);
      r["recall"] = pct2(row.scores.recall);
      r["co_mc_f1"] = pct2(row.scores.f1);
      r["intents_accuracy"] = pct2(row.intents_accuracy);
      rows.push_back(std::move(r));
    }
    j["partial"] = std::move(rows);
  }
  if (!report.confidence_rows.empty()) {
    json rows = json::array();
    for (const ConfidenceEvalRow& row : report.confidence_rows) {
      json r;
      r["threshold"] = row.threshold;
      r["utterances"] = row.utterances;
      r["intents_accuracy"] = pct2(row.intents_accuracy);
      r["mean_token_percent"] = round2(row.mean_token_percent);
      rows.push_back(std::move(r));
    }
    j["confidence"] = std::move(rows);
  }
  return j.dump(2);
}

}  // namespace incnlu
