#include "incnlu/baseline.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "incnlu/errors.hpp"
#include "incnlu/io.hpp"
#include "incnlu/seq2seq.hpp"

namespace incnlu {

namespace {

constexpr std::string_view kModelMagic = "incnlu-baseline";
constexpr int kModelVersion = 1;

std::string class_label(const AnnotatedUtterance& u) { return join(u.intents, "#"); }

// Most frequent tag for a token; ties go to the lexicographically smaller
// tag so predictions never depend on map iteration order.
std::string best_tag(const std::map<std::string, std::uint64_t>& counts) {
  std::string best;
  std::uint64_t best_count = 0;
  for (const auto& [tag, count] : counts) {
    if (count > best_count) {
      best = tag;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

BaselineModel train_baseline(std::span<const AnnotatedUtterance> records, double alpha) {
  if (records.empty()) throw DataError("cannot train a baseline on an empty corpus");
  if (!(alpha > 0.0)) throw DataError("alpha must be > 0");
  BaselineModel model;
  model.alpha = alpha;
  std::set<std::string> vocab;
  for (const AnnotatedUtterance& u : records) {
    const std::string label = class_label(u);
    model.class_counts[label] += 1;
    model.total_utterances += 1;
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      model.token_counts[label][u.tokens[i]] += 1;
      model.class_token_totals[label] += 1;
      model.tag_counts[u.tokens[i]][u.tags[i]] += 1;
      vocab.insert(u.tokens[i]);
    }
  }
  model.vocabulary_size = vocab.size();
  return model;
}

std::vector<std::pair<std::string, double>> intent_posterior(const BaselineModel& model,
                                                             std::span<const std::string> prefix) {
  if (model.class_counts.empty()) throw DataError("baseline model has no classes");
  std::vector<std::pair<std::string, double>> log_joint;
  log_joint.reserve(model.class_counts.size());
  // One extra vocabulary cell absorbs unseen tokens, so every class assigns
  // them the smoothed floor alpha / (total + alpha * (V + 1)).
  const double denom_cells = static_cast<double>(model.vocabulary_size) + 1.0;
  for (const auto& [label, count] : model.class_counts) {
    double lp = std::log(static_cast<double>(count) /
                         static_cast<double>(model.total_utterances));
    const auto totals_it = model.class_token_totals.find(label);
    const double total =
        totals_it != model.class_token_totals.end() ? static_cast<double>(totals_it->second) : 0.0;
    const double denom = total + model.alpha * denom_cells;
    const auto tokens_it = model.token_counts.find(label);
    for (const std::string& token : prefix) {
      double token_count = 0.0;
      if (tokens_it != model.token_counts.end()) {
        const auto it = tokens_it->second.find(token);
        if (it != tokens_it->second.end()) token_count = static_cast<double>(it->second);
      }
      lp += std::log((token_count + model.alpha) / denom);
    }
    log_joint.emplace_back(label, lp);
  }
  double max_lp = log_joint.front().second;
  for (const auto& [label, lp] : log_joint) max_lp = std::max(max_lp, lp);
  double norm = 0.0;
  for (auto& [label, lp] : log_joint) {
    lp = std::exp(lp - max_lp);
    norm += lp;
  }
  for (auto& [label, lp] : log_joint) lp /= norm;
  return log_joint;
}

Hypothesis predict(const BaselineModel& model, std::span<const std::string> prefix) {
  if (prefix.empty()) throw DataError("cannot predict on an empty prefix");
  const auto posterior = intent_posterior(model, prefix);
  std::size_t best = 0;
  for (std::size_t i = 1; i < posterior.size(); ++i)
    if (posterior[i].second > posterior[best].second) best = i;  // labels sorted; first max wins

  AnnotatedUtterance induced;
  induced.tokens.assign(prefix.begin(), prefix.end());
  induced.tags.reserve(prefix.size());
  for (const std::string& token : prefix) {
    const auto it = model.tag_counts.find(token);
    induced.tags.push_back(it != model.tag_counts.end() ? best_tag(it->second) : "O");
  }
  // IOB2 repair: an I-x that does not continue a B-x/I-x chunk becomes B-x.
  for (std::size_t i = 0; i < induced.tags.size(); ++i) {
    std::string& tag = induced.tags[i];
    if (tag.size() > 2 && tag[0] == 'I' && tag[1] == '-') {
      const std::string slot = tag.substr(2);
      const bool continues =
          i > 0 && (induced.tags[i - 1] == "B-" + slot || induced.tags[i - 1] == "I-" + slot);
      if (!continues) tag = "B-" + slot;
    }
  }
  induced.intents = split_char(posterior[best].first, '#');

  Hypothesis hyp;
  hyp.target = iob_to_target(induced).text;
  hyp.intent_confidence = posterior[best].second;
  return hyp;
}

void save_model(std::ostream& out, const BaselineModel& model) {
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out.precision(17);
  out << "alpha " << model.alpha << '\n';
  for (const auto& [label, count] : model.class_counts)
    out << "class " << label << ' ' << count << '\n';
  for (const auto& [label, tokens] : model.token_counts)
    for (const auto& [token, count] : tokens)
      out << "tokc " << label << ' ' << token << ' ' << count << '\n';
  for (const auto& [token, tags] : model.tag_counts)
    for (const auto& [tag, count] : tags)
      out << "tagc " << token << ' ' << tag << ' ' << count << '\n';
}

BaselineModel load_model(std::istream& in) {
  BaselineModel model;
  std::string line;
  std::size_t lineno = 0;
  std::set<std::string> vocab;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (!have_header) {
      int version = 0;
      if (kind != kModelMagic || !(fields >> version) || version != kModelVersion)
        throw ParseError("not a baseline model dump (expected `" + std::string(kModelMagic) +
                             " " + std::to_string(kModelVersion) + "` header)",
                         lineno);
      have_header = true;
      continue;
    }
    if (kind == "alpha") {
      if (!(fields >> model.alpha) || !(model.alpha > 0.0))
        throw ParseError("bad alpha", lineno);
    } else if (kind == "class") {
      std::string label;
      std::uint64_t count = 0;
      if (!(fields >> label >> count)) throw ParseError("bad class line", lineno);
      model.class_counts[label] += count;
      model.total_utterances += count;
    } else if (kind == "tokc") {
      std::string label, token;
      std::uint64_t count = 0;
      if (!(fields >> label >> token >> count)) throw ParseError("bad tokc line", lineno);
      model.token_counts[label][token] += count;
      model.class_token_totals[label] += count;
      vocab.insert(token);
    } else if (kind == "tagc") {
      std::string token, tag;
      std::uint64_t count = 0;
      if (!(fields >> token >> tag >> count)) throw ParseError("bad tagc line", lineno);
      model.tag_counts[token][tag] += count;
    } else {
      throw ParseError("unknown record kind `" + kind + "`", lineno);
    }
  }
  if (!have_header) throw DataError("empty baseline model dump");
  if (model.class_counts.empty()) throw DataError("baseline model dump has no classes");
  model.vocabulary_size = vocab.size();
  return model;
}

}  // namespace incnlu
