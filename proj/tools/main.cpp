#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "incnlu/adapter.hpp"
#include "incnlu/baseline.hpp"
#include "incnlu/bench.hpp"
#include "incnlu/corpus.hpp"
#include "incnlu/errors.hpp"
#include "incnlu/evaluation.hpp"
#include "incnlu/incremental.hpp"
#include "incnlu/io.hpp"
#include "incnlu/metrics.hpp"
#include "incnlu/noise.hpp"
#include "incnlu/seq2seq.hpp"
#include "incnlu/stats.hpp"

using nlohmann::json;

namespace {

using namespace incnlu;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitProtocol = 3;

struct CorpusInput {
  std::string path;
  std::string format = "auto";
  bool keep_case = false;

  void attach(CLI::App* cmd, const char* flag = "--in", bool required = true) {
    auto* opt = cmd->add_option(flag, path, "corpus file (TSV or JSONL)");
    if (required) opt->required();
    cmd->add_option("--format", format, "corpus format")
        ->check(CLI::IsMember({"auto", "tsv", "jsonl"}))
        ->capture_default_str();
    cmd->add_flag("--keep-case", keep_case, "do not lowercase tokens on import");
  }

  std::vector<AnnotatedUtterance> load() const {
    CorpusFormat f = CorpusFormat::autodetect;
    if (format == "tsv") f = CorpusFormat::tsv;
    if (format == "jsonl") f = CorpusFormat::jsonl;
    return load_corpus(path, f, CorpusOptions{!keep_case});
  }
};

std::vector<IncrementalSeries> load_incremental(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return read_incremental(in);
}

std::vector<std::pair<std::pair<std::string, std::size_t>, Hypothesis>> load_hypotheses(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return read_hypothesis_lines(in);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Reports go to --out when given (atomically), else to stdout.
void emit_report(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    atomic_write_file(out_path, [&](std::ostream& out) {
      out << content;
      if (!content.empty() && content.back() != '\n') out << '\n';
    });
  }
}

// ---------------------------------------------------------------- convert

struct ConvertArgs {
  CorpusInput in;
  std::string targets_path, sources_path, lexicon_path, jsonl_path, tsv_path;
};

void run_convert(const ConvertArgs& args) {
  const auto records = args.in.load();
  if (args.targets_path.empty() && args.sources_path.empty() && args.lexicon_path.empty() &&
      args.jsonl_path.empty() && args.tsv_path.empty())
    throw DataError("convert: no outputs requested (see --targets/--sources/--lexicon/--jsonl/--tsv)");
  if (!args.targets_path.empty())
    atomic_write_file(args.targets_path, [&](std::ostream& out) {
      for (const AnnotatedUtterance& u : records) out << iob_to_target(u).text << '\n';
    });
  if (!args.sources_path.empty())
    atomic_write_file(args.sources_path, [&](std::ostream& out) {
      for (const AnnotatedUtterance& u : records) out << join(u.tokens, " ") << '\n';
    });
  if (!args.lexicon_path.empty())
    atomic_write_file(args.lexicon_path,
                      [&](std::ostream& out) { write_lexicon(out, slot_lexicon(records)); });
  if (!args.jsonl_path.empty())
    atomic_write_file(args.jsonl_path,
                      [&](std::ostream& out) { write_corpus_jsonl(out, records); });
  if (!args.tsv_path.empty())
    atomic_write_file(args.tsv_path, [&](std::ostream& out) { write_iob_tsv(out, records); });
  std::cerr << "convert: " << records.size() << " utterances\n";
}

// --------------------------------------------------------- gen-incremental

struct GenIncrementalArgs {
  CorpusInput in;
  std::string out_path;
  bool full_only = false;
};

void run_gen_incremental(const GenIncrementalArgs& args) {
  const auto records = args.in.load();
  std::vector<IncrementalSeries> series;
  series.reserve(records.size());
  std::size_t total = 0;
  for (const AnnotatedUtterance& u : records) {
    IncrementalSeries s = generate_prefixes(u);
    if (args.full_only) {
      // Keep just the final record; useful for building full-utterance
      // datasets in the same file format.
      s.records.erase(s.records.begin(), s.records.end() - 1);
    }
    total += s.records.size();
    series.push_back(std::move(s));
  }
  atomic_write_file(args.out_path,
                    [&](std::ostream& out) { write_incremental(out, series); });
  std::cerr << "gen-incremental: " << records.size() << " utterances, " << total
            << " records\n";
}

// --------------------------------------------------------------- add-noise

struct AddNoiseArgs {
  std::string in_path, vocab_path, out_path;
  double tau = 0.08;
  std::uint64_t seed = 0;
  double sub_weight = 5.0, ins_weight = 1.0, del_weight = 1.0;
};

void run_add_noise(const AddNoiseArgs& args) {
  auto series = load_incremental(args.in_path);
  std::ifstream vocab_in(args.vocab_path);
  if (!vocab_in) throw DataError("cannot open file: " + args.vocab_path);
  Vocabulary vocab = read_vocabulary(vocab_in);
  NoiseConfig cfg;
  cfg.tau = args.tau;
  cfg.seed = args.seed;
  cfg.substitute_weight = args.sub_weight;
  cfg.insert_weight = args.ins_weight;
  cfg.delete_weight = args.del_weight;
  NoiseGenerator generator(std::move(vocab), cfg);
  NoiseStats stats;
  for (IncrementalSeries& s : series) {
    const std::uint64_t stream_seed = NoiseGenerator::derive_seed(cfg.seed, s.utterance_id);
    for (IncrementalRecord& r : s.records)
      r.tokens = generator.apply(r.tokens, stream_seed, &stats);
  }
  atomic_write_file(args.out_path,
                    [&](std::ostream& out) { write_incremental(out, series); });
  std::cerr << "add-noise: " << stats.positions << " positions, " << stats.substitutions
            << " substitutions, " << stats.insertions << " insertions, " << stats.deletions
            << " deletions\n";
}

// -------------------------------------------------------------- build-vocab

struct BuildVocabArgs {
  CorpusInput train;
  std::string external_path, out_path;
  std::size_t size = 10000;
};

void run_build_vocab(const BuildVocabArgs& args) {
  const auto records = args.train.load();
  std::vector<std::string> train_tokens;
  for (const AnnotatedUtterance& u : records)
    train_tokens.insert(train_tokens.end(), u.tokens.begin(), u.tokens.end());
  std::unordered_map<std::string, std::uint64_t> external_counts;
  if (!args.external_path.empty()) {
    const std::string text = read_file(args.external_path);
    for (const std::string& token :
         split_ws(args.train.keep_case ? text : to_lower(text)))
      external_counts[token] += 1;
  }
  const Vocabulary vocab = build_vocabulary(train_tokens, external_counts, args.size);
  atomic_write_file(args.out_path,
                    [&](std::ostream& out) { write_vocabulary(out, vocab); });
  std::cerr << "build-vocab: " << vocab.in_domain_count << " in-domain + "
            << vocab.words.size() - vocab.in_domain_count << " filler words\n";
}

// ---------------------------------------------------------------- align-asr

struct AlignAsrArgs {
  std::string partials_path, human_path, out_path;
};

void run_align_asr(const AlignAsrArgs& args) {
  // Partials file: one JSON object per line, {"utterance_id": ..., "tokens":
  // [...]}, revisions of one utterance contiguous and in emission order.
  std::map<std::string, std::vector<std::vector<std::string>>> partials;
  std::vector<std::string> order;
  {
    std::ifstream in(args.partials_path);
    if (!in) throw DataError("cannot open file: " + args.partials_path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("utterance_id") ||
          !j.contains("tokens") || !j["tokens"].is_array())
        throw ParseError("expected {\"utterance_id\": ..., \"tokens\": [...]}", lineno);
      std::string id = j["utterance_id"].is_string() ? j["utterance_id"].get<std::string>()
                                                     : j["utterance_id"].dump();
      std::vector<std::string> tokens;
      for (const auto& t : j["tokens"]) {
        if (!t.is_string()) throw ParseError("non-string entry in `tokens`", lineno);
        tokens.push_back(t.get<std::string>());
      }
      if (!partials.count(id)) order.push_back(id);
      partials[id].push_back(std::move(tokens));
    }
  }
  const auto human = load_incremental(args.human_path);
  std::map<std::string, const IncrementalSeries*> human_by_id;
  for (const IncrementalSeries& s : human) human_by_id.emplace(s.utterance_id, &s);
  for (const std::string& id : order)
    if (!human_by_id.count(id))
      throw DataError("ASR partials for utterance " + id + " have no human series to align to");

  std::vector<IncrementalSeries> aligned;
  AsrAlignStats stats;
  std::size_t without_partials = 0;
  for (const IncrementalSeries& s : human) {
    const auto it = partials.find(s.utterance_id);
    if (it == partials.end()) {
      ++without_partials;
      continue;
    }
    aligned.push_back(align_asr_partials(it->second, s, &stats));
  }
  if (aligned.empty()) throw DataError("no utterance had ASR partials to align");
  atomic_write_file(args.out_path,
                    [&](std::ostream& out) { write_incremental(out, aligned); });
  std::cerr << "align-asr: " << aligned.size() << " utterances";
  if (without_partials > 0) std::cerr << ", " << without_partials << " without partials";
  if (stats.skipped_empty > 0) std::cerr << ", " << stats.skipped_empty << " empty partials skipped";
  std::cerr << '\n';
}

// ------------------------------------------------------------- run-baseline

struct RunBaselineArgs {
  CorpusInput train;
  std::string model_path, save_model_path;
  double alpha = 1.0;
  std::string in_path, out_path;
  bool adapter = false;
};

BaselineModel obtain_model(const RunBaselineArgs& args) {
  if (!args.train.path.empty() && !args.model_path.empty())
    throw DataError("pass either --train or --model, not both");
  if (!args.train.path.empty()) {
    BaselineModel model = train_baseline(args.train.load(), args.alpha);
    if (!args.save_model_path.empty())
      atomic_write_file(args.save_model_path,
                        [&](std::ostream& out) { save_model(out, model); });
    return model;
  }
  if (args.model_path.empty()) throw DataError("need --train or --model");
  std::ifstream in(args.model_path);
  if (!in) throw DataError("cannot open file: " + args.model_path);
  return load_model(in);
}

void run_run_baseline(const RunBaselineArgs& args) {
  const BaselineModel model = obtain_model(args);
  if (args.adapter) {
    serve_model_protocol(std::cin, std::cout, [&](const PrefixRequest& request) {
      return predict(model, request.tokens);
    });
    return;
  }
  if (args.in_path.empty()) {
    if (args.save_model_path.empty())
      throw DataError("nothing to do: pass --in/--out, --adapter or --save-model");
    return;  // pure training run
  }
  if (args.out_path.empty()) throw DataError("--in needs --out");
  const auto series = load_incremental(args.in_path);
  std::vector<std::pair<std::pair<std::string, std::size_t>, Hypothesis>> lines;
  for (const IncrementalSeries& s : series)
    for (const IncrementalRecord& r : s.records)
      lines.emplace_back(std::make_pair(s.utterance_id, r.tokens.size()),
                         predict(model, r.tokens));
  atomic_write_file(args.out_path,
                    [&](std::ostream& out) { write_hypotheses(out, lines); });
  std::cerr << "run-baseline: " << lines.size() << " hypotheses\n";
}

// ---------------------------------------------------------------- run-model

struct RunModelArgs {
  std::string command, in_path, out_path;
  double timeout_s = 60.0;
};

void run_run_model(const RunModelArgs& args) {
  const auto series = load_incremental(args.in_path);
  std::vector<PrefixRequest> requests;
  for (const IncrementalSeries& s : series)
    for (const IncrementalRecord& r : s.records)
      requests.push_back(PrefixRequest{s.utterance_id, r.tokens.size(), r.tokens});
  const ExternalRunResult result = run_external_model(args.command, requests, args.timeout_s);
  if (!result.ok()) {
    // Keep whatever arrived before the failure.
    if (!result.responses.empty()) {
      atomic_write_file(args.out_path + ".partial", [&](std::ostream& out) {
        write_hypotheses(out, result.responses);
      });
      std::cerr << "run-model: kept " << result.responses.size() << " responses in "
                << args.out_path << ".partial\n";
    }
    throw ProtocolError(result.error);
  }
  atomic_write_file(args.out_path,
                    [&](std::ostream& out) { write_hypotheses(out, result.responses); });
  std::cerr << "run-model: " << result.responses.size() << " hypotheses\n";
}

// -------------------------------------------------------------------- score

struct ScoreArgs {
  std::string refs_path, hyps_path, lexicon_path, out_path;
  bool as_json = false;
};

void run_score(const ScoreArgs& args) {
  const std::vector<std::string> refs = read_lines(args.refs_path);
  const std::vector<std::string> hyps = read_lines(args.hyps_path);
  if (refs.size() != hyps.size())
    throw DataError("reference and hypothesis files differ in length: " +
                    std::to_string(refs.size()) + " vs " + std::to_string(hyps.size()));
  if (refs.empty()) throw DataError("empty reference file");
  std::ifstream lex_in(args.lexicon_path);
  if (!lex_in) throw DataError("cannot open file: " + args.lexicon_path);
  const SlotLexicon lexicon = read_lexicon(lex_in);

  std::vector<ScorePair> pairs;
  std::vector<IntentPair> intent_pairs;
  pairs.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    ClassSequence ref = parse_target(refs[i], lexicon);
    ClassSequence hyp = parse_target(hyps[i], lexicon);
    intent_pairs.emplace_back(intent_names(ref), intent_names(hyp));
    pairs.push_back(ScorePair{std::move(ref), std::move(hyp)});
  }
  const CorpusScores scores = co_mc_scores(pairs);
  const double accuracy = intents_accuracy(intent_pairs);

  auto pct2 = [](double x) { return static_cast<double>(std::llround(x * 10000.0)) / 100.0; };
  std::ostringstream out;
  if (args.as_json) {
    json j;
    j["pairs"] = pairs.size();
    j["tp"] = scores.true_positives;
    j["ref_len"] = scores.ref_len_sum;
    j["hyp_len"] = scores.hyp_len_sum;
    j["precision"] = pct2(scores.precision);
    j["recall"] = pct2(scores.recall);
    j["co_mc_f1"] = pct2(scores.f1);
    j["intents_accuracy"] = pct2(accuracy);
    out << j.dump(2) << '\n';
  } else {
    out << std::fixed << std::setprecision(2);
    out << "pairs:            " << pairs.size() << '\n';
    out << "true positives:   " << scores.true_positives << " (ref " << scores.ref_len_sum
        << ", hyp " << scores.hyp_len_sum << ")\n";
    out << "precision:        " << pct2(scores.precision) << '\n';
    out << "recall:           " << pct2(scores.recall) << '\n';
    out << "co-mc f1:         " << pct2(scores.f1) << '\n';
    out << "intents accuracy: " << pct2(accuracy) << '\n';
  }
  emit_report(args.out_path, out.str());
}

// ------------------------------------------------------------- eval-partial

struct EvalPartialArgs {
  std::string gold_path, hyps_path, lexicon_path, out_path;
  std::vector<int> percents{100, 75, 50, 25};
  std::string mode = "exact";
  bool as_json = false;
};

void run_eval_partial(const EvalPartialArgs& args) {
  const auto gold = load_incremental(args.gold_path);
  const auto lines = load_hypotheses(args.hyps_path);
  std::ifstream lex_in(args.lexicon_path);
  if (!lex_in) throw DataError("cannot open file: " + args.lexicon_path);
  const SlotLexicon lexicon = read_lexicon(lex_in);
  const EvalReport report =
      evaluate_partial(gold, hypothesis_map(lines), args.percents,
                       args.mode == "exact" ? SelectMode::exact : SelectMode::at_least, lexicon);
  std::ostringstream out;
  if (args.as_json)
    out << report_to_json(report) << '\n';
  else
    render_report_text(out, report);
  emit_report(args.out_path, out.str());
}

// ---------------------------------------------------------- eval-confidence

struct EvalConfidenceArgs {
  std::string gold_path, hyps_path, out_path;
  std::vector<double> thresholds{0.95, 0.90, 0.85, 0.80};
  bool as_json = false;
};

void run_eval_confidence(const EvalConfidenceArgs& args) {
  const auto gold = load_incremental(args.gold_path);
  const auto lines = load_hypotheses(args.hyps_path);
  const auto traces = build_traces(lines);
  std::map<std::string, std::vector<std::string>> gold_intents;
  for (const IncrementalSeries& s : gold) {
    std::vector<std::string> intents;
    const std::vector<std::string> tokens = split_ws(s.full_record().target.text);
    if (!tokens.empty())
      for (const std::string& part : split_char(tokens[0], '#'))
        if (!part.empty()) intents.push_back(part);
    gold_intents[s.utterance_id] = std::move(intents);
  }
  const EvalReport report = evaluate_confidence(traces, gold_intents, args.thresholds);
  std::ostringstream out;
  if (args.as_json)
    out << report_to_json(report) << '\n';
  else
    render_report_text(out, report);
  emit_report(args.out_path, out.str());
}

// -------------------------------------------------------------------- stats

struct StatsArgs {
  CorpusInput in;
  std::string out_path;
  bool as_json = false;
};

void run_stats(const StatsArgs& args) {
  const CorpusStats stats = compute_stats(args.in.load());
  std::ostringstream out;
  if (args.as_json)
    out << stats_to_json(stats) << '\n';
  else
    render_stats_text(out, stats);
  emit_report(args.out_path, out.str());
}

// ------------------------------------------------------------ bench-latency

struct BenchArgs {
  CorpusInput in;
  CorpusInput train;
  std::string model_path, out_path;
  double alpha = 1.0;
  double duration_s = 15.0;
  double budget_ms = 0.0;
  bool as_json = false;
};

void run_bench(const BenchArgs& args) {
  BaselineModel model;
  if (!args.train.path.empty() && !args.model_path.empty())
    throw DataError("pass either --train or --model, not both");
  if (!args.train.path.empty()) {
    model = train_baseline(args.train.load(), args.alpha);
  } else if (!args.model_path.empty()) {
    std::ifstream in(args.model_path);
    if (!in) throw DataError("cannot open file: " + args.model_path);
    model = load_model(in);
  } else {
    throw DataError("need --train or --model");
  }
  const auto records = args.in.load();
  std::vector<IncrementalSeries> series;
  series.reserve(records.size());
  for (const AnnotatedUtterance& u : records) series.push_back(generate_prefixes(u));

  const LatencyReport report = bench_latency(
      [&](std::span<const std::string> prefix) { return predict(model, prefix); }, series,
      args.duration_s);

  double worst = 0.0;
  json j;
  j["duration_s"] = report.duration_s;
  j["thread_count"] = report.thread_count;
  json rows = json::array();
  for (const UtteranceLatency& lat : report.utterances) {
    worst = std::max(worst, lat.max_ms);
    json r;
    r["utterance_id"] = lat.utterance_id;
    r["prefixes"] = lat.prefix_count;
    r["samples"] = lat.samples;
    r["max_ms"] = lat.max_ms;
    r["mean_ms"] = lat.mean_ms;
    r["p99_ms"] = lat.p99_ms;
    rows.push_back(std::move(r));
  }
  j["utterances"] = std::move(rows);
  if (args.budget_ms > 0.0) {
    j["budget_ms"] = args.budget_ms;
    j["within_budget"] = worst <= args.budget_ms;
  }

  std::ostringstream out;
  if (args.as_json) {
    out << j.dump(2) << '\n';
  } else {
    out << std::fixed << std::setprecision(3);
    out << "duration: " << report.duration_s << " s, threads: " << report.thread_count << '\n';
    out << "utterance  prefixes  samples  max-ms  mean-ms  p99-ms\n";
    for (const UtteranceLatency& lat : report.utterances)
      out << lat.utterance_id << "  " << lat.prefix_count << "  " << lat.samples << "  "
          << lat.max_ms << "  " << lat.mean_ms << "  " << lat.p99_ms << '\n';
  }
  emit_report(args.out_path, out.str());
  if (args.budget_ms > 0.0 && worst > args.budget_ms)
    throw DataError("per-prefix max " + std::to_string(worst) + " ms exceeds budget " +
                    std::to_string(args.budget_ms) + " ms");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"incremental NLU dataset and evaluation toolkit"};
  app.require_subcommand(1);

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand(
      "convert", "convert an annotated corpus to target sequences and sibling artifacts");
  convert_args.in.attach(convert);
  convert->add_option("--targets", convert_args.targets_path, "write one target per line");
  convert->add_option("--sources", convert_args.sources_path, "write one source utterance per line");
  convert->add_option("--lexicon", convert_args.lexicon_path, "write the slot lexicon");
  convert->add_option("--jsonl", convert_args.jsonl_path, "re-serialize the corpus as JSONL");
  convert->add_option("--tsv", convert_args.tsv_path, "re-serialize the corpus as TSV");

  GenIncrementalArgs gen_args;
  auto* gen = app.add_subcommand("gen-incremental",
                                 "split utterances into prefix records with partial targets");
  gen_args.in.attach(gen);
  gen->add_option("--out", gen_args.out_path, "incremental dataset file")->required();
  gen->add_flag("--full-only", gen_args.full_only, "emit only the full record per utterance");

  AddNoiseArgs noise_args;
  auto* add_noise =
      app.add_subcommand("add-noise", "inject substitute/insert/delete noise into source tokens");
  add_noise->add_option("--in", noise_args.in_path, "incremental dataset file")->required();
  add_noise->add_option("--vocab", noise_args.vocab_path, "vocabulary file")->required();
  add_noise->add_option("--tau", noise_args.tau, "expected operations per token")
      ->capture_default_str();
  add_noise->add_option("--seed", noise_args.seed, "corpus noise seed")->required();
  add_noise->add_option("--out", noise_args.out_path, "output file")->required();
  add_noise->add_option("--sub-weight", noise_args.sub_weight, "substitution weight")
      ->capture_default_str();
  add_noise->add_option("--ins-weight", noise_args.ins_weight, "insertion weight")
      ->capture_default_str();
  add_noise->add_option("--del-weight", noise_args.del_weight, "deletion weight")
      ->capture_default_str();

  BuildVocabArgs vocab_args;
  auto* build_vocab = app.add_subcommand(
      "build-vocab", "collect training tokens plus frequent external fillers");
  vocab_args.train.attach(build_vocab, "--train");
  build_vocab->add_option("--external", vocab_args.external_path,
                          "external token stream (plain text)");
  build_vocab->add_option("--size", vocab_args.size, "target vocabulary size")
      ->capture_default_str();
  build_vocab->add_option("--out", vocab_args.out_path, "vocabulary file")->required();

  AlignAsrArgs align_args;
  auto* align = app.add_subcommand(
      "align-asr", "attach human-prefix targets to ASR partials by token count");
  align->add_option("--partials", align_args.partials_path,
                    "ASR partials (JSONL: utterance_id, tokens)")
      ->required();
  align->add_option("--human", align_args.human_path, "human incremental dataset")->required();
  align->add_option("--out", align_args.out_path, "output file")->required();

  RunBaselineArgs baseline_args;
  auto* run_baseline = app.add_subcommand(
      "run-baseline", "train or load the baseline model and emit hypotheses");
  baseline_args.train.attach(run_baseline, "--train", /*required=*/false);
  run_baseline->add_option("--alpha", baseline_args.alpha, "smoothing strength")
      ->capture_default_str();
  run_baseline->add_option("--model", baseline_args.model_path, "load a saved model");
  run_baseline->add_option("--save-model", baseline_args.save_model_path,
                           "persist the trained model");
  run_baseline->add_option("--in", baseline_args.in_path, "incremental dataset file");
  run_baseline->add_option("--out", baseline_args.out_path, "hypothesis file");
  run_baseline->add_flag("--adapter", baseline_args.adapter,
                         "speak the model line protocol on stdin/stdout");

  RunModelArgs model_args;
  auto* run_model = app.add_subcommand(
      "run-model", "drive an external model through the line protocol");
  run_model->add_option("--cmd", model_args.command, "adapter command (run under /bin/sh)")
      ->required();
  run_model->add_option("--in", model_args.in_path, "incremental dataset file")->required();
  run_model->add_option("--out", model_args.out_path, "hypothesis file")->required();
  run_model->add_option("--timeout", model_args.timeout_s,
                        "seconds to wait per response, 0 waits forever")
      ->capture_default_str();

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "CO-MC scores for aligned target files");
  score->add_option("--refs", score_args.refs_path, "reference targets, one per line")
      ->required();
  score->add_option("--hyps", score_args.hyps_path, "hypothesis targets, one per line")
      ->required();
  score->add_option("--lexicon", score_args.lexicon_path, "slot lexicon file")->required();
  score->add_flag("--json", score_args.as_json, "emit JSON");
  score->add_option("--out", score_args.out_path, "write the report to a file");

  EvalPartialArgs partial_args;
  auto* eval_partial =
      app.add_subcommand("eval-partial", "partial-percentage evaluation scheme");
  eval_partial->add_option("--gold", partial_args.gold_path, "gold incremental dataset")
      ->required();
  eval_partial->add_option("--hyps", partial_args.hyps_path, "hypothesis file")->required();
  eval_partial->add_option("--lexicon", partial_args.lexicon_path, "slot lexicon file")
      ->required();
  eval_partial->add_option("--percents", partial_args.percents, "percentage cuts")
      ->delimiter(',')
      ->capture_default_str();
  eval_partial->add_option("--mode", partial_args.mode, "prefix selection mode")
      ->check(CLI::IsMember({"exact", "at_least"}))
      ->capture_default_str();
  eval_partial->add_flag("--json", partial_args.as_json, "emit JSON");
  eval_partial->add_option("--out", partial_args.out_path, "write the report to a file");

  EvalConfidenceArgs confidence_args;
  auto* eval_confidence =
      app.add_subcommand("eval-confidence", "confidence-based early-decision scheme");
  eval_confidence->add_option("--gold", confidence_args.gold_path, "gold incremental dataset")
      ->required();
  eval_confidence->add_option("--hyps", confidence_args.hyps_path, "hypothesis file")
      ->required();
  eval_confidence->add_option("--thresholds", confidence_args.thresholds,
                              "confidence thresholds in [0, 1]")
      ->delimiter(',')
      ->capture_default_str();
  eval_confidence->add_flag("--json", confidence_args.as_json, "emit JSON");
  eval_confidence->add_option("--out", confidence_args.out_path, "write the report to a file");

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "corpus statistics and intents distribution");
  stats_args.in.attach(stats);
  stats->add_flag("--json", stats_args.as_json, "emit JSON");
  stats->add_option("--out", stats_args.out_path, "write the report to a file");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench-latency",
                                   "per-prefix latency of the baseline over prefix series");
  bench_args.in.attach(bench);
  bench->add_option("--train", bench_args.train.path, "train a baseline from this corpus");
  bench->add_option("--model", bench_args.model_path, "load a saved baseline model");
  bench->add_option("--alpha", bench_args.alpha, "smoothing strength")->capture_default_str();
  bench->add_option("--duration", bench_args.duration_s, "measurement duration in seconds")
      ->capture_default_str();
  bench->add_option("--budget-ms", bench_args.budget_ms,
                    "fail when any per-prefix max exceeds this");
  bench->add_flag("--json", bench_args.as_json, "emit JSON");
  bench->add_option("--out", bench_args.out_path, "write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*convert) run_convert(convert_args);
    if (*gen) run_gen_incremental(gen_args);
    if (*add_noise) run_add_noise(noise_args);
    if (*build_vocab) run_build_vocab(vocab_args);
    if (*align) run_align_asr(align_args);
    if (*run_baseline) run_run_baseline(baseline_args);
    if (*run_model) run_run_model(model_args);
    if (*score) run_score(score_args);
    if (*eval_partial) run_eval_partial(partial_args);
    if (*eval_confidence) run_eval_confidence(confidence_args);
    if (*stats) run_stats(stats_args);
    if (*bench) run_bench(bench_args);
  } catch (const ProtocolError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitProtocol;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
