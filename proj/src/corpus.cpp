#include "incnlu/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "incnlu/errors.hpp"
#include "incnlu/io.hpp"

namespace incnlu {

namespace {

using nlohmann::json;

bool is_chunk_tag(const std::string& tag, char prefix) {
  return tag.size() > 2 && tag[0] == prefix && tag[1] == '-';
}

std::string slot_of(const std::string& tag) { return tag.substr(2); }

json parse_json_line(const std::string& line, std::size_t lineno) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ParseError("not a JSON object", lineno);
  return j;
}

std::vector<std::string> string_array(const json& j, const char* key, std::size_t lineno) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array())
    throw ParseError(std::string("missing array field `") + key + "`", lineno);
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string())
      throw ParseError(std::string("non-string entry in `") + key + "`", lineno);
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

void validate_utterance(const AnnotatedUtterance& u, std::size_t line) {
  if (u.tokens.empty()) throw ParseError("empty token field", line);
  if (u.tags.size() != u.tokens.size())
    throw ParseError(std::to_string(u.tokens.size()) + " tokens vs " +
                         std::to_string(u.tags.size()) + " tags",
                     line);
  for (std::size_t i = 0; i < u.tags.size(); ++i) {
    const std::string& tag = u.tags[i];
    if (tag == "O") continue;
    if (!is_chunk_tag(tag, 'B') && !is_chunk_tag(tag, 'I'))
      throw ParseError("malformed tag `" + tag + "`", line);
    if (tag[0] == 'I') {
      const std::string slot = slot_of(tag);
      bool continues = i > 0 && (u.tags[i - 1] == "B-" + slot || u.tags[i - 1] == "I-" + slot);
      if (!continues)
        throw ParseError("tag `" + tag + "` does not continue a `B-" + slot + "` chunk", line);
    }
  }
  if (u.intents.empty()) throw ParseError("empty intents field", line);
  for (const std::string& intent : u.intents) {
    if (intent.empty()) throw ParseError("empty intent name", line);
    if (intent.find('#') != std::string::npos)
      throw ParseError("intent `" + intent + "` contains `#`", line);
    for (char c : intent)
      if (std::isspace(static_cast<unsigned char>(c)))
        throw ParseError("intent `" + intent + "` contains whitespace", line);
  }
}

std::vector<AnnotatedUtterance> parse_iob_tsv(std::istream& in, const CorpusOptions& opts) {
  std::vector<AnnotatedUtterance> records;
  std::string line;
  std::size_t lineno = 0;  // 0-based; messages report lineno + 1
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      ++lineno;
      continue;
    }
    const std::vector<std::string> fields = split_char(line, '\t');
    if (fields.size() != 3 && fields.size() != 4)
      throw ParseError("expected 3 or 4 tab-separated fields, got " +
                           std::to_string(fields.size()),
                       lineno + 1);
    AnnotatedUtterance u;
    u.tokens = split_ws(opts.lowercase_tokens ? to_lower(fields[0]) : fields[0]);
    u.tags = split_ws(fields[1]);
    for (const std::string& part : split_char(fields[2], '#')) u.intents.push_back(part);
    u.id = fields.size() == 4 ? fields[3] : std::to_string(lineno);
    validate_utterance(u, lineno + 1);
    records.push_back(std::move(u));
    ++lineno;
  }
  return records;
}

void write_iob_tsv(std::ostream& out, std::span<const AnnotatedUtterance> records) {
  for (const AnnotatedUtterance& u : records) {
    out << join(u.tokens, " ") << '\t' << join(u.tags, " ") << '\t' << join(u.intents, "#")
        << '\t' << u.id << '\n';
  }
}

std::vector<AnnotatedUtterance> parse_corpus_jsonl(std::istream& in, const CorpusOptions& opts) {
  std::vector<AnnotatedUtterance> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      ++lineno;
      continue;
    }
    json j = parse_json_line(line, lineno + 1);
    AnnotatedUtterance u;
    u.tokens = string_array(j, "tokens", lineno + 1);
    if (opts.lowercase_tokens)
      for (std::string& t : u.tokens) t = to_lower(t);
    u.tags = string_array(j, "tags", lineno + 1);
    u.intents = string_array(j, "intents", lineno + 1);
    if (auto it = j.find("id"); it != j.end()) {
      if (it->is_string())
        u.id = it->get<std::string>();
      else if (it->is_number_integer())
        u.id = std::to_string(it->get<long long>());
      else
        throw ParseError("`id` must be a string or integer", lineno + 1);
    } else {
      u.id = std::to_string(lineno);
    }
    validate_utterance(u, lineno + 1);
    records.push_back(std::move(u));
    ++lineno;
  }
  return records;
}

void write_corpus_jsonl(std::ostream& out, std::span<const AnnotatedUtterance> records) {
  for (const AnnotatedUtterance& u : records) {
    json j;
    j["id"] = u.id;
    j["tokens"] = u.tokens;
    j["tags"] = u.tags;
    j["intents"] = u.intents;
    out << j.dump() << '\n';
  }
}

std::vector<AnnotatedUtterance> load_corpus(const std::string& path, CorpusFormat format,
                                            const CorpusOptions& opts) {
  if (format == CorpusFormat::autodetect) {
    auto ends_with = [&](std::string_view suffix) {
      return path.size() >= suffix.size() &&
             path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".jsonl") || ends_with(".ndjson") || ends_with(".json")) {
      format = CorpusFormat::jsonl;
    } else if (ends_with(".tsv") || ends_with(".txt")) {
      format = CorpusFormat::tsv;
    } else {
      std::ifstream probe(path);
      if (!probe) throw DataError("cannot open file: " + path);
      int c;
      while ((c = probe.get()) != EOF && (c == ' ' || c == '\t' || c == '\n' || c == '\r')) {
      }
      format = c == '{' ? CorpusFormat::jsonl : CorpusFormat::tsv;
    }
  }
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);
  return format == CorpusFormat::jsonl ? parse_corpus_jsonl(in, opts) : parse_iob_tsv(in, opts);
}

SlotLexicon slot_lexicon(std::span<const AnnotatedUtterance> records) {
  SlotLexicon lex;
  for (const AnnotatedUtterance& u : records)
    for (const std::string& tag : u.tags)
      if (is_chunk_tag(tag, 'B') || is_chunk_tag(tag, 'I')) lex.slots.insert(slot_of(tag));
  return lex;
}

SlotLexicon read_lexicon(std::istream& in) {
  SlotLexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    for (const std::string& name : split_ws(line)) lex.slots.insert(name);
  }
  return lex;
}

void write_lexicon(std::ostream& out, const SlotLexicon& lex) {
  for (const std::string& name : lex.slots) out << name << '\n';
}

}  // namespace incnlu
