#ifndef INCNLU_CORPUS_HPP
#define INCNLU_CORPUS_HPP

#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace incnlu {

// One slot/intent-annotated utterance, the unit of every corpus file.
// Tags follow IOB2: "O", "B-<slot>" or "I-<slot>", one per token, and an
// "I-<slot>" may only continue a chunk opened by "B-<slot>".
struct AnnotatedUtterance {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::vector<std::string> intents;

  bool operator==(const AnnotatedUtterance&) const = default;
};

// Set of slot names seen in a corpus (the part after "B-"/"I-").
struct SlotLexicon {
  std::set<std::string> slots;

  bool contains(std::string_view name) const {
    return slots.find(std::string(name)) != slots.end();
  }
};

struct CorpusOptions {
  // The cleaned corpora this toolkit targets are lowercase, so imports
  // lowercase tokens by default. Tags and intents are kept verbatim.
  bool lowercase_tokens = true;
};

// Throws ParseError (with `line` as the reported location) if `u` violates
// the AnnotatedUtterance invariants.
void validate_utterance(const AnnotatedUtterance& u, std::size_t line);

// TSV: one record per nonblank line, fields separated by tabs:
//   space-joined tokens  <TAB>  space-joined tags  <TAB>  "#"-joined intents
// with an optional 4th field carrying the id. Records without an explicit
// id get their 0-based line index.
std::vector<AnnotatedUtterance> parse_iob_tsv(std::istream& in,
                                              const CorpusOptions& opts = {});

// Always emits the 4-field form so a parse of the output reproduces the
// input records exactly.
void write_iob_tsv(std::ostream& out, std::span<const AnnotatedUtterance> records);

// Line-delimited records: one JSON object per line with fields
// `id`, `tokens`, `tags`, `intents`.
std::vector<AnnotatedUtterance> parse_corpus_jsonl(std::istream& in,
                                                   const CorpusOptions& opts = {});
void write_corpus_jsonl(std::ostream& out, std::span<const AnnotatedUtterance> records);

enum class CorpusFormat { tsv, jsonl, autodetect };

// Loads a corpus file, sniffing the format from the extension and first
// byte when `format` is autodetect.
std::vector<AnnotatedUtterance> load_corpus(const std::string& path,
                                            CorpusFormat format = CorpusFormat::autodetect,
                                            const CorpusOptions& opts = {});

SlotLexicon slot_lexicon(std::span<const AnnotatedUtterance> records);

// Lexicon file: one slot name per line.
SlotLexicon read_lexicon(std::istream& in);
void write_lexicon(std::ostream& out, const SlotLexicon& lex);

}  // namespace incnlu

#endif
