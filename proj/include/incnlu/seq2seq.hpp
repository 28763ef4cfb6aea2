#ifndef INCNLU_SEQ2SEQ_HPP
#define INCNLU_SEQ2SEQ_HPP

#include <string>
#include <string_view>
#include <vector>

#include "incnlu/corpus.hpp"

namespace incnlu {

// Flat end-to-end target: the first token is the "#"-joined intents, the
// rest alternates slot names with the slot's value tokens.
struct TargetSequence {
  std::string text;

  bool operator==(const TargetSequence&) const = default;
};

// One scoring unit: an intent, or a (slot, value tokens) parameter. Two
// parameters with the same slot but different values are different classes.
struct SeqClass {
  enum class Kind { intent, param };

  Kind kind = Kind::intent;
  std::string name;
  std::vector<std::string> values;  // always empty for intents

  bool operator==(const SeqClass&) const = default;

  static SeqClass make_intent(std::string name) {
    return SeqClass{Kind::intent, std::move(name), {}};
  }
  static SeqClass make_param(std::string slot, std::vector<std::string> values) {
    return SeqClass{Kind::param, std::move(slot), std::move(values)};
  }
};

using ClassSequence = std::vector<SeqClass>;

// Slot name given to value tokens that appear before any known slot name
// when parsing a malformed hypothesis.
inline constexpr std::string_view kDanglingSlot = "<dangling>";

TargetSequence iob_to_target(const AnnotatedUtterance& u);

// Total: any string yields a class sequence. The first whitespace token is
// split on "#" into intents; afterwards every token that names a slot in
// `lex` opens a new parameter and other tokens extend the current one.
// Value tokens that collide with slot names are therefore read as slot
// names; that ambiguity is inherent to the flat target format.
ClassSequence parse_target(std::string_view text, const SlotLexicon& lex);

// Names of the intent classes, in sequence order.
std::vector<std::string> intent_names(const ClassSequence& classes);

}  // namespace incnlu

#endif
