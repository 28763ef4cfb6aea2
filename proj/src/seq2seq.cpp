#include "incnlu/seq2seq.hpp"

#include "incnlu/io.hpp"

namespace incnlu {

TargetSequence iob_to_target(const AnnotatedUtterance& u) {
  std::string text = join(u.intents, "#");
  std::string open_slot;  // slot of the chunk currently being emitted
  for (std::size_t i = 0; i < u.tokens.size(); ++i) {
    const std::string& tag = u.tags[i];
    if (tag == "O") {
      open_slot.clear();
      continue;
    }
    const std::string slot = tag.substr(2);
    if (tag[0] == 'B' || slot != open_slot) {
      text += ' ';
      text += slot;
      open_slot = slot;
    }
    text += ' ';
    text += u.tokens[i];
  }
  return TargetSequence{std::move(text)};
}

ClassSequence parse_target(std::string_view text, const SlotLexicon& lex) {
  ClassSequence classes;
  const std::vector<std::string> tokens = split_ws(text);
  if (tokens.empty()) return classes;
  for (const std::string& intent : split_char(tokens[0], '#'))
    if (!intent.empty()) classes.push_back(SeqClass::make_intent(intent));
  SeqClass* current = nullptr;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (lex.contains(tokens[i])) {
      classes.push_back(SeqClass::make_param(tokens[i], {}));
      current = &classes.back();
    } else if (current != nullptr) {
      current->values.push_back(tokens[i]);
    } else {
      classes.push_back(SeqClass::make_param(std::string(kDanglingSlot), {tokens[i]}));
      current = &classes.back();
    }
  }
  return classes;
}

std::vector<std::string> intent_names(const ClassSequence& classes) {
  std::vector<std::string> names;
  for (const SeqClass& c : classes)
    if (c.kind == SeqClass::Kind::intent) names.push_back(c.name);
  return names;
}

}  // namespace incnlu
