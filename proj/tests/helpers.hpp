#ifndef INCNLU_TESTS_HELPERS_HPP
#define INCNLU_TESTS_HELPERS_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "incnlu/corpus.hpp"
#include "incnlu/io.hpp"
#include "incnlu/seq2seq.hpp"

namespace testutil {

class TempDir {
public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / ("incnlu-test-" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

// Exhaustive longest-common-subsequence length: enumerate every subsequence
// of `a` by bitmask and test it against `b`. Only usable for tiny inputs;
// that is the point of an oracle.
template <typename Seq>
std::size_t brute_lcs(const Seq& a, const Seq& b) {
  std::size_t best = 0;
  const std::size_t n = a.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::size_t len = 0;
    std::size_t bpos = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (bpos < b.size() && !(b[bpos] == a[i])) ++bpos;
      if (bpos == b.size()) {
        ok = false;
        break;
      }
      ++bpos;
      ++len;
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

// Plain recursive edit distance over all alignments, no memoization.
inline std::size_t brute_edit_distance(std::string_view a, std::string_view b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::size_t subst =
      brute_edit_distance(a.substr(1), b.substr(1)) + (a[0] == b[0] ? 0 : 1);
  const std::size_t del = brute_edit_distance(a.substr(1), b) + 1;
  const std::size_t ins = brute_edit_distance(a, b.substr(1)) + 1;
  return std::min({subst, del, ins});
}

// Size of the multiset intersection, the order-ignoring match count.
inline std::size_t multiset_overlap(const incnlu::ClassSequence& a,
                                    const incnlu::ClassSequence& b) {
  std::vector<bool> used(b.size(), false);
  std::size_t overlap = 0;
  for (const incnlu::SeqClass& c : a) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && b[j] == c) {
        used[j] = true;
        ++overlap;
        break;
      }
    }
  }
  return overlap;
}

inline incnlu::ClassSequence random_class_sequence(std::mt19937_64& rng, std::size_t max_len,
                                                   std::size_t alphabet) {
  // Classes "c0".."c<alphabet-1>"; a mix of intents and value-less params so
  // both kinds participate in equality.
  incnlu::ClassSequence seq;
  const std::size_t len = pick(rng, max_len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    const std::string name = "c" + std::to_string(pick(rng, alphabet));
    if (pick(rng, 2) == 0)
      seq.push_back(incnlu::SeqClass::make_intent(name));
    else
      seq.push_back(incnlu::SeqClass::make_param(name, pick(rng, 2) == 0
                                                           ? std::vector<std::string>{}
                                                           : std::vector<std::string>{"v"}));
  }
  return seq;
}

// Random well-formed utterance whose value tokens never collide with slot
// names, so target parsing round-trips.
inline incnlu::AnnotatedUtterance random_utterance(std::mt19937_64& rng, const std::string& id,
                                                   std::size_t max_tokens = 20) {
  static const std::vector<std::string> kWords = {
      "flights", "from", "boston", "to", "denver", "on", "monday", "morning", "show",
      "me",      "the",  "cheapest", "fare", "please", "list", "all", "airlines", "evening"};
  static const std::vector<std::string> kSlots = {"fromloc", "toloc", "day", "period", "carrier"};
  static const std::vector<std::string> kIntents = {"atis_flight", "atis_airfare",
                                                    "atis_airline", "atis_ground_service"};
  incnlu::AnnotatedUtterance u;
  u.id = id;
  const std::size_t n = 1 + pick(rng, max_tokens);
  std::size_t i = 0;
  while (i < n) {
    if (pick(rng, 3) == 0) {
      // open a chunk of 1-3 tokens
      const std::string& slot = kSlots[pick(rng, kSlots.size())];
      const std::size_t len = std::min(n - i, 1 + pick(rng, 3));
      for (std::size_t k = 0; k < len; ++k) {
        u.tokens.push_back(kWords[pick(rng, kWords.size())]);
        u.tags.push_back((k == 0 ? "B-" : "I-") + slot);
      }
      i += len;
    } else {
      u.tokens.push_back(kWords[pick(rng, kWords.size())]);
      u.tags.push_back("O");
      ++i;
    }
  }
  u.intents.push_back(kIntents[pick(rng, kIntents.size())]);
  if (pick(rng, 8) == 0) u.intents.push_back(kIntents[pick(rng, kIntents.size())]);
  return u;
}

// True when `prev` equals `next` with trailing param values and/or trailing
// params removed (intents identical). The growth pattern of prefix targets.
inline bool is_monotone_truncation(const incnlu::ClassSequence& prev,
                                   const incnlu::ClassSequence& next) {
  using incnlu::SeqClass;
  std::vector<const SeqClass*> prev_params, next_params;
  std::vector<std::string> prev_intents, next_intents;
  for (const SeqClass& c : prev)
    (c.kind == SeqClass::Kind::intent ? prev_intents.push_back(c.name)
                                      : (void)prev_params.push_back(&c));
  for (const SeqClass& c : next)
    (c.kind == SeqClass::Kind::intent ? next_intents.push_back(c.name)
                                      : (void)next_params.push_back(&c));
  if (prev_intents != next_intents) return false;
  if (prev_params.size() > next_params.size()) return false;
  if (prev_params.empty()) return true;
  for (std::size_t i = 0; i + 1 < prev_params.size(); ++i)
    if (!(*prev_params[i] == *next_params[i])) return false;
  const SeqClass& last = *prev_params.back();
  const SeqClass& grown = *next_params[prev_params.size() - 1];
  if (last.name != grown.name) return false;
  if (last.values.size() > grown.values.size()) return false;
  return std::equal(last.values.begin(), last.values.end(), grown.values.begin());
}

}  // namespace testutil

#endif
