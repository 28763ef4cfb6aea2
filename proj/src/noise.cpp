#include "incnlu/noise.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>

#include "incnlu/errors.hpp"

namespace incnlu {

namespace {

// Top 53 bits of the engine output, mapped to [0, 1). Used instead of
// std::uniform_real_distribution, whose draw sequence is not pinned down by
// the standard; mt19937_64's raw output is.
double next_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t next_index(std::mt19937_64& rng, std::size_t n) {
  return std::min(n - 1, static_cast<std::size_t>(next_unit(rng) * static_cast<double>(n)));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Vocabulary build_vocabulary(std::span<const std::string> train_tokens,
                            const std::unordered_map<std::string, std::uint64_t>& external_counts,
                            std::size_t target_size) {
  Vocabulary vocab;
  std::set<std::string> seen;
  for (const std::string& token : train_tokens)
    if (seen.insert(token).second) vocab.words.push_back(token);
  vocab.in_domain_count = vocab.words.size();
  if (vocab.words.size() >= target_size) return vocab;

  std::vector<std::pair<std::string, std::uint64_t>> fillers;
  fillers.reserve(external_counts.size());
  for (const auto& [token, count] : external_counts)
    if (!seen.count(token)) fillers.emplace_back(token, count);
  std::sort(fillers.begin(), fillers.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  for (const auto& [token, count] : fillers) {
    if (vocab.words.size() >= target_size) break;
    vocab.words.push_back(token);
  }
  return vocab;
}

Vocabulary read_vocabulary(std::istream& in) {
  Vocabulary vocab;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen.insert(line).second)
      throw ParseError("duplicate vocabulary word `" + line + "`", lineno);
    vocab.words.push_back(line);
  }
  vocab.in_domain_count = vocab.words.size();
  return vocab;
}

void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  for (const std::string& word : vocab.words) out << word << '\n';
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({subst, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double acoustic_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(a, b)) / static_cast<double>(longest);
}

NoiseGenerator::NoiseGenerator(Vocabulary vocab, NoiseConfig cfg)
    : vocab_(std::move(vocab)), cfg_(cfg) {
  if (cfg_.tau < 0.0 || cfg_.tau > 1.0)
    throw DataError("tau must be in [0, 1]");
  if (cfg_.substitute_weight <= 0.0 || cfg_.insert_weight <= 0.0 || cfg_.delete_weight <= 0.0)
    throw DataError("operation weights must be positive");
}

const NoiseGenerator::AnchorWeights& NoiseGenerator::weights_for(const std::string& anchor) {
  auto it = weight_cache_.find(anchor);
  if (it != weight_cache_.end()) return it->second;
  AnchorWeights w;
  w.cumulative.reserve(vocab_.words.size());
  double running = 0.0;
  for (const std::string& candidate : vocab_.words) {
    running += std::max(acoustic_similarity(candidate, anchor), 0.01);
    w.cumulative.push_back(running);
  }
  w.total = running;
  return weight_cache_.emplace(anchor, std::move(w)).first->second;
}

const std::string& NoiseGenerator::draw_word(const std::string& anchor, std::mt19937_64& rng) {
  const AnchorWeights& w = weights_for(anchor);
  const double point = next_unit(rng) * w.total;
  const auto it = std::upper_bound(w.cumulative.begin(), w.cumulative.end(), point);
  const std::size_t idx =
      it == w.cumulative.end() ? w.cumulative.size() - 1 : static_cast<std::size_t>(it - w.cumulative.begin());
  return vocab_.words[idx];
}

std::vector<std::string> NoiseGenerator::apply(std::span<const std::string> tokens,
                                               std::uint64_t stream_seed, NoiseStats* stats) {
  std::vector<std::string> out;
  if (tokens.empty()) return out;
  if (vocab_.empty() && cfg_.tau > 0.0)
    throw DataError("noise injection needs a nonempty vocabulary");
  if (stats) stats->positions += tokens.size();

  double inv_sum = 0.0;
  for (const std::string& t : tokens) inv_sum += 1.0 / std::max<std::size_t>(1, t.size());
  const double mean_inv = inv_sum / static_cast<double>(tokens.size());
  const double weight_sum = cfg_.substitute_weight + cfg_.insert_weight + cfg_.delete_weight;

  std::mt19937_64 rng(stream_seed);
  out.reserve(tokens.size());
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    const std::string& word = tokens[p];
    const double rel_inv_len =
        (1.0 / std::max<std::size_t>(1, word.size())) / mean_inv;
    const double p_sub = cfg_.tau * cfg_.substitute_weight * rel_inv_len / weight_sum;
    const double p_ins = cfg_.tau * cfg_.insert_weight / weight_sum;
    const double p_del = cfg_.tau * cfg_.delete_weight * rel_inv_len / weight_sum;
    const double p_any = p_sub + p_ins + p_del;

    const double select = next_unit(rng);
    if (select >= std::min(1.0, p_any)) {
      out.push_back(word);
      continue;
    }
    const double which = next_unit(rng) * p_any;
    if (which < p_sub) {
      out.push_back(draw_word(word, rng));
      if (stats) ++stats->substitutions;
    } else if (which < p_sub + p_ins) {
      const std::string& anchor = p > 0 ? tokens[p - 1] : tokens[0];
      out.push_back(draw_word(anchor, rng));
      out.push_back(word);
      if (stats) ++stats->insertions;
    } else {
      if (stats) ++stats->deletions;
    }
  }
  if (out.empty()) {
    // Everything got deleted; keep one of the originals.
    out.push_back(tokens[next_index(rng, tokens.size())]);
  }
  return out;
}

std::uint64_t NoiseGenerator::derive_seed(std::uint64_t corpus_seed,
                                          std::string_view utterance_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : utterance_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(corpus_seed ^ h);
}

std::vector<std::string> inject_noise(std::span<const std::string> tokens,
                                      const Vocabulary& vocab, const NoiseConfig& cfg,
                                      NoiseStats* stats) {
  NoiseGenerator generator(vocab, cfg);
  return generator.apply(tokens, cfg.seed, stats);
}

}  // namespace incnlu
