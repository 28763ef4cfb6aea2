#ifndef INCNLU_NOISE_HPP
#define INCNLU_NOISE_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace incnlu {

struct NoiseConfig {
  double tau = 0.08;  // expected operations per token
  double substitute_weight = 5.0;
  double insert_weight = 1.0;
  double delete_weight = 1.0;
  std::uint64_t seed = 0;
};

// Word pool for substitutions and insertions. The first `in_domain_count`
// words come from the training corpus, the rest are external fillers.
// Order is significant: it is the sampling order and the file order.
struct Vocabulary {
  std::vector<std::string> words;
  std::size_t in_domain_count = 0;

  bool empty() const { return words.empty(); }
  std::size_t size() const { return words.size(); }
};

// All unique training tokens (first-occurrence order), then the most
// frequent external tokens not already present until `target_size` words.
// External ties are broken lexicographically.
Vocabulary build_vocabulary(std::span<const std::string> train_tokens,
                            const std::unordered_map<std::string, std::uint64_t>& external_counts,
                            std::size_t target_size);

// Vocabulary file: one token per line, order significant.
Vocabulary read_vocabulary(std::istream& in);
void write_vocabulary(std::ostream& out, const Vocabulary& vocab);

// Unit-cost character edit distance.
std::size_t edit_distance(std::string_view a, std::string_view b);

// 1 - editdist(a, b) / max(|a|, |b|). A character-level proxy for acoustic
// confusability; a phoneme-based similarity can be swapped in here.
double acoustic_similarity(std::string_view a, std::string_view b);

struct NoiseStats {
  std::size_t positions = 0;
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  std::size_t operations() const { return substitutions + insertions + deletions; }
};

// Applies substitute/insert/delete noise to token sequences.
//
// Draw discipline (one mt19937_64 stream per utterance, positions left to
// right): first the selection uniform, then the operation-type uniform, then
// the word uniform. Raw engine output is mapped to [0,1) directly so the
// byte-for-byte results are reproducible across standard libraries.
//
// Per position p the operation probabilities are
//   P(substitute) = tau * w_sub * r_p / W
//   P(insert)     = tau * w_ins       / W
//   P(delete)     = tau * w_del * r_p / W
// with W the weight sum and r_p = (1/len(w_p)) / mean_q(1/len(w_q)), i.e.
// shorter words are substituted and deleted more often while the expected
// operation count stays tau * n. Replacement and insertion words are drawn
// from the vocabulary with probability proportional to
// max(acoustic_similarity(candidate, anchor), 0.01); a substitution anchors
// to the original token at the position, an insertion to the token on its
// left (or on its right at position 0) and lands immediately before the
// position.
class NoiseGenerator {
public:
  NoiseGenerator(Vocabulary vocab, NoiseConfig cfg);

  // One utterance; `stream_seed` fixes the draw sequence.
  std::vector<std::string> apply(std::span<const std::string> tokens,
                                 std::uint64_t stream_seed, NoiseStats* stats = nullptr);

  // Stable per-utterance seed: FNV-1a of the id mixed into the corpus seed,
  // so corpus-level noising is order- and scheduling-independent.
  static std::uint64_t derive_seed(std::uint64_t corpus_seed, std::string_view utterance_id);

  const Vocabulary& vocabulary() const { return vocab_; }
  const NoiseConfig& config() const { return cfg_; }

private:
  struct AnchorWeights {
    std::vector<double> cumulative;
    double total = 0.0;
  };

  const AnchorWeights& weights_for(const std::string& anchor);
  const std::string& draw_word(const std::string& anchor, std::mt19937_64& rng);

  Vocabulary vocab_;
  NoiseConfig cfg_;
  std::unordered_map<std::string, AnchorWeights> weight_cache_;
};

// One-shot form; the draw sequence is seeded with cfg.seed.
std::vector<std::string> inject_noise(std::span<const std::string> tokens,
                                      const Vocabulary& vocab, const NoiseConfig& cfg,
                                      NoiseStats* stats = nullptr);

}  // namespace incnlu

#endif
