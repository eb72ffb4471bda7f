#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hypervec::corpus {

// Restartable single-pass source of whitespace-separated tokens.
class TokenStream {
 public:
  virtual ~TokenStream() = default;
  virtual bool next(std::string& out) = 0;
  virtual void reset() = 0;
};

class FileTokenStream final : public TokenStream {
 public:
  explicit FileTokenStream(std::string path);
  bool next(std::string& out) override;
  void reset() override;

 private:
  void refill();
  std::string path_;
  std::vector<char> buf_;
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::int64_t file_off_ = 0;
  bool eof_ = false;
  std::string carry_;
};

class VectorTokenStream final : public TokenStream {
 public:
  explicit VectorTokenStream(std::vector<std::string> tokens)
      : tokens_(std::move(tokens)) {}
  bool next(std::string& out) override {
    if (pos_ >= tokens_.size()) return false;
    out = tokens_[pos_++];
    return true;
  }
  void reset() override { pos_ = 0; }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

// Token ids are 0-based in memory; persisted files use 1-based ids.
inline constexpr std::uint32_t kOovId = 0xffffffffu;

struct Vocabulary {
  std::vector<std::string> tokens;       // id -> token
  std::vector<std::uint64_t> counts;     // id -> raw corpus frequency
  std::unordered_map<std::string, std::uint32_t> index;
  std::uint64_t total = 0;               // sum of counts over kept tokens

  std::uint32_t size() const { return static_cast<std::uint32_t>(tokens.size()); }
  std::optional<std::uint32_t> id_of(std::string_view token) const;
};

struct CooccurrenceCounts {
  std::uint32_t n = 0;   // vocabulary size
  int window = 0;
  // Upper triangle incl. diagonal, keys (i << 32) | j with i <= j, sorted.
  // values[k] is the ordered-pair count #(i,j) (= #(j,i)); a diagonal entry
  // holds both directed increments of each same-word event.
  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> values;
  std::uint64_t total = 0;  // sum of #(i,j) over all ordered pairs

  std::size_t stored_pairs() const { return keys.size(); }
  std::uint64_t count(std::uint32_t i, std::uint32_t j) const;
  // Ordered row marginals: row_sums()[i] = sum_j #(i,j).
  std::vector<std::uint64_t> row_sums() const;
};

struct UnigramDistribution {
  std::vector<double> probs;
  double smoothing = 0.75;
};

// Tokens with frequency >= min_count, ids by descending frequency with
// lexicographic tie-break. Throws DataError when nothing survives.
Vocabulary build_vocabulary(TokenStream& tokens, std::uint64_t min_count);
Vocabulary build_vocabulary(const std::vector<std::string>& tokens, std::uint64_t min_count);

// Maps tokens to ids; out-of-vocabulary tokens become kOovId (they keep
// their stream position, so windows do not close over them here).
std::vector<std::uint32_t> to_ids(TokenStream& tokens, const Vocabulary& vocab);

// Frequency subsampling: an occurrence of w with corpus frequency
// f(w) = count(w)/total is dropped with probability max(0, 1 - sqrt(t/f)).
// Out-of-vocabulary tokens are dropped unconditionally, so the result is a
// closed-up id stream ready for windowed counting or SGNS training.
std::vector<std::uint32_t> subsample(TokenStream& tokens, const Vocabulary& vocab,
                                     double threshold, std::uint64_t seed);
std::vector<std::uint32_t> subsample(std::span<const std::uint32_t> ids,
                                     const Vocabulary& vocab, double threshold,
                                     std::uint64_t seed);

// Symmetric windowed counting: for every position t and offset 1..window
// with both endpoints in-vocabulary, the ordered pairs (w_t, w_{t+o}) and
// (w_{t+o}, w_t) are counted. kOovId entries occupy positions but never
// contribute pairs. The stream is counted in sorted-and-merged chunks; the
// chunk length only affects memory, never the result.
CooccurrenceCounts count_cooccurrences(std::span<const std::uint32_t> ids,
                                       std::uint32_t vocab_size, int window,
                                       std::int64_t chunk = 1 << 22);
CooccurrenceCounts count_cooccurrences(TokenStream& tokens, const Vocabulary& vocab,
                                       int window);

// probs(i) = count(i)^exponent / sum_j count(j)^exponent, exponent in [0,1].
UnigramDistribution unigram_distribution(const Vocabulary& vocab, double exponent);

// "token<TAB>count" rows in id order.
void save_vocabulary(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

// "i<TAB>j<TAB>count" triples, 1-based, i <= j stored once; symmetric
// expansion happens on load. The window size is not part of the format.
void save_cooccurrences(const CooccurrenceCounts& counts, const std::string& path);
CooccurrenceCounts load_cooccurrences(const std::string& path, int window = 0);

}  // namespace hypervec::corpus
