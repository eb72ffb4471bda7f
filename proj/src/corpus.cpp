#include "hypervec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>

#include "hypervec/errors.hpp"
#include "hypervec/parallel.hpp"
#include "hypervec/rng.hpp"

namespace hypervec::corpus {

namespace {

constexpr std::size_t kReadBuf = 1 << 20;

inline std::uint64_t pack_key(std::uint32_t i, std::uint32_t j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | j;
}

}  // namespace

// ---------------------------------------------------------------- streams

FileTokenStream::FileTokenStream(std::string path) : path_(std::move(path)) {
  buf_.resize(kReadBuf);
  std::ifstream probe(path_, std::ios::binary);
  if (!probe) throw DataError("cannot open corpus file: " + path_);
  reset();
}

void FileTokenStream::reset() {
  pos_ = len_ = 0;
  file_off_ = 0;
  eof_ = false;
  carry_.clear();
}

void FileTokenStream::refill() {
  std::ifstream in(path_, std::ios::binary);
  in.seekg(file_off_);
  in.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
  len_ = static_cast<std::size_t>(in.gcount());
  file_off_ += static_cast<std::int64_t>(len_);
  pos_ = 0;
  if (len_ == 0) eof_ = true;
}

bool FileTokenStream::next(std::string& out) {
  out.clear();
  for (;;) {
    if (pos_ >= len_) {
      if (eof_) break;
      refill();
      continue;
    }
    const char c = buf_[pos_++];
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) return true;
    } else {
      out.push_back(c);
    }
  }
  return !out.empty();
}

// ----------------------------------------------------------- vocabulary

std::optional<std::uint32_t> Vocabulary::id_of(std::string_view token) const {
  auto it = index.find(std::string(token));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(TokenStream& tokens, std::uint64_t min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> freq;
  freq.reserve(1 << 20);
  std::string tok;
  tokens.reset();
  while (tokens.next(tok)) ++freq[tok];

  std::vector<std::pair<std::string, std::uint64_t>> kept;
  kept.reserve(freq.size());
  for (auto& [word, count] : freq)
    if (count >= min_count) kept.emplace_back(word, count);
  if (kept.empty())
    throw DataError("no token reaches min_count=" + std::to_string(min_count));

  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary v;
  v.tokens.reserve(kept.size());
  v.counts.reserve(kept.size());
  v.index.reserve(kept.size());
  for (auto& [word, count] : kept) {
    v.index.emplace(word, static_cast<std::uint32_t>(v.tokens.size()));
    v.tokens.push_back(std::move(word));
    v.counts.push_back(count);
    v.total += count;
  }
  return v;
}

Vocabulary build_vocabulary(const std::vector<std::string>& tokens,
                            std::uint64_t min_count) {
  VectorTokenStream s(tokens);
  return build_vocabulary(s, min_count);
}

std::vector<std::uint32_t> to_ids(TokenStream& tokens, const Vocabulary& vocab) {
  std::vector<std::uint32_t> ids;
  std::string tok;
  tokens.reset();
  while (tokens.next(tok)) {
    auto id = vocab.id_of(tok);
    ids.push_back(id ? *id : kOovId);
  }
  return ids;
}

std::vector<std::uint32_t> subsample(std::span<const std::uint32_t> ids,
                                     const Vocabulary& vocab, double threshold,
                                     std::uint64_t seed) {
  if (threshold <= 0) throw std::invalid_argument("subsample threshold must be > 0");
  // keep probability per id, precomputed once
  std::vector<double> keep(vocab.size());
  const double total = static_cast<double>(vocab.total);
  for (std::uint32_t w = 0; w < vocab.size(); ++w) {
    const double f = static_cast<double>(vocab.counts[w]) / total;
    keep[w] = f <= threshold ? 1.0 : std::sqrt(threshold / f);
  }
  std::vector<std::uint32_t> out;
  out.reserve(ids.size());
  SplitMix64 rng(substream(seed, "subsample"));
  for (std::uint32_t id : ids) {
    if (id == kOovId) continue;
    // one draw per in-vocabulary occurrence, in stream order
    const double u = rng.u01();
    if (u < keep[id]) out.push_back(id);
  }
  return out;
}

std::vector<std::uint32_t> subsample(TokenStream& tokens, const Vocabulary& vocab,
                                     double threshold, std::uint64_t seed) {
  auto ids = to_ids(tokens, vocab);
  return subsample(ids, vocab, threshold, seed);
}

// ------------------------------------------------------------- counting

namespace {

struct ChunkCounts {
  std::vector<std::uint64_t> keys;
  std::vector<std::uint64_t> values;
};

// Events for positions [begin, end), window endpoints may read past end.
ChunkCounts count_chunk(std::span<const std::uint32_t> ids, std::int64_t begin,
                        std::int64_t end, int window) {
  std::vector<std::uint64_t> events;
  events.reserve(static_cast<std::size_t>((end - begin)) * window);
  const std::int64_t len = static_cast<std::int64_t>(ids.size());
  for (std::int64_t t = begin; t < end; ++t) {
    const std::uint32_t u = ids[static_cast<std::size_t>(t)];
    if (u == kOovId) continue;
    const std::int64_t lim = std::min<std::int64_t>(len - 1 - t, window);
    for (std::int64_t o = 1; o <= lim; ++o) {
      const std::uint32_t v = ids[static_cast<std::size_t>(t + o)];
      if (v == kOovId) continue;
      events.push_back(pack_key(u, v));
      if (u == v) events.push_back(pack_key(u, v));  // both directed increments
    }
  }
  std::sort(events.begin(), events.end());
  ChunkCounts out;
  for (std::size_t s = 0; s < events.size();) {
    std::size_t e = s;
    while (e < events.size() && events[e] == events[s]) ++e;
    out.keys.push_back(events[s]);
    out.values.push_back(e - s);
    s = e;
  }
  return out;
}

void merge_into(ChunkCounts& acc, const ChunkCounts& add) {
  ChunkCounts merged;
  merged.keys.reserve(acc.keys.size() + add.keys.size());
  merged.values.reserve(acc.keys.size() + add.keys.size());
  std::size_t a = 0, b = 0;
  while (a < acc.keys.size() || b < add.keys.size()) {
    if (b >= add.keys.size() || (a < acc.keys.size() && acc.keys[a] < add.keys[b])) {
      merged.keys.push_back(acc.keys[a]);
      merged.values.push_back(acc.values[a]);
      ++a;
    } else if (a >= acc.keys.size() || add.keys[b] < acc.keys[a]) {
      merged.keys.push_back(add.keys[b]);
      merged.values.push_back(add.values[b]);
      ++b;
    } else {
      merged.keys.push_back(acc.keys[a]);
      merged.values.push_back(acc.values[a] + add.values[b]);
      ++a;
      ++b;
    }
  }
  acc = std::move(merged);
}

}  // namespace

CooccurrenceCounts count_cooccurrences(std::span<const std::uint32_t> ids,
                                       std::uint32_t vocab_size, int window,
                                       std::int64_t chunk) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (chunk < 1) throw std::invalid_argument("chunk must be >= 1");
  const std::int64_t len = static_cast<std::int64_t>(ids.size());
  const std::size_t n_chunks =
      len == 0 ? 0 : static_cast<std::size_t>((len + chunk - 1) / chunk);

  std::vector<ChunkCounts> parts(n_chunks);
  parallel_chunks(0, len, chunk, [&](std::int64_t lo, std::int64_t hi) {
    parts[static_cast<std::size_t>(lo / chunk)] = count_chunk(ids, lo, hi, window);
  });

  ChunkCounts acc;
  for (const auto& part : parts) merge_into(acc, part);

  CooccurrenceCounts counts;
  counts.n = vocab_size;
  counts.window = window;
  counts.keys = std::move(acc.keys);
  counts.values = std::move(acc.values);
  for (std::size_t s = 0; s < counts.keys.size(); ++s) {
    const std::uint32_t i = static_cast<std::uint32_t>(counts.keys[s] >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(counts.keys[s]);
    counts.total += (i == j) ? counts.values[s] : 2 * counts.values[s];
  }
  return counts;
}

CooccurrenceCounts count_cooccurrences(TokenStream& tokens, const Vocabulary& vocab,
                                       int window) {
  auto ids = to_ids(tokens, vocab);
  return count_cooccurrences(ids, vocab.size(), window);
}

std::uint64_t CooccurrenceCounts::count(std::uint32_t i, std::uint32_t j) const {
  const std::uint64_t key = pack_key(i, j);
  auto it = std::lower_bound(keys.begin(), keys.end(), key);
  if (it == keys.end() || *it != key) return 0;
  return values[static_cast<std::size_t>(it - keys.begin())];
}

std::vector<std::uint64_t> CooccurrenceCounts::row_sums() const {
  std::vector<std::uint64_t> sums(n, 0);
  for (std::size_t s = 0; s < keys.size(); ++s) {
    const std::uint32_t i = static_cast<std::uint32_t>(keys[s] >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(keys[s]);
    sums[i] += values[s];
    if (i != j) sums[j] += values[s];
  }
  return sums;
}

// --------------------------------------------------------------- unigram

UnigramDistribution unigram_distribution(const Vocabulary& vocab, double exponent) {
  if (exponent < 0.0 || exponent > 1.0)
    throw std::invalid_argument("unigram exponent must be in [0, 1]");
  UnigramDistribution dist;
  dist.smoothing = exponent;
  dist.probs.resize(vocab.size());
  double norm = 0;
  for (std::uint32_t w = 0; w < vocab.size(); ++w) {
    dist.probs[w] = std::pow(static_cast<double>(vocab.counts[w]), exponent);
    norm += dist.probs[w];
  }
  for (double& p : dist.probs) p /= norm;
  return dist;
}

// ------------------------------------------------------------------- io

void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write vocabulary: " + path);
  for (std::uint32_t w = 0; w < vocab.size(); ++w)
    out << vocab.tokens[w] << '\t' << vocab.counts[w] << '\n';
  if (!out) throw DataError("failed writing vocabulary: " + path);
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary: " + path);
  Vocabulary v;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(path + ":" + std::to_string(line_no) + ": expected token<TAB>count");
    std::uint64_t count = 0;
    const char* first = line.data() + tab + 1;
    const char* last = line.data() + line.size();
    auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last)
      throw DataError(path + ":" + std::to_string(line_no) + ": bad count");
    v.index.emplace(line.substr(0, tab), static_cast<std::uint32_t>(v.tokens.size()));
    v.tokens.push_back(line.substr(0, tab));
    v.counts.push_back(count);
    v.total += count;
  }
  if (v.tokens.empty()) throw DataError("empty vocabulary file: " + path);
  return v;
}

void save_cooccurrences(const CooccurrenceCounts& counts, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write co-occurrences: " + path);
  for (std::size_t s = 0; s < counts.keys.size(); ++s) {
    const std::uint32_t i = static_cast<std::uint32_t>(counts.keys[s] >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(counts.keys[s]);
    out << (i + 1) << '\t' << (j + 1) << '\t' << counts.values[s] << '\n';
  }
  if (!out) throw DataError("failed writing co-occurrences: " + path);
}

CooccurrenceCounts load_cooccurrences(const std::string& path, int window) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open co-occurrences: " + path);
  CooccurrenceCounts counts;
  counts.window = window;
  std::string line;
  std::size_t line_no = 0;
  std::uint32_t max_id = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::uint64_t i = 0, j = 0, c = 0;
    const char* p = line.data();
    const char* last = line.data() + line.size();
    auto eat = [&](std::uint64_t& v) {
      auto [ptr, ec] = std::from_chars(p, last, v);
      if (ec != std::errc()) return false;
      p = ptr;
      while (p < last && (*p == '\t' || *p == ' ')) ++p;
      return true;
    };
    if (!eat(i) || !eat(j) || !eat(c) || p != last || i < 1 || j < 1 || i > j || c < 1)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected ascending 1-based \"i\tj\tcount\"");
    counts.keys.push_back(pack_key(static_cast<std::uint32_t>(i - 1),
                                   static_cast<std::uint32_t>(j - 1)));
    counts.values.push_back(c);
    max_id = std::max(max_id, static_cast<std::uint32_t>(j));
  }
  if (!std::is_sorted(counts.keys.begin(), counts.keys.end()))
    throw DataError(path + ": triples out of order");
  counts.n = max_id;
  for (std::size_t s = 0; s < counts.keys.size(); ++s) {
    const std::uint32_t i = static_cast<std::uint32_t>(counts.keys[s] >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(counts.keys[s]);
    counts.total += (i == j) ? counts.values[s] : 2 * counts.values[s];
  }
  return counts;
}

}  // namespace hypervec::corpus
