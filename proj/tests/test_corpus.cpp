#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "hypervec/corpus.hpp"
#include "hypervec/errors.hpp"
#include "hypervec/rng.hpp"

using namespace hypervec;
using namespace hypervec::corpus;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p, const std::string& content) : path(std::move(p)) {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::vector<std::string> drain(TokenStream& ts) {
  std::vector<std::string> out;
  std::string tok;
  while (ts.next(tok)) out.push_back(tok);
  return out;
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("vocabulary orders by frequency then lexicographically") {
  std::vector<std::string> toks = {"b", "a", "b", "c", "a", "b"};
  auto vocab = build_vocabulary(toks, 1);
  REQUIRE(vocab.size() == 3);
  CHECK(vocab.tokens == std::vector<std::string>{"b", "a", "c"});
  CHECK(vocab.counts == std::vector<std::uint64_t>{3, 2, 1});
  CHECK(vocab.total == 6);
  CHECK(vocab.id_of("b") == 0u);
  CHECK(vocab.id_of("c") == 2u);
  CHECK_FALSE(vocab.id_of("zzz").has_value());

  auto trimmed = build_vocabulary(toks, 2);
  CHECK(trimmed.tokens == std::vector<std::string>{"b", "a"});
  CHECK(trimmed.total == 5);
}

TEST_CASE("equal-frequency tokens break ties lexicographically") {
  std::vector<std::string> toks = {"pear", "apple", "mango"};
  auto vocab = build_vocabulary(toks, 1);
  CHECK(vocab.tokens == std::vector<std::string>{"apple", "mango", "pear"});
}

TEST_CASE("empty vocabulary is an error") {
  std::vector<std::string> toks = {"a", "b"};
  CHECK_THROWS_AS(build_vocabulary(toks, 3), DataError);
  CHECK_THROWS_AS(build_vocabulary(std::vector<std::string>{}, 1), DataError);
}

TEST_CASE("to_ids maps unknown tokens to the OOV sentinel") {
  std::vector<std::string> toks = {"a", "a", "b"};
  auto vocab = build_vocabulary(toks, 2);  // only "a" survives
  VectorTokenStream ts({"a", "x", "b", "a"});
  auto ids = to_ids(ts, vocab);
  CHECK(ids == std::vector<std::uint32_t>{0, kOovId, kOovId, 0});
}

TEST_CASE("file token stream splits on arbitrary whitespace") {
  TempFile f("corpus_ws_tmp.txt", "  alpha\tbeta\r\n\n gamma  delta\n");
  FileTokenStream ts(f.path);
  CHECK(drain(ts) == std::vector<std::string>{"alpha", "beta", "gamma", "delta"});
  ts.reset();
  CHECK(drain(ts) == std::vector<std::string>{"alpha", "beta", "gamma", "delta"});
}

TEST_CASE("file token stream survives tokens crossing buffer refills") {
  // One token longer than the internal read buffer, then a short one.
  std::string big(2'500'000, 'x');
  TempFile f("corpus_big_tmp.txt", big + " tail");
  FileTokenStream ts(f.path);
  std::string tok;
  REQUIRE(ts.next(tok));
  CHECK(tok.size() == big.size());
  CHECK(tok == big);
  REQUIRE(ts.next(tok));
  CHECK(tok == "tail");
  CHECK_FALSE(ts.next(tok));
}

TEST_CASE("missing corpus file is a data error") {
  CHECK_THROWS_AS(FileTokenStream("no_such_file_anywhere.txt"), DataError);
}

TEST_CASE("windowed counts on a tiny corpus match hand-computed values") {
  // ids = a b a b a c b c, window 2. Oracle recomputed independently:
  // stored (0,0)=4 (0,1)=5 (0,2)=1 (1,1)=2 (1,2)=3 (2,2)=2, total 26.
  std::vector<std::uint32_t> ids = {0, 1, 0, 1, 0, 2, 1, 2};
  auto counts = count_cooccurrences(ids, 3, 2);
  CHECK(counts.n == 3);
  CHECK(counts.window == 2);
  CHECK(counts.stored_pairs() == 6);
  CHECK(counts.count(0, 0) == 4);
  CHECK(counts.count(0, 1) == 5);
  CHECK(counts.count(1, 0) == 5);  // symmetric lookup
  CHECK(counts.count(0, 2) == 1);
  CHECK(counts.count(1, 1) == 2);
  CHECK(counts.count(1, 2) == 3);
  CHECK(counts.count(2, 2) == 2);
  CHECK(counts.total == 26);
  CHECK(counts.row_sums() == std::vector<std::uint64_t>{10, 10, 6});
}

TEST_CASE("total equals diagonal plus twice the off-diagonal") {
  std::vector<std::uint32_t> ids = {0, 1, 0, 1, 0, 2, 1, 2};
  auto counts = count_cooccurrences(ids, 3, 2);
  std::uint64_t diag = 0, off = 0;
  for (std::size_t s = 0; s < counts.keys.size(); ++s) {
    const auto i = static_cast<std::uint32_t>(counts.keys[s] >> 32);
    const auto j = static_cast<std::uint32_t>(counts.keys[s]);
    (i == j ? diag : off) += counts.values[s];
  }
  CHECK(counts.total == diag + 2 * off);
  // row sums are the ordered marginals, so they sum to the same total
  std::uint64_t rs_total = 0;
  for (auto v : counts.row_sums()) rs_total += v;
  CHECK(rs_total == counts.total);
}

TEST_CASE("OOV positions block pairs but hold window slots open") {
  std::vector<std::uint32_t> ids = {0, kOovId, 1};
  auto w1 = count_cooccurrences(ids, 2, 1);
  CHECK(w1.stored_pairs() == 0);
  CHECK(w1.total == 0);
  auto w2 = count_cooccurrences(ids, 2, 2);
  CHECK(w2.stored_pairs() == 1);
  CHECK(w2.count(0, 1) == 1);  // offset 2 hops over the OOV slot
}

TEST_CASE("chunked counting is invariant to the chunk length") {
  SplitMix64 rng(31);
  std::vector<std::uint32_t> ids(10000);
  for (auto& id : ids)
    id = rng.below(60) == 0 ? kOovId : static_cast<std::uint32_t>(rng.below(50));
  auto whole = count_cooccurrences(ids, 50, 3);
  for (std::int64_t chunk : {1, 7, 257, 9999, 10000, 20000}) {
    auto part = count_cooccurrences(ids, 50, 3, chunk);
    CHECK(part.keys == whole.keys);
    CHECK(part.values == whole.values);
    CHECK(part.total == whole.total);
  }
}

TEST_CASE("counting validates its arguments") {
  std::vector<std::uint32_t> ids = {0, 1};
  CHECK_THROWS_AS(count_cooccurrences(ids, 2, 0), std::invalid_argument);
  CHECK_THROWS_AS(count_cooccurrences(ids, 2, 1, 0), std::invalid_argument);
}

TEST_CASE("counting an empty stream yields empty counts") {
  std::vector<std::uint32_t> ids;
  auto counts = count_cooccurrences(ids, 5, 2);
  CHECK(counts.stored_pairs() == 0);
  CHECK(counts.total == 0);
}

TEST_CASE("subsampling keeps rare words and drops OOV unconditionally") {
  std::vector<std::string> toks;
  for (int i = 0; i < 1000; ++i) toks.push_back("the");
  for (int i = 0; i < 10; ++i) toks.push_back("rare");
  auto vocab = build_vocabulary(toks, 1);
  std::vector<std::uint32_t> ids(1000, 0);
  for (int i = 0; i < 10; ++i) ids.push_back(1);
  ids.push_back(kOovId);

  // threshold above every frequency: nothing is dropped except the OOV slot
  auto all = subsample(ids, vocab, 1.0, 7);
  CHECK(all.size() == 1010);

  // aggressive threshold: the frequent word thins out, ids stay valid
  auto thin = subsample(ids, vocab, 1e-3, 7);
  CHECK(thin.size() < 300);
  std::size_t kept_the = 0, kept_rare = 0;
  for (auto id : thin) {
    REQUIRE(id < vocab.size());
    (id == 0 ? kept_the : kept_rare) += 1;
  }
  // keep probability sqrt(t/f) is about 0.032 for "the", 0.32 for "rare"
  CHECK(kept_the < 100);
  CHECK(kept_the > 2);

  CHECK_THROWS_AS(subsample(ids, vocab, 0.0, 7), std::invalid_argument);
}

TEST_CASE("subsampling is seed-deterministic and matches the stream overload") {
  std::vector<std::string> toks;
  for (int i = 0; i < 500; ++i) toks.push_back(i % 3 == 0 ? "a" : "b");
  auto vocab = build_vocabulary(toks, 1);
  VectorTokenStream ts(toks);
  auto from_stream = subsample(ts, vocab, 1e-3, 99);
  ts.reset();
  auto ids = to_ids(ts, vocab);
  auto from_span = subsample(ids, vocab, 1e-3, 99);
  CHECK(from_stream == from_span);
  auto again = subsample(ids, vocab, 1e-3, 99);
  CHECK(again == from_span);
  auto other_seed = subsample(ids, vocab, 1e-3, 100);
  CHECK(other_seed != from_span);
}

TEST_CASE("unigram distribution applies the smoothing exponent") {
  Vocabulary vocab;
  vocab.tokens = {"a", "b", "c"};
  vocab.counts = {10, 5, 1};
  vocab.total = 16;
  auto u = unigram_distribution(vocab, 0.75);
  REQUIRE(u.probs.size() == 3);
  // counts^0.75 normalized, recomputed in numpy
  CHECK(u.probs[0] == doctest::Approx(0.5641966986274682).epsilon(1e-12));
  CHECK(u.probs[1] == doctest::Approx(0.3354733641344156).epsilon(1e-12));
  CHECK(u.probs[2] == doctest::Approx(0.10032993723811622).epsilon(1e-12));

  auto uniform = unigram_distribution(vocab, 0.0);
  CHECK(uniform.probs[0] == doctest::Approx(1.0 / 3));
  auto raw = unigram_distribution(vocab, 1.0);
  CHECK(raw.probs[0] == doctest::Approx(10.0 / 16));
  CHECK_THROWS_AS(unigram_distribution(vocab, 1.5), std::invalid_argument);
}

TEST_CASE("vocabulary file round trip") {
  std::vector<std::string> toks = {"b", "a", "b", "c", "a", "b"};
  auto vocab = build_vocabulary(toks, 1);
  const std::string path = "vocab_tmp.tsv";
  save_vocabulary(vocab, path);
  auto loaded = load_vocabulary(path);
  std::remove(path.c_str());
  CHECK(loaded.tokens == vocab.tokens);
  CHECK(loaded.counts == vocab.counts);
  CHECK(loaded.total == vocab.total);
  CHECK(loaded.id_of("c") == vocab.id_of("c"));
}

TEST_CASE("malformed vocabulary files fail with a line number") {
  TempFile f("vocab_bad_tmp.tsv", "good\t3\nbad NOCOUNT\n");
  CHECK_THROWS_WITH_AS(load_vocabulary(f.path),
                       doctest::Contains("vocab_bad_tmp.tsv:2"), DataError);
  TempFile g("vocab_bad2_tmp.tsv", "good\txyz\n");
  CHECK_THROWS_AS(load_vocabulary(g.path), DataError);
}

TEST_CASE("co-occurrence file round trip is 1-based on disk") {
  std::vector<std::uint32_t> ids = {0, 1, 0, 1, 0, 2, 1, 2};
  auto counts = count_cooccurrences(ids, 3, 2);
  const std::string path = "cooc_tmp.tsv";
  save_cooccurrences(counts, path);
  {
    std::ifstream in(path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "1\t1\t4");
  }
  auto loaded = load_cooccurrences(path, 2);
  std::remove(path.c_str());
  CHECK(loaded.keys == counts.keys);
  CHECK(loaded.values == counts.values);
  CHECK(loaded.total == counts.total);
  CHECK(loaded.n == counts.n);
}

TEST_CASE("co-occurrence loader rejects malformed and misordered files") {
  TempFile lower("cooc_bad_tmp.tsv", "2\t1\t5\n");  // i > j
  CHECK_THROWS_AS(load_cooccurrences(lower.path), DataError);
  TempFile zero("cooc_bad2_tmp.tsv", "0\t1\t5\n");  // 0-based id
  CHECK_THROWS_AS(load_cooccurrences(zero.path), DataError);
  TempFile unsorted("cooc_bad3_tmp.tsv", "2\t2\t1\n1\t2\t1\n");
  CHECK_THROWS_AS(load_cooccurrences(unsorted.path), DataError);
}

}  // TEST_SUITE
