#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypervec/errors.hpp"
#include "hypervec/eval.hpp"
#include "hypervec/rng.hpp"
#include "hypervec/spectral.hpp"

using namespace hypervec;
using namespace hypervec::eval;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::temp_directory_path() / "hypervec_eval_test") {
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string write(const std::string& name, const std::string& content) const {
    const auto p = path / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p.string();
  }
};

// Embeddings on the unit circle: cosine similarity decreases with the angular
// gap, so the expected ranking is known by construction.
spectral::EmbeddingMatrix circle_embeddings(const std::vector<std::string>& labels) {
  spectral::EmbeddingMatrix emb;
  emb.rows.resize(static_cast<Eigen::Index>(labels.size()), 2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double angle = 0.4 * static_cast<double>(i);
    emb.rows(static_cast<Eigen::Index>(i), 0) = std::cos(angle);
    emb.rows(static_cast<Eigen::Index>(i), 1) = std::sin(angle);
  }
  emb.labels = labels;
  return emb;
}

// Token "tN" maps to a cluster center with small jitter; the tag is the
// cluster id, so tags are a linearly learnable function of the features.
struct SyntheticTagging {
  spectral::EmbeddingMatrix emb;
  TaggedCorpus corpus;
};

SyntheticTagging make_tagging_task(int tokens_per_tag, int sentences,
                                   std::uint64_t seed) {
  const std::vector<std::string> tags{"NOUN", "VERB", "ADJ"};
  const int d = 4;
  SyntheticTagging out;
  const int n = tokens_per_tag * static_cast<int>(tags.size());
  out.emb.rows.resize(n, d);
  NormalSampler gauss(substream(seed, "tagging-emb"));
  std::vector<std::string> token_tag(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int cluster = i % static_cast<int>(tags.size());
    for (int j = 0; j < d; ++j)
      out.emb.rows(i, j) = (j == cluster ? 4.0 : 0.0) + 0.2 * gauss.next();
    out.emb.labels.push_back("t" + std::to_string(i));
    token_tag[static_cast<std::size_t>(i)] = tags[static_cast<std::size_t>(cluster)];
  }
  SplitMix64 rng(substream(seed, "tagging-sentences"));
  for (int s = 0; s < sentences; ++s) {
    TaggedSentence sent;
    const int len = 5 + static_cast<int>(rng.below(5));
    for (int t = 0; t < len; ++t) {
      const auto id = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
      sent.tokens.push_back(out.emb.labels[id]);
      sent.tags.push_back(token_tag[id]);
    }
    out.corpus.sentences.push_back(std::move(sent));
  }
  out.corpus.tagset = tags;  // already sorted: ADJ < NOUN < VERB fails, fix below
  std::sort(out.corpus.tagset.begin(), out.corpus.tagset.end());
  return out;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("spearman endpoints and tie handling") {
    const std::vector<double> xs{1, 2, 3, 4, 5};
    const std::vector<double> up{2, 4, 8, 16, 32};
    const std::vector<double> down{5, 4, 3, 2, 1};
    CHECK(spearman(xs, up) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(spearman(xs, down) == doctest::Approx(-1.0).epsilon(1e-12));

    // Average ranks for ties; reference value from an independent
    // rank-correlation implementation.
    const std::vector<double> tx{1, 2, 2, 3, 5, 5, 5, 8};
    const std::vector<double> ty{2, 1, 4, 3, 6, 5, 8, 7};
    CHECK(spearman(tx, ty) == doctest::Approx(0.8470243628419076).epsilon(1e-12));
  }

  TEST_CASE("spearman rejects degenerate input") {
    const std::vector<double> xs{1, 2, 3};
    const std::vector<double> flat{4, 4, 4};
    CHECK_THROWS_AS(spearman(xs, flat), DataError);
    CHECK_THROWS_AS(spearman(flat, xs), DataError);
    CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{2}), DataError);
    CHECK_THROWS_AS(spearman(xs, std::vector<double>{1, 2}), std::invalid_argument);
  }

  TEST_CASE("embedding lookup is case-insensitive on queries") {
    const auto emb = circle_embeddings({"apple", "pear", "quince"});
    const EmbeddingLookup lookup(emb);
    REQUIRE(lookup.row_of("pear").has_value());
    CHECK(*lookup.row_of("pear") == 1);
    CHECK(*lookup.row_of("Pear") == 1);
    CHECK(*lookup.row_of("QUINCE") == 2);
    CHECK(!lookup.row_of("mango").has_value());

    spectral::EmbeddingMatrix unlabeled;
    unlabeled.rows = Eigen::MatrixXd::Ones(3, 2);
    CHECK_THROWS_AS(EmbeddingLookup{unlabeled}, std::invalid_argument);
  }

  TEST_CASE("similarity evaluation ranks by cosine and reports coverage") {
    const auto emb = circle_embeddings({"a", "b", "c", "d", "e"});
    SimilarityDataset ds;
    // Angular gaps 1, 2, 3, 4 steps; human scores ordered the same way.
    ds.pairs = {{"a", "b", 9.0}, {"a", "c", 7.0}, {"a", "d", 5.0}, {"a", "e", 2.0},
                {"a", "zzz", 8.0}};  // skipped, out of vocabulary
    const auto res = evaluate_similarity(emb, ds);
    CHECK(res.total == 5);
    CHECK(res.used == 4);
    CHECK(res.coverage == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(res.spearman == doctest::Approx(1.0).epsilon(1e-12));

    SimilarityDataset thin;
    thin.pairs = {{"a", "b", 1.0}, {"zzz", "b", 2.0}};
    CHECK_THROWS_AS(evaluate_similarity(emb, thin), DataError);
  }

  TEST_CASE("context features concatenate five blocks with zero padding") {
    const auto emb = circle_embeddings({"alpha", "beta", "gamma"});
    const EmbeddingLookup lookup(emb);
    const std::vector<std::string> sent{"alpha", "beta", "unknown", "gamma"};

    const auto f0 = build_pos_features(sent, lookup, 0);
    REQUIRE(f0.size() == 10);
    CHECK(f0.segment(0, 4).cwiseAbs().maxCoeff() == 0.0);  // t-2, t-1 out of range
    CHECK((f0.segment(4, 2) - emb.rows.row(0).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f0.segment(6, 2) - emb.rows.row(1).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f0.segment(8, 2).cwiseAbs().maxCoeff() == 0.0);  // "unknown" is OOV

    const auto f2 = build_pos_features(sent, lookup, 2);
    CHECK((f2.segment(0, 2) - emb.rows.row(0).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f2.segment(2, 2) - emb.rows.row(1).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f2.segment(4, 2).cwiseAbs().maxCoeff() == 0.0);  // center token OOV
    CHECK((f2.segment(6, 2) - emb.rows.row(2).transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f2.segment(8, 2).cwiseAbs().maxCoeff() == 0.0);  // t+2 past the end
  }

  TEST_CASE("classifier learns a separable tagging task") {
    const auto task = make_tagging_task(12, 260, 6);
    const auto split = split_tagged_corpus(task.corpus, 0.8, 1);
    PosClassifierConfig cfg;
    cfg.hidden_size = 24;
    cfg.epochs = 12;
    cfg.step_size = 0.3;
    cfg.seed = 2;
    const auto clf = train_pos_classifier(split.first, task.emb, cfg);
    CHECK(clf.tags == split.first.tagset);
    const double acc = evaluate_pos(clf, split.second, task.emb);
    CHECK(acc >= 0.95);

    const auto again = train_pos_classifier(split.first, task.emb, cfg);
    CHECK((clf.A1 - again.A1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((clf.A2 - again.A2).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("tags unseen in training count against accuracy") {
    const auto task = make_tagging_task(6, 80, 7);
    PosClassifierConfig cfg;
    cfg.hidden_size = 12;
    cfg.epochs = 6;
    cfg.seed = 3;
    const auto clf = train_pos_classifier(task.corpus, task.emb, cfg);

    TaggedCorpus weird;
    TaggedSentence sent;
    sent.tokens = {"t0", "t1", "t2"};
    sent.tags = {"MYSTERY", "MYSTERY", "MYSTERY"};
    weird.sentences.push_back(sent);
    weird.tagset = {"MYSTERY"};
    CHECK(evaluate_pos(clf, weird, task.emb) == 0.0);

    PosClassifierConfig bad = cfg;
    bad.hidden_size = 0;
    CHECK_THROWS_AS(train_pos_classifier(task.corpus, task.emb, bad),
                    std::invalid_argument);
    TaggedCorpus empty;
    CHECK_THROWS_AS(train_pos_classifier(empty, task.emb, cfg), DataError);
    CHECK_THROWS_AS(evaluate_pos(clf, empty, task.emb), DataError);
  }

  TEST_CASE("similarity loader handles the delimiter variants") {
    TempDir dir;
    const auto tab = dir.write("tab.tsv", "cat\tdog\t7.5\nhouse\thome\t9.1\n");
    const auto csv = dir.write("c.csv", "cat,dog,7.5\nhouse,home,9.1\n");
    const auto ws = dir.write("ws.txt", "cat dog 7.5\nhouse  home   9.1\n");
    for (const auto& p : {tab, csv, ws}) {
      const auto ds = load_similarity_dataset(p);
      REQUIRE(ds.pairs.size() == 2);
      CHECK(ds.pairs[0].word1 == "cat");
      CHECK(ds.pairs[0].word2 == "dog");
      CHECK(ds.pairs[0].score == doctest::Approx(7.5));
      CHECK(ds.pairs[1].score == doctest::Approx(9.1));
    }
    const auto named = load_similarity_dataset(tab, SimilarityFormat::Tab, "probe");
    CHECK(named.name == "probe");
  }

  TEST_CASE("similarity loader tolerates header, comments and CRLF") {
    TempDir dir;
    const auto p = dir.write("hdr.csv",
                             "Word 1,Word 2,Human (mean)\r\n"
                             "# a comment line\r\n"
                             "tiger,cat,7.35\r\n"
                             "\r\n"
                             "book,paper,7.46\r\n");
    const auto ds = load_similarity_dataset(p);
    REQUIRE(ds.pairs.size() == 2);
    CHECK(ds.pairs[0].word1 == "tiger");
    CHECK(ds.pairs[1].score == doctest::Approx(7.46));
  }

  TEST_CASE("similarity loader reports malformed rows with line numbers") {
    TempDir dir;
    const auto short_row = dir.write("short.csv", "a,b,1.0\nc,d\n");
    CHECK_THROWS_WITH_AS(load_similarity_dataset(short_row),
                         doctest::Contains(":2"), DataError);
    // A non-numeric score is only forgiven on the first content row.
    const auto bad_score = dir.write("bad.csv", "a,b,1.0\nc,d,oops\n");
    CHECK_THROWS_WITH_AS(load_similarity_dataset(bad_score),
                         doctest::Contains(":2"), DataError);
    const auto empty = dir.write("empty.csv", "# nothing\n");
    CHECK_THROWS_AS(load_similarity_dataset(empty), DataError);
    CHECK_THROWS_AS(load_similarity_dataset((dir.path / "none.csv").string()), DataError);
  }

  TEST_CASE("conll loader splits sentences on blank lines and drops chunks") {
    TempDir dir;
    const auto p = dir.write("chunked.txt",
                             "He PRP B-NP\n"
                             "reckons VBZ B-VP\n"
                             "\n"
                             "The DT B-NP\n"
                             "dollar NN I-NP\n"
                             "rose VBD B-VP\n"
                             "\n");
    const auto corpus = load_conll2000(p);
    REQUIRE(corpus.sentences.size() == 2);
    CHECK(corpus.sentences[0].tokens == std::vector<std::string>{"He", "reckons"});
    CHECK(corpus.sentences[0].tags == std::vector<std::string>{"PRP", "VBZ"});
    CHECK(corpus.sentences[1].tokens.size() == 3);
    CHECK(corpus.tagset == std::vector<std::string>{"DT", "NN", "PRP", "VBD", "VBZ"});
    CHECK(corpus.token_count() == 5);

    const auto bad = dir.write("bad.txt", "He PRP B-NP\nlonely\n");
    CHECK_THROWS_WITH_AS(load_conll2000(bad), doctest::Contains(":2"), DataError);
  }

  TEST_CASE("brown loader splits word/TAG on the last slash") {
    TempDir dir;
    const auto p = dir.write("brown.txt",
                             "The/at jury/nn said/vbd\n"
                             "1/2/cd majority/nn\n");
    const auto corpus = load_brown(p);
    REQUIRE(corpus.sentences.size() == 2);
    CHECK(corpus.sentences[0].tokens == std::vector<std::string>{"The", "jury", "said"});
    CHECK(corpus.sentences[0].tags == std::vector<std::string>{"at", "nn", "vbd"});
    CHECK(corpus.sentences[1].tokens[0] == "1/2");  // slash inside the word
    CHECK(corpus.sentences[1].tags[0] == "cd");

    const auto no_tag = dir.write("notag.txt", "word\n");
    CHECK_THROWS_AS(load_brown(no_tag), DataError);
    const auto trailing = dir.write("trail.txt", "word/\n");
    CHECK_THROWS_AS(load_brown(trailing), DataError);
    const auto leading = dir.write("lead.txt", "/tag\n");
    CHECK_THROWS_AS(load_brown(leading), DataError);
  }

  TEST_CASE("corpus split is deterministic and rebuilds both tagsets") {
    const auto task = make_tagging_task(4, 50, 10);
    const auto a = split_tagged_corpus(task.corpus, 0.7, 5);
    const auto b = split_tagged_corpus(task.corpus, 0.7, 5);
    CHECK(a.first.sentences.size() == 35);
    CHECK(a.second.sentences.size() == 15);
    REQUIRE(a.first.sentences.size() == b.first.sentences.size());
    for (std::size_t i = 0; i < a.first.sentences.size(); ++i)
      CHECK(a.first.sentences[i].tokens == b.first.sentences[i].tokens);
    CHECK(!a.first.tagset.empty());
    CHECK(!a.second.tagset.empty());
    CHECK(std::is_sorted(a.first.tagset.begin(), a.first.tagset.end()));

    const auto c = split_tagged_corpus(task.corpus, 0.7, 6);
    bool same = true;
    for (std::size_t i = 0; i < a.first.sentences.size() && same; ++i)
      same = a.first.sentences[i].tokens == c.first.sentences[i].tokens;
    CHECK(!same);

    CHECK_THROWS_AS(split_tagged_corpus(task.corpus, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split_tagged_corpus(task.corpus, 1.0, 1), std::invalid_argument);
    TaggedCorpus single;
    single.sentences.push_back(task.corpus.sentences[0]);
    CHECK_THROWS_AS(split_tagged_corpus(single, 0.9, 1), DataError);
  }
}
