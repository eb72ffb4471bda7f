#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hypervec/corpus.hpp"
#include "hypervec/errors.hpp"
#include "hypervec/rng.hpp"
#include "hypervec/sgns.hpp"

using namespace hypervec;
using namespace hypervec::sgns;

namespace {

// Two-topic corpus: tokens of one topic only ever co-occur with their own
// topic, in separated blocks so windows never straddle the boundary.
struct TinyCorpus {
  corpus::Vocabulary vocab;
  std::vector<std::uint32_t> ids;
  corpus::UnigramDistribution unigram;
};

TinyCorpus make_two_topic_corpus(int blocks, std::uint64_t seed) {
  const std::vector<std::string> topic_a{"apple", "banana", "cherry", "plum"};
  const std::vector<std::string> topic_b{"bolt", "wrench", "gear", "rivet"};
  std::vector<std::string> tokens;
  SplitMix64 rng(seed);
  for (int b = 0; b < blocks; ++b) {
    const auto& topic = (b % 2 == 0) ? topic_a : topic_b;
    for (int t = 0; t < 12; ++t)
      tokens.push_back(topic[static_cast<std::size_t>(rng.below(topic.size()))]);
  }
  TinyCorpus out;
  out.vocab = corpus::build_vocabulary(tokens, 1);
  corpus::VectorTokenStream stream(tokens);
  out.ids = corpus::to_ids(stream, out.vocab);
  out.unigram = corpus::unigram_distribution(out.vocab, 0.75);
  return out;
}

double cosine(const float* a, const float* b, int d) {
  double ab = 0, aa = 0, bb = 0;
  for (int i = 0; i < d; ++i) {
    ab += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace

TEST_SUITE("sgns") {
  TEST_CASE("pair gradient matches central finite differences") {
    const std::size_t d = 7;
    SplitMix64 rng(314);
    std::vector<double> w(d), c(d);
    std::vector<std::vector<double>> negs(3, std::vector<double>(d));
    for (auto& v : w) v = rng.u01() * 2 - 1;
    for (auto& v : c) v = rng.u01() * 2 - 1;
    for (auto& neg : negs)
      for (auto& v : neg) v = rng.u01() * 2 - 1;
    std::vector<const double*> neg_ptrs{negs[0].data(), negs[1].data(), negs[2].data()};

    std::vector<double> grad_w(d), grad_c(d);
    std::vector<std::vector<double>> grad_negs;
    pair_gradient<double>(w, c, neg_ptrs, grad_w, grad_c, &grad_negs);
    REQUIRE(grad_negs.size() == 3);

    const double h = 1e-6;
    auto objective = [&] {
      return pair_objective<double>(w, c, neg_ptrs);
    };
    auto check_fd = [&](std::vector<double>& param, const std::vector<double>& grad) {
      for (std::size_t i = 0; i < d; ++i) {
        const double save = param[i];
        param[i] = save + h;
        const double up = objective();
        param[i] = save - h;
        const double down = objective();
        param[i] = save;
        const double fd = (up - down) / (2 * h);
        const double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
        CHECK(std::abs(fd - grad[i]) / scale < 1e-5);
      }
    };
    check_fd(w, grad_w);
    check_fd(c, grad_c);
    for (std::size_t m = 0; m < negs.size(); ++m) check_fd(negs[m], grad_negs[m]);
  }

  TEST_CASE("alias table reproduces the target distribution") {
    const std::vector<double> probs{0.5, 0.3, 0.15, 0.05};
    const auto table = AliasTable::build(probs);
    CHECK(table.size() == 4);
    SplitMix64 rng(5);
    std::vector<std::uint64_t> counts(4, 0);
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) ++counts[table.sample(rng)];
    for (std::size_t i = 0; i < 4; ++i) {
      const double freq = static_cast<double>(counts[i]) / draws;
      CHECK(std::abs(freq - probs[i]) < 0.005);
    }
  }

  TEST_CASE("alias table accepts unnormalized mass and rejects degenerate input") {
    const std::vector<double> unnorm{5.0, 3.0, 2.0};
    const auto table = AliasTable::build(unnorm);
    SplitMix64 rng(6);
    std::vector<std::uint64_t> counts(3, 0);
    for (int i = 0; i < 100000; ++i) ++counts[negative_sample(table, rng)];
    CHECK(std::abs(static_cast<double>(counts[0]) / 100000 - 0.5) < 0.01);

    CHECK_THROWS_AS(AliasTable::build(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(AliasTable::build(std::vector<double>{0.5, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(AliasTable::build(std::vector<double>{0.0, 0.0}), std::invalid_argument);
  }

  TEST_CASE("single-threaded training is bit-deterministic") {
    const auto data = make_two_topic_corpus(120, 1);
    SgnsConfig cfg;
    cfg.dim = 12;
    cfg.window = 2;
    cfg.negatives = 4;
    cfg.epochs = 2;
    cfg.seed = 7;
    const auto a = train_sgns(data.ids, data.vocab, data.unigram, cfg);
    const auto b = train_sgns(data.ids, data.vocab, data.unigram, cfg);
    CHECK(a.W == b.W);
    CHECK(a.C == b.C);
    CHECK(a.epoch_objective == b.epoch_objective);

    SgnsConfig other = cfg;
    other.seed = 8;
    const auto c = train_sgns(data.ids, data.vocab, data.unigram, other);
    CHECK(a.W != c.W);
  }

  TEST_CASE("objective improves over epochs on a learnable corpus") {
    const auto data = make_two_topic_corpus(300, 2);
    SgnsConfig cfg;
    cfg.dim = 16;
    cfg.window = 2;
    cfg.negatives = 5;
    cfg.epochs = 5;
    cfg.seed = 3;
    const auto model = train_sgns(data.ids, data.vocab, data.unigram, cfg);
    REQUIRE(model.epoch_objective.size() == 5);
    for (double v : model.epoch_objective) CHECK(std::isfinite(v));
    CHECK(model.epoch_objective.back() > model.epoch_objective.front());
  }

  TEST_CASE("embeddings separate the two topics") {
    const auto data = make_two_topic_corpus(600, 4);
    SgnsConfig cfg;
    cfg.dim = 16;
    cfg.window = 2;
    cfg.negatives = 5;
    cfg.epochs = 8;
    cfg.step_size = 0.05;
    cfg.seed = 11;
    const auto model = train_sgns(data.ids, data.vocab, data.unigram, cfg);

    const std::vector<std::string> topic_a{"apple", "banana", "cherry", "plum"};
    const std::vector<std::string> topic_b{"bolt", "wrench", "gear", "rivet"};
    auto vec = [&](const std::string& tok) {
      const auto id = data.vocab.id_of(tok);
      REQUIRE(id.has_value());
      return model.W.data() + static_cast<std::size_t>(*id) * model.dim;
    };
    double within = 0, across = 0;
    int wn = 0, an = 0;
    for (const auto& x : topic_a)
      for (const auto& y : topic_a)
        if (x != y) { within += cosine(vec(x), vec(y), model.dim); ++wn; }
    for (const auto& x : topic_b)
      for (const auto& y : topic_b)
        if (x != y) { within += cosine(vec(x), vec(y), model.dim); ++wn; }
    for (const auto& x : topic_a)
      for (const auto& y : topic_b) { across += cosine(vec(x), vec(y), model.dim); ++an; }
    CHECK(within / wn > across / an + 0.2);
  }

  TEST_CASE("parallel mode trains to finite weights") {
    const auto data = make_two_topic_corpus(120, 9);
    SgnsConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 2;
    cfg.threads = 2;
    const auto model = train_sgns(data.ids, data.vocab, data.unigram, cfg);
    for (float v : model.W) REQUIRE(std::isfinite(v));
    for (float v : model.C) REQUIRE(std::isfinite(v));
    CHECK(model.epoch_objective.size() == 2);
  }

  TEST_CASE("word_embeddings exports rows with vocabulary labels") {
    const auto data = make_two_topic_corpus(60, 12);
    SgnsConfig cfg;
    cfg.dim = 6;
    cfg.epochs = 1;
    const auto model = train_sgns(data.ids, data.vocab, data.unigram, cfg);
    const auto emb = model.word_embeddings(data.vocab);
    REQUIRE(emb.n() == static_cast<Eigen::Index>(data.vocab.size()));
    CHECK(emb.dim() == 6);
    CHECK(emb.labels == data.vocab.tokens);
    for (int j = 0; j < 6; ++j)
      CHECK(emb.rows(2, j) ==
            doctest::Approx(model.W[2 * 6 + static_cast<std::size_t>(j)]).epsilon(1e-12));

    corpus::Vocabulary other;  // wrong size
    other.tokens = {"x"};
    other.counts = {1};
    CHECK_THROWS_AS(model.word_embeddings(other), std::invalid_argument);
  }

  TEST_CASE("training validates config and inputs") {
    const auto data = make_two_topic_corpus(20, 13);
    SgnsConfig cfg;
    cfg.dim = 0;
    CHECK_THROWS_AS(train_sgns(data.ids, data.vocab, data.unigram, cfg),
                    std::invalid_argument);
    cfg.dim = 4;
    cfg.epochs = 0;
    CHECK_THROWS_AS(train_sgns(data.ids, data.vocab, data.unigram, cfg),
                    std::invalid_argument);
    cfg.epochs = 1;
    cfg.step_size = 0.0;
    CHECK_THROWS_AS(train_sgns(data.ids, data.vocab, data.unigram, cfg),
                    std::invalid_argument);
    cfg.step_size = 0.025;

    corpus::UnigramDistribution wrong;
    wrong.probs = {1.0};
    CHECK_THROWS_AS(train_sgns(data.ids, data.vocab, wrong, cfg), std::invalid_argument);

    std::vector<std::uint32_t> oov = data.ids;
    oov.push_back(data.vocab.size());
    CHECK_THROWS_AS(train_sgns(oov, data.vocab, data.unigram, cfg), std::invalid_argument);
  }
}
