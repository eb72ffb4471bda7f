#include "hypervec/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "hypervec/errors.hpp"

namespace hypervec::sgns {

AliasTable AliasTable::build(std::span<const double> probs) {
  const std::size_t n = probs.size();
  if (n == 0) throw std::invalid_argument("alias table needs a nonempty distribution");
  double total = 0;
  for (double p : probs) {
    if (!(p >= 0)) throw std::invalid_argument("alias table needs nonnegative mass");
    total += p;
  }
  if (!(total > 0)) throw std::invalid_argument("alias table needs positive mass");

  AliasTable t;
  t.prob_.resize(n);
  t.alias_.resize(n);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = probs[i] * n / total;

  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back(), l = large.back();
    small.pop_back();
    t.prob_[s] = scaled[s];
    t.alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) {
    t.prob_[i] = 1.0;
    t.alias_[i] = i;
  }
  for (std::uint32_t i : small) {  // leftovers are 1.0 up to roundoff
    t.prob_[i] = 1.0;
    t.alias_[i] = i;
  }
  return t;
}

std::uint32_t AliasTable::sample(SplitMix64& rng) const {
  const std::uint32_t i =
      static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(prob_.size())));
  return rng.u01() < prob_[i] ? i : alias_[i];
}

std::uint32_t negative_sample(const AliasTable& table, SplitMix64& rng) {
  return table.sample(rng);
}

spectral::EmbeddingMatrix SgnsModel::word_embeddings(
    const corpus::Vocabulary& vocab) const {
  if (vocab.size() != n)
    throw std::invalid_argument("vocabulary does not match the trained model");
  spectral::EmbeddingMatrix emb;
  emb.rows.resize(n, dim);
  for (std::uint32_t i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j)
      emb.rows(i, j) = W[static_cast<std::size_t>(i) * dim + static_cast<std::size_t>(j)];
  emb.labels = vocab.tokens;
  return emb;
}

namespace {

inline float sigmoid(float x) { return 1.0f / (1.0f + std::exp(-x)); }
inline double log_sigmoid(double x) { return -std::log1p(std::exp(-x)); }

struct EpochTally {
  double objective = 0;
  std::uint64_t pairs = 0;
};

}  // namespace

SgnsModel train_sgns(std::span<const std::uint32_t> ids,
                     const corpus::Vocabulary& vocab,
                     const corpus::UnigramDistribution& unigram,
                     const SgnsConfig& cfg) {
  if (cfg.dim < 1 || cfg.window < 1 || cfg.negatives < 0 || cfg.epochs < 1 ||
      cfg.threads < 1 || !(cfg.step_size > 0))
    throw std::invalid_argument("bad sgns config");
  if (unigram.probs.size() != vocab.size())
    throw std::invalid_argument("unigram distribution does not match vocabulary");
  for (std::uint32_t id : ids)
    if (id >= vocab.size())
      throw std::invalid_argument("id stream must be prepared (in-vocabulary)");

  const std::uint32_t n = vocab.size();
  const int d = cfg.dim;
  SgnsModel model;
  model.n = n;
  model.dim = d;
  model.k = cfg.negatives;
  model.W.resize(static_cast<std::size_t>(n) * d);
  model.C.assign(static_cast<std::size_t>(n) * d, 0.0f);
  {
    SplitMix64 init(substream(cfg.seed, "sgns-init"));
    for (float& w : model.W)
      w = static_cast<float>((init.u01() - 0.5) / d);
  }

  const AliasTable alias = AliasTable::build(unigram.probs);
  const std::uint64_t train_root = substream(cfg.seed, "sgns-train");
  const std::uint64_t total_positions =
      static_cast<std::uint64_t>(cfg.epochs) * std::max<std::size_t>(ids.size(), 1);
  std::atomic<std::uint64_t> processed{0};

  float* const W = model.W.data();
  float* const C = model.C.data();
  const std::int64_t len = static_cast<std::int64_t>(ids.size());

  auto run_span = [&](int epoch, int worker, std::int64_t lo, std::int64_t hi,
                      EpochTally& tally) {
    SplitMix64 rng(mix64(train_root,
                         (static_cast<std::uint64_t>(epoch) << 32) |
                             static_cast<std::uint64_t>(worker)));
    std::vector<float> grad_w(static_cast<std::size_t>(d));
    for (std::int64_t t = lo; t < hi; ++t) {
      const std::uint64_t done = processed.fetch_add(1, std::memory_order_relaxed);
      const double frac = 1.0 - static_cast<double>(done) / total_positions;
      const float lr = static_cast<float>(
          cfg.step_size * std::max(cfg.min_step_fraction, frac));
      const std::uint32_t center = ids[static_cast<std::size_t>(t)];
      float* const wrow = W + static_cast<std::size_t>(center) * d;

      for (int off = -cfg.window; off <= cfg.window; ++off) {
        if (off == 0) continue;
        const std::int64_t p = t + off;
        if (p < 0 || p >= len) continue;
        const std::uint32_t ctx = ids[static_cast<std::size_t>(p)];
        float* const crow = C + static_cast<std::size_t>(ctx) * d;

        std::fill(grad_w.begin(), grad_w.end(), 0.0f);
        float f = 0;
        for (int i = 0; i < d; ++i) f += wrow[i] * crow[i];
        double obj = log_sigmoid(f);
        const float g_pos = (1.0f - sigmoid(f)) * lr;
        for (int i = 0; i < d; ++i) {
          grad_w[static_cast<std::size_t>(i)] = g_pos * crow[i];
          crow[i] += g_pos * wrow[i];
        }
        for (int m = 0; m < cfg.negatives; ++m) {
          const std::uint32_t neg = alias.sample(rng);
          if (neg == ctx) continue;
          float* const nrow = C + static_cast<std::size_t>(neg) * d;
          float fn = 0;
          for (int i = 0; i < d; ++i) fn += wrow[i] * nrow[i];
          obj += log_sigmoid(-fn);
          const float g_neg = -sigmoid(fn) * lr;
          for (int i = 0; i < d; ++i) {
            grad_w[static_cast<std::size_t>(i)] += g_neg * nrow[i];
            nrow[i] += g_neg * wrow[i];
          }
        }
        for (int i = 0; i < d; ++i) wrow[i] += grad_w[static_cast<std::size_t>(i)];
        tally.objective += obj;
        ++tally.pairs;
      }
    }
  };

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<EpochTally> tallies(static_cast<std::size_t>(cfg.threads));
    if (cfg.threads == 1) {
      run_span(epoch, 0, 0, len, tallies[0]);
    } else {
      // Lock-free updates: fast and standard, but racy, so the parallel
      // path is not bit-reproducible.
      std::vector<std::thread> pool;
      for (int w = 0; w < cfg.threads; ++w) {
        const std::int64_t lo = len * w / cfg.threads;
        const std::int64_t hi = len * (w + 1) / cfg.threads;
        pool.emplace_back([&, w, lo, hi, epoch] {
          run_span(epoch, w, lo, hi, tallies[static_cast<std::size_t>(w)]);
        });
      }
      for (auto& th : pool) th.join();
    }
    double sum = 0;
    std::uint64_t pairs = 0;
    for (const auto& tally : tallies) {
      sum += tally.objective;
      pairs += tally.pairs;
    }
    const double mean = pairs == 0 ? 0.0 : sum / static_cast<double>(pairs);
    if (!std::isfinite(mean))
      throw ConvergenceError("sgns objective diverged (non-finite)");
    model.epoch_objective.push_back(mean);
  }
  return model;
}

}  // namespace hypervec::sgns
