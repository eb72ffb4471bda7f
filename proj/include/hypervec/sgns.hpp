#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hypervec/corpus.hpp"
#include "hypervec/rng.hpp"
#include "hypervec/spectral.hpp"

namespace hypervec::sgns {

struct SgnsConfig {
  int dim = 200;
  int window = 2;          // fixed symmetric window
  int negatives = 5;       // k
  int epochs = 5;
  double step_size = 0.025;
  double min_step_fraction = 1e-4;  // linear decay floor, relative to step_size
  int threads = 1;         // >1 enables lock-free (nondeterministic) updates
  std::uint64_t seed = 0;
};

struct SgnsModel {
  std::uint32_t n = 0;
  int dim = 0;
  int k = 0;
  std::vector<float> W;  // n x dim row-major, center vectors
  std::vector<float> C;  // n x dim row-major, context vectors
  std::vector<double> epoch_objective;  // running mean of the sampled objective

  spectral::EmbeddingMatrix word_embeddings(const corpus::Vocabulary& vocab) const;
};

// Walker alias table over a discrete distribution.
class AliasTable {
 public:
  static AliasTable build(std::span<const double> probs);
  std::uint32_t sample(SplitMix64& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

std::uint32_t negative_sample(const AliasTable& table, SplitMix64& rng);

// Sampled per-pair objective log s(w.c) + sum_neg log s(-w.c') and its
// gradient. Shared by the trainer and the finite-difference tests.
template <typename Scalar>
Scalar pair_objective(std::span<const Scalar> w, std::span<const Scalar> c,
                      std::span<const Scalar* const> negs) {
  auto dot = [](std::span<const Scalar> a, const Scalar* b) {
    Scalar s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  auto log_sigmoid = [](Scalar x) { return -std::log(Scalar(1) + std::exp(-x)); };
  Scalar obj = log_sigmoid(dot(w, c.data()));
  for (const Scalar* neg : negs) obj += log_sigmoid(-dot(w, neg));
  return obj;
}

// Gradients of pair_objective with respect to w, c and each negative.
// grad_w has w.size() entries; grad_c likewise; grad_negs is per-negative.
template <typename Scalar>
void pair_gradient(std::span<const Scalar> w, std::span<const Scalar> c,
                   std::span<const Scalar* const> negs, std::span<Scalar> grad_w,
                   std::span<Scalar> grad_c,
                   std::vector<std::vector<Scalar>>* grad_negs) {
  const std::size_t d = w.size();
  auto sigmoid = [](Scalar x) { return Scalar(1) / (Scalar(1) + std::exp(-x)); };
  Scalar wc = 0;
  for (std::size_t i = 0; i < d; ++i) wc += w[i] * c[i];
  const Scalar g_pos = Scalar(1) - sigmoid(wc);  // d/dx log s(x)
  for (std::size_t i = 0; i < d; ++i) {
    grad_w[i] = g_pos * c[i];
    grad_c[i] = g_pos * w[i];
  }
  if (grad_negs) grad_negs->assign(negs.size(), std::vector<Scalar>(d, 0));
  for (std::size_t m = 0; m < negs.size(); ++m) {
    const Scalar* cn = negs[m];
    Scalar wn = 0;
    for (std::size_t i = 0; i < d; ++i) wn += w[i] * cn[i];
    const Scalar g_neg = -sigmoid(wn);  // d/dx log s(-x)
    for (std::size_t i = 0; i < d; ++i) grad_w[i] += g_neg * cn[i];
    if (grad_negs)
      for (std::size_t i = 0; i < d; ++i) (*grad_negs)[m][i] = g_neg * w[i];
  }
}

// Stochastic gradient ascent over the windowed pairs of a prepared
// (subsampled, in-vocabulary) id stream, negatives from the smoothed
// unigram distribution. Single-threaded mode is seed-deterministic; the
// lock-free parallel mode is not and is documented as such.
// Throws ConvergenceError if the objective becomes non-finite.
SgnsModel train_sgns(std::span<const std::uint32_t> ids,
                     const corpus::Vocabulary& vocab,
                     const corpus::UnigramDistribution& unigram,
                     const SgnsConfig& cfg);

}  // namespace hypervec::sgns
