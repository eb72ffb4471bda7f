#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypervec/spectral.hpp"

namespace hypervec::alignment {

struct AlignmentConfig {
  int batch_size = 1024;
  int epochs = 30;
  double step_size = 0.5;     // EMA weight on the batch cross-covariance
  double entropic_reg = 0.05; // Sinkhorn regularization for large batches
  std::uint64_t seed = 0;
  int exact_threshold = 512;  // batches up to this size use the exact solver
  int sinkhorn_iters = 200;
  int final_block = 2048;     // block width of the final global matching
};

struct AlignmentResult {
  Eigen::MatrixXd Q;                // d x d orthogonal
  std::vector<std::uint32_t> perm;  // word i takes row perm[i] of W_B
  double loss = 0.0;                // exact final objective, normalized space
  std::vector<double> history;      // epoch-averaged batch loss
  std::vector<std::string> labels;  // tokens inherited from the W_A side
};

// argmin over orthogonal Q of ||X Q - Y||_F^2, via the polar factor U V^T of
// X^T Y. Throws DataError when X^T Y is rank-deficient beyond tolerance and
// the minimizer is not unique up to the sign convention.
Eigen::MatrixXd procrustes(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

// Exact linear assignment (Jonker-Volgenant shortest augmenting paths).
// Returns row -> column minimizing the total cost.
std::vector<int> solve_assignment_exact(const Eigen::MatrixXd& cost);

// Entropically regularized transport on exp(-cost/reg), rounded to a
// permutation greedily by plan mass with augmenting repair.
std::vector<int> solve_assignment_sinkhorn(const Eigen::MatrixXd& cost,
                                           double reg, int iters = 200);

// Bijection pi minimizing sum_i ||X_i - Y_pi(i)||^2: exact for small
// batches, Sinkhorn-with-rounding above the threshold. The returned cost is
// never worse than the identity assignment.
std::vector<int> solve_assignment(const Eigen::MatrixXd& X,
                                  const Eigen::MatrixXd& Y, double reg,
                                  int exact_threshold = 512,
                                  int sinkhorn_iters = 200);

// Mean-center and scale to unit Frobenius norm; the transform applied to
// both embedding sets before aligning. Exposed so tests can recompute the
// reported objective exactly.
Eigen::MatrixXd normalized_for_alignment(const spectral::EmbeddingMatrix& emb);

// Alternating stochastic optimization of min_Q min_P ||W_A Q - P W_B||^2.
// Q is seeded by Procrustes on the norm-sorted pairing (row norms are
// rotation-invariant), tracks the polar factor of an EMA'd cross-covariance
// through the batch loop, then gets a monotone full-data refinement; a final
// blocked exact matching over cosine costs makes P a well-defined bijection.
AlignmentResult align(const spectral::EmbeddingMatrix& wa,
                      const spectral::EmbeddingMatrix& wb,
                      const AlignmentConfig& cfg);

// Row i of the result is row perm[i] of W_B (original, unnormalized scale);
// labels come from the W_A vocabulary.
spectral::EmbeddingMatrix apply_alignment(const spectral::EmbeddingMatrix& wb,
                                          const AlignmentResult& result);

// n x d i.i.d. standard normal entries, deterministic given seed.
spectral::EmbeddingMatrix random_baseline(Eigen::Index n, int d, std::uint64_t seed);

// Q as row-major text, P as "i<TAB>pi(i)" (1-based), history as CSV.
void save_alignment(const AlignmentResult& result, const std::string& q_path,
                    const std::string& perm_path, const std::string& history_path);
AlignmentResult load_alignment(const std::string& q_path, const std::string& perm_path,
                               const std::string& history_path);

}  // namespace hypervec::alignment
