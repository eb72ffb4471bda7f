#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypervec/pmi.hpp"

namespace hypervec::spectral {

// Symmetric linear operator seen only through products Y = A X. The sparse
// score matrix and the matrix-free connection operator both fit behind it.
class SymmetricOperator {
 public:
  virtual ~SymmetricOperator() = default;
  virtual Eigen::Index dim() const = 0;
  virtual void apply(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) const = 0;
};

// CSR with both triangles expanded, for fast row-parallel matvecs.
class SparseSymmetric final : public SymmetricOperator {
 public:
  static SparseSymmetric from_scores(const pmi::SparseScoreMatrix& m);

  Eigen::Index dim() const override { return n_; }
  void apply(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) const override;
  std::size_t nonzeros() const { return col_.size(); }

 private:
  Eigen::Index n_ = 0;
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> val_;
};

class DenseSymmetric final : public SymmetricOperator {
 public:
  explicit DenseSymmetric(Eigen::MatrixXd a) : a_(std::move(a)) {}
  Eigen::Index dim() const override { return a_.rows(); }
  void apply(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) const override { Y = a_ * X; }
  const Eigen::MatrixXd& matrix() const { return a_; }

 private:
  Eigen::MatrixXd a_;
};

// Adapter for hyperbolic::ConnectionOperator (or anything with dim/apply).
template <typename Op>
class OperatorRef final : public SymmetricOperator {
 public:
  explicit OperatorRef(const Op& op) : op_(op) {}
  Eigen::Index dim() const override { return op_.dim(); }
  void apply(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) const override {
    op_.apply(X, Y);
  }

 private:
  const Op& op_;
};

struct SvdResult {
  Eigen::MatrixXd U;      // n x d, orthonormal columns
  Eigen::VectorXd sigma;  // non-increasing, non-negative
  int d = 0;
};

struct SvdOptions {
  int oversample = 10;
  double tol = 1e-6;    // residual bound, relative to sigma_1
  bool strict = true;   // throw ConvergenceError when the bound is unmet
};

// Leading-d singular triplets of a symmetric operator by randomized block
// subspace iteration with Rayleigh-Ritz extraction. Singular values are
// absolute Ritz values reordered non-increasingly, so indefinite inputs get
// SVD semantics. `iters` bounds the number of A-applications; the loop stops
// early once every kept triplet satisfies ||A u - lambda u|| <= tol sigma_1.
// Sign convention: the largest-magnitude entry of each column of U is
// positive. Deterministic given (input, d, iters, seed) and thread count.
SvdResult truncated_svd(const SymmetricOperator& op, int d, int iters,
                        std::uint64_t seed, const SvdOptions& options = {});

struct EmbeddingMatrix {
  Eigen::MatrixXd rows;             // n x d
  std::vector<std::string> labels;  // optional, size n when present

  Eigen::Index n() const { return rows.rows(); }
  int dim() const { return static_cast<int>(rows.cols()); }
};

// W = U diag(sqrt(sigma)): row i is U_i scaled columnwise.
EmbeddingMatrix embeddings_from_svd(const SvdResult& svd);

// Header "n d", then "label v1 ... vd" with 9 significant digits; a missing
// label set falls back to 1-based row indices.
void save_embeddings(const EmbeddingMatrix& emb, const std::string& path);
EmbeddingMatrix load_embeddings(const std::string& path);

}  // namespace hypervec::spectral
