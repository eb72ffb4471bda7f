#include "hypervec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "hypervec/errors.hpp"
#include "hypervec/parallel.hpp"
#include "hypervec/rng.hpp"

namespace hypervec::spectral {

SparseSymmetric SparseSymmetric::from_scores(const pmi::SparseScoreMatrix& m) {
  SparseSymmetric s;
  s.n_ = m.n;
  std::vector<std::int64_t> counts(m.n + 1, 0);
  for (std::uint64_t key : m.keys) {
    const std::uint32_t i = static_cast<std::uint32_t>(key >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(key);
    ++counts[i + 1];
    if (i != j) ++counts[j + 1];
  }
  s.row_ptr_.resize(m.n + 1);
  std::partial_sum(counts.begin(), counts.end(), s.row_ptr_.begin());
  s.col_.resize(static_cast<std::size_t>(s.row_ptr_.back()));
  s.val_.resize(s.col_.size());

  // Keys are (i, j)-sorted, so each row fills with ascending columns.
  std::vector<std::int64_t> cursor(s.row_ptr_.begin(), s.row_ptr_.end() - 1);
  for (std::size_t t = 0; t < m.keys.size(); ++t) {
    const std::uint32_t i = static_cast<std::uint32_t>(m.keys[t] >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(m.keys[t]);
    s.col_[static_cast<std::size_t>(cursor[i])] = j;
    s.val_[static_cast<std::size_t>(cursor[i]++)] = m.values[t];
    if (i != j) {
      s.col_[static_cast<std::size_t>(cursor[j])] = i;
      s.val_[static_cast<std::size_t>(cursor[j]++)] = m.values[t];
    }
  }
  return s;
}

void SparseSymmetric::apply(const Eigen::MatrixXd& X, Eigen::MatrixXd& Y) const {
  if (X.rows() != n_) throw std::invalid_argument("operand row count mismatch");
  Y.resize(n_, X.cols());
  // Rows are independent; each accumulates in CSR order, so the result does
  // not depend on how rows are distributed over workers.
  parallel_chunks(0, n_, 1024, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t r = lo; r < hi; ++r) {
      Y.row(r).setZero();
      for (std::int64_t t = row_ptr_[static_cast<std::size_t>(r)];
           t < row_ptr_[static_cast<std::size_t>(r) + 1]; ++t) {
        Y.row(r) += val_[static_cast<std::size_t>(t)] *
                    X.row(col_[static_cast<std::size_t>(t)]);
      }
    }
  });
}

SvdResult truncated_svd(const SymmetricOperator& op, int d, int iters,
                        std::uint64_t seed, const SvdOptions& options) {
  const Eigen::Index n = op.dim();
  if (d < 1 || d > n) throw std::invalid_argument("svd rank must be in [1, dim]");
  if (iters < 1) throw std::invalid_argument("svd needs at least one iteration");
  const Eigen::Index l = std::min<Eigen::Index>(n, d + options.oversample);

  NormalSampler gauss(substream(seed, "svd-gauss"));
  Eigen::MatrixXd Q(n, l);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < l; ++j) Q(i, j) = gauss.next();
  Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Q).householderQ() *
      Eigen::MatrixXd::Identity(n, l);

  Eigen::MatrixXd Z(n, l);
  Eigen::VectorXd ritz(l);
  Eigen::MatrixXd V(l, l);
  std::vector<int> order(static_cast<std::size_t>(l));
  bool converged = false;

  for (int it = 0; it < iters; ++it) {
    op.apply(Q, Z);
    Eigen::MatrixXd T = Q.transpose() * Z;
    T = 0.5 * (T + T.transpose()).eval();
    const Eigen::MatrixXd S2 = Z.transpose() * Z;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
    if (eig.info() != Eigen::Success)
      throw ConvergenceError("Rayleigh-Ritz eigensolve failed");
    ritz = eig.eigenvalues();
    V = eig.eigenvectors();

    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return std::abs(ritz[a]) > std::abs(ritz[b]);
    });

    // ||A u - lambda u||^2 = ||Z v||^2 - lambda^2 for unit Ritz pairs.
    const double sigma1 = std::abs(ritz[order[0]]);
    converged = true;
    for (int k = 0; k < d && converged; ++k) {
      const auto v = V.col(order[static_cast<std::size_t>(k)]);
      const double lambda = ritz[order[static_cast<std::size_t>(k)]];
      const double res2 = std::max(0.0, v.dot(S2 * v) - lambda * lambda);
      converged = std::sqrt(res2) <= options.tol * sigma1;
    }
    if (converged || it == iters - 1) break;
    Q = Eigen::HouseholderQR<Eigen::MatrixXd>(Z).householderQ() *
        Eigen::MatrixXd::Identity(n, l);
  }
  if (!converged && options.strict)
    throw ConvergenceError("subspace iteration missed the residual bound");

  SvdResult out;
  out.d = d;
  out.sigma.resize(d);
  Eigen::MatrixXd V_kept(l, d);
  for (int k = 0; k < d; ++k) {
    out.sigma[k] = std::abs(ritz[order[static_cast<std::size_t>(k)]]);
    V_kept.col(k) = V.col(order[static_cast<std::size_t>(k)]);
  }
  out.U = Q * V_kept;
  for (int k = 0; k < d; ++k) {
    Eigen::Index arg = 0;
    out.U.col(k).cwiseAbs().maxCoeff(&arg);
    if (out.U(arg, k) < 0) out.U.col(k) = -out.U.col(k);
  }
  return out;
}

EmbeddingMatrix embeddings_from_svd(const SvdResult& svd) {
  EmbeddingMatrix emb;
  emb.rows = svd.U * svd.sigma.cwiseSqrt().asDiagonal();
  return emb;
}

void save_embeddings(const EmbeddingMatrix& emb, const std::string& path) {
  if (!emb.labels.empty() &&
      emb.labels.size() != static_cast<std::size_t>(emb.n()))
    throw std::invalid_argument("label count does not match row count");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write embeddings: " + path);
  out << emb.n() << ' ' << emb.dim() << '\n';
  char buf[48];
  for (Eigen::Index i = 0; i < emb.n(); ++i) {
    if (emb.labels.empty())
      out << (i + 1);
    else
      out << emb.labels[static_cast<std::size_t>(i)];
    for (int j = 0; j < emb.dim(); ++j) {
      std::snprintf(buf, sizeof buf, " %.9g", emb.rows(i, j));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing embeddings: " + path);
}

EmbeddingMatrix load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings: " + path);
  Eigen::Index n = 0;
  int d = 0;
  if (!(in >> n >> d) || n < 1 || d < 1)
    throw DataError(path + ": bad header, expected \"n d\"");
  EmbeddingMatrix emb;
  emb.rows.resize(n, d);
  emb.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> emb.labels[static_cast<std::size_t>(i)]))
      throw DataError(path + ": truncated at row " + std::to_string(i + 1));
    for (int j = 0; j < d; ++j) {
      if (!(in >> emb.rows(i, j)))
        throw DataError(path + ": truncated at row " + std::to_string(i + 1));
    }
  }
  return emb;
}

}  // namespace hypervec::spectral
