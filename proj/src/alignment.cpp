#include "hypervec/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "hypervec/errors.hpp"
#include "hypervec/rng.hpp"

namespace hypervec::alignment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Polar factor U V^T of M; no rank check, callers that need one use
// procrustes() instead.
Eigen::MatrixXd polar_factor(const Eigen::MatrixXd& m) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

// ||X_i - Y_j||^2 for all pairs, clamped at zero against roundoff.
Eigen::MatrixXd pairwise_sq_dist(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  Eigen::MatrixXd cost = -2.0 * X * Y.transpose();
  cost.colwise() += X.rowwise().squaredNorm();
  cost.rowwise() += Y.rowwise().squaredNorm().transpose();
  return cost.cwiseMax(0.0);
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& pi) {
  double total = 0;
  for (int i = 0; i < static_cast<int>(pi.size()); ++i) total += cost(i, pi[i]);
  return total;
}

std::vector<Eigen::Index> sorted_by_norm(const Eigen::MatrixXd& X) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(X.rows()));
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd norms = X.rowwise().norm();
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (norms[a] != norms[b]) return norms[a] < norms[b];
    return a < b;
  });
  return order;
}

// Global bijection between the rows of xaq and xb: both sides sorted by row
// norm (which the rotation preserves), then exact matching over cosine costs
// within aligned blocks of the sorted order. perm[i] is the xb row for xaq
// row i.
std::vector<std::uint32_t> blocked_cosine_match(const Eigen::MatrixXd& xaq,
                                                const Eigen::MatrixXd& xb,
                                                Eigen::Index width) {
  const Eigen::Index n = xaq.rows();
  const int d = static_cast<int>(xaq.cols());
  const auto sa = sorted_by_norm(xaq);
  const auto sb = sorted_by_norm(xb);
  std::vector<std::uint32_t> perm(static_cast<std::size_t>(n), 0);
  for (Eigen::Index s = 0; s < n; s += width) {
    const Eigen::Index w = std::min(width, n - s);
    Eigen::MatrixXd A(w, d), B(w, d);
    for (Eigen::Index t = 0; t < w; ++t) {
      A.row(t) = xaq.row(sa[static_cast<std::size_t>(s + t)]);
      B.row(t) = xb.row(sb[static_cast<std::size_t>(s + t)]);
    }
    Eigen::VectorXd na = A.rowwise().norm().cwiseMax(1e-300);
    Eigen::VectorXd nb = B.rowwise().norm().cwiseMax(1e-300);
    Eigen::MatrixXd cos_cost =
        (1.0 - (na.cwiseInverse().asDiagonal() * (A * B.transpose()) *
                nb.cwiseInverse().asDiagonal())
                   .array())
            .matrix();
    const auto loc = solve_assignment_exact(cos_cost);
    for (Eigen::Index t = 0; t < w; ++t)
      perm[static_cast<std::size_t>(sa[static_cast<std::size_t>(s + t)])] =
          static_cast<std::uint32_t>(
              sb[static_cast<std::size_t>(s + loc[static_cast<std::size_t>(t)])]);
  }
  return perm;
}

}  // namespace

Eigen::MatrixXd procrustes(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("procrustes needs equally shaped inputs");
  const Eigen::MatrixXd m = X.transpose() * Y;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0 || s[s.size() - 1] < 1e-12 * s[0])
    throw DataError("cross-covariance is rank-deficient; rotation is not unique");
  return svd.matrixU() * svd.matrixV().transpose();
}

std::vector<int> solve_assignment_exact(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("cost matrix must be square");
  if (n == 0) return {};

  std::vector<double> c(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[static_cast<std::size_t>(i) * n + j] = cost(i, j);

  // Jonker-Volgenant: shortest augmenting paths with dual potentials.
  std::vector<double> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      const double* row = &c[static_cast<std::size_t>(i0 - 1) * n];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }

  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) out[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return out;
}

std::vector<int> solve_assignment_sinkhorn(const Eigen::MatrixXd& cost, double reg,
                                           int iters) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw std::invalid_argument("cost matrix must be square");
  if (!(reg > 0)) throw std::invalid_argument("regularization must be > 0");
  if (n == 0) return {};

  // Row/column offsets are absorbed by the scalings, so shifting each row
  // and column to a zero minimum costs nothing and prevents underflow.
  Eigen::MatrixXd shifted = cost;
  shifted.colwise() -= cost.rowwise().minCoeff();
  shifted.rowwise() -= shifted.colwise().minCoeff().eval();
  const Eigen::MatrixXd K = (-shifted / reg).array().exp();

  Eigen::VectorXd su = Eigen::VectorXd::Ones(n), sv = Eigen::VectorXd::Ones(n);
  for (int it = 0; it < iters; ++it) {
    su = (K * sv).cwiseMax(1e-300).cwiseInverse();
    sv = (K.transpose() * su).cwiseMax(1e-300).cwiseInverse();
  }
  const Eigen::MatrixXd plan = su.asDiagonal() * K * sv.asDiagonal();

  // Greedy rounding by plan mass, then exact repair of whatever is left.
  std::vector<std::pair<double, std::int64_t>> mass;
  mass.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mass.emplace_back(plan(i, j), static_cast<std::int64_t>(i) * n + j);
  std::sort(mass.begin(), mass.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  std::vector<int> out(static_cast<std::size_t>(n), -1);
  std::vector<char> col_taken(static_cast<std::size_t>(n), 0);
  int assigned = 0;
  for (const auto& [m, packed] : mass) {
    if (assigned == n) break;
    const int i = static_cast<int>(packed / n), j = static_cast<int>(packed % n);
    if (out[static_cast<std::size_t>(i)] >= 0 || col_taken[static_cast<std::size_t>(j)])
      continue;
    out[static_cast<std::size_t>(i)] = j;
    col_taken[static_cast<std::size_t>(j)] = 1;
    ++assigned;
  }
  if (assigned < n) {
    std::vector<int> rows, cols;
    for (int i = 0; i < n; ++i)
      if (out[static_cast<std::size_t>(i)] < 0) rows.push_back(i);
    for (int j = 0; j < n; ++j)
      if (!col_taken[static_cast<std::size_t>(j)]) cols.push_back(j);
    Eigen::MatrixXd sub(rows.size(), cols.size());
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b)
        sub(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            cost(rows[a], cols[b]);
    const auto repair = solve_assignment_exact(sub);
    for (std::size_t a = 0; a < rows.size(); ++a)
      out[static_cast<std::size_t>(rows[a])] =
          cols[static_cast<std::size_t>(repair[a])];
  }
  return out;
}

std::vector<int> solve_assignment(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                  double reg, int exact_threshold,
                                  int sinkhorn_iters) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw std::invalid_argument("assignment needs equally shaped inputs");
  const Eigen::MatrixXd cost = pairwise_sq_dist(X, Y);
  const int n = static_cast<int>(cost.rows());

  std::vector<int> pi;
  if (n <= exact_threshold) {
    pi = solve_assignment_exact(cost);
  } else {
    // The temperature tracks the data scale: normalized embeddings make the
    // raw squared distances tiny, so a fixed absolute reg would flatten the
    // kernel to uniform.
    const double scale = std::max(cost.mean(), 1e-12);
    pi = solve_assignment_sinkhorn(cost, reg * scale, sinkhorn_iters);
  }

  std::vector<int> identity(static_cast<std::size_t>(n));
  std::iota(identity.begin(), identity.end(), 0);
  if (assignment_cost(cost, identity) < assignment_cost(cost, pi)) return identity;
  return pi;
}

Eigen::MatrixXd normalized_for_alignment(const spectral::EmbeddingMatrix& emb) {
  Eigen::MatrixXd x = emb.rows;
  x.rowwise() -= x.colwise().mean();
  const double norm = x.norm();
  if (!(norm > 0)) throw DataError("embeddings collapse to their mean");
  return x / norm;
}

AlignmentResult align(const spectral::EmbeddingMatrix& wa,
                      const spectral::EmbeddingMatrix& wb,
                      const AlignmentConfig& cfg) {
  if (wa.n() != wb.n() || wa.dim() != wb.dim())
    throw std::invalid_argument("alignment needs equally shaped embedding sets");
  if (cfg.batch_size < 1 || cfg.epochs < 0)
    throw std::invalid_argument("bad alignment config");
  if (!(cfg.step_size > 0) || cfg.step_size > 1)
    throw std::invalid_argument("step size must be in (0, 1]");
  const Eigen::Index n = wa.n();
  const int d = wa.dim();
  const int batch = static_cast<int>(std::min<Eigen::Index>(cfg.batch_size, n));

  const Eigen::MatrixXd xa = normalized_for_alignment(wa);
  const Eigen::MatrixXd xb = normalized_for_alignment(wb);

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  const std::uint64_t shuffle_root = substream(cfg.seed, "align-epochs");
  auto shuffle = [&](std::uint64_t key) {
    SplitMix64 rng(key);
    for (std::size_t i = idx.size() - 1; i > 0; --i)
      std::swap(idx[i], idx[static_cast<std::size_t>(rng.below(i + 1))]);
  };
  auto gather = [&](const Eigen::MatrixXd& src, std::size_t off, int m) {
    Eigen::MatrixXd g(m, d);
    for (int t = 0; t < m; ++t) g.row(t) = src.row(idx[off + static_cast<std::size_t>(t)]);
    return g;
  };

  // Norm-matched Procrustes seeds the rotation: row norms are invariant
  // under any candidate Q, so pairing the norm-sorted orders is already a
  // meaningful correspondence (exact on noise-free planted instances), where
  // an identity-matched batch carries no signal at all.
  Eigen::MatrixXd M(d, d);
  {
    const auto sa = sorted_by_norm(xa);
    const auto sb = sorted_by_norm(xb);
    Eigen::MatrixXd A(n, d), B(n, d);
    for (Eigen::Index t = 0; t < n; ++t) {
      A.row(t) = xa.row(sa[static_cast<std::size_t>(t)]);
      B.row(t) = xb.row(sb[static_cast<std::size_t>(t)]);
    }
    M = A.transpose() * B;
  }
  Eigen::MatrixXd Q = polar_factor(M);

  AlignmentResult result;
  const double beta = cfg.step_size;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(mix64(shuffle_root, static_cast<std::uint64_t>(epoch)));
    double epoch_loss = 0;
    int batches = 0;
    for (std::size_t off = 0; off < idx.size(); off += static_cast<std::size_t>(batch)) {
      const int m = static_cast<int>(
          std::min<std::size_t>(static_cast<std::size_t>(batch), idx.size() - off));
      const Eigen::MatrixXd A = gather(xa, off, m);
      const Eigen::MatrixXd B = gather(xb, off, m);
      const Eigen::MatrixXd AQ = A * Q;
      const auto pi = solve_assignment(AQ, B, cfg.entropic_reg, cfg.exact_threshold,
                                       cfg.sinkhorn_iters);
      Eigen::MatrixXd B_pi(m, d);
      for (int t = 0; t < m; ++t) B_pi.row(t) = B.row(pi[static_cast<std::size_t>(t)]);
      epoch_loss += (AQ - B_pi).squaredNorm();
      ++batches;
      M = (1.0 - beta) * M + beta * (A.transpose() * B_pi);
      Q = polar_factor(M);
    }
    result.history.push_back(epoch_loss / std::max(batches, 1));
  }

  // Full-data polish: alternate an exact blocked matching on a norm-strided
  // subsample with a Procrustes refit, accepting only improving steps. The
  // stochastic loop lands near the basin; this walks to its floor.
  const Eigen::Index width = std::max(1, cfg.final_block);
  const Eigen::Index sub = std::min<Eigen::Index>(n, 4096);
  struct PolishState {
    double loss;
    Eigen::MatrixXd A, B_pi;  // matched subsample pairs
  };
  auto polish_state = [&](const Eigen::MatrixXd& cand) {
    const Eigen::MatrixXd xaq = xa * cand;
    const auto sa = sorted_by_norm(xaq);
    const auto sb = sorted_by_norm(xb);
    PolishState st{0.0, Eigen::MatrixXd(sub, d), Eigen::MatrixXd(sub, d)};
    for (Eigen::Index k = 0; k < sub; ++k) {
      const auto pick = static_cast<std::size_t>(k * n / sub);
      st.A.row(k) = xa.row(sa[pick]);
      st.B_pi.row(k) = xb.row(sb[pick]);
    }
    const auto pi = blocked_cosine_match(st.A * cand, st.B_pi, width);
    Eigen::MatrixXd matched(sub, d);
    for (Eigen::Index k = 0; k < sub; ++k)
      matched.row(k) = st.B_pi.row(pi[static_cast<std::size_t>(k)]);
    st.B_pi = std::move(matched);
    st.loss = (st.A * cand - st.B_pi).squaredNorm();
    return st;
  };
  PolishState cur = polish_state(Q);
  for (int round = 0; round < 10; ++round) {
    const Eigen::MatrixXd cand = polar_factor(cur.A.transpose() * cur.B_pi);
    PolishState next = polish_state(cand);
    if (!(next.loss < cur.loss - 1e-12)) break;
    Q = cand;
    cur = std::move(next);
  }

  // Final bijection over all rows under the polished rotation.
  const Eigen::MatrixXd xaq = xa * Q;
  result.perm = blocked_cosine_match(xaq, xb, width);

  Eigen::MatrixXd diff(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    diff.row(i) = xaq.row(i) - xb.row(result.perm[static_cast<std::size_t>(i)]);
  result.loss = diff.squaredNorm();
  result.Q = Q;
  result.labels = wa.labels;
  return result;
}

spectral::EmbeddingMatrix apply_alignment(const spectral::EmbeddingMatrix& wb,
                                          const AlignmentResult& result) {
  if (static_cast<std::size_t>(wb.n()) != result.perm.size())
    throw std::invalid_argument("permutation does not match embedding count");
  spectral::EmbeddingMatrix out;
  out.rows.resize(wb.n(), wb.dim());
  for (Eigen::Index i = 0; i < wb.n(); ++i)
    out.rows.row(i) = wb.rows.row(result.perm[static_cast<std::size_t>(i)]);
  out.labels = result.labels;
  return out;
}

spectral::EmbeddingMatrix random_baseline(Eigen::Index n, int d, std::uint64_t seed) {
  spectral::EmbeddingMatrix emb;
  emb.rows.resize(n, d);
  NormalSampler gauss(substream(seed, "random-baseline"));
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) emb.rows(i, j) = gauss.next();
  return emb;
}

void save_alignment(const AlignmentResult& result, const std::string& q_path,
                    const std::string& perm_path, const std::string& history_path) {
  {
    std::ofstream out(q_path);
    if (!out) throw DataError("cannot write rotation: " + q_path);
    out << result.Q.rows() << '\n';
    char buf[48];
    for (Eigen::Index i = 0; i < result.Q.rows(); ++i) {
      for (Eigen::Index j = 0; j < result.Q.cols(); ++j) {
        std::snprintf(buf, sizeof buf, j ? " %.17g" : "%.17g", result.Q(i, j));
        out << buf;
      }
      out << '\n';
    }
    if (!out) throw DataError("failed writing rotation: " + q_path);
  }
  {
    std::ofstream out(perm_path);
    if (!out) throw DataError("cannot write permutation: " + perm_path);
    for (std::size_t i = 0; i < result.perm.size(); ++i)
      out << (i + 1) << '\t' << (result.perm[i] + 1) << '\n';
    if (!out) throw DataError("failed writing permutation: " + perm_path);
  }
  {
    std::ofstream out(history_path);
    if (!out) throw DataError("cannot write loss history: " + history_path);
    out << "epoch,loss\n";
    char buf[48];
    for (std::size_t e = 0; e < result.history.size(); ++e) {
      std::snprintf(buf, sizeof buf, "%.17g", result.history[e]);
      out << (e + 1) << ',' << buf << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.17g", result.loss);
    out << "final," << buf << '\n';
    if (!out) throw DataError("failed writing loss history: " + history_path);
  }
}

AlignmentResult load_alignment(const std::string& q_path, const std::string& perm_path,
                               const std::string& history_path) {
  AlignmentResult result;
  {
    std::ifstream in(q_path);
    if (!in) throw DataError("cannot open rotation: " + q_path);
    Eigen::Index d = 0;
    if (!(in >> d) || d < 1) throw DataError(q_path + ": bad dimension header");
    result.Q.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        if (!(in >> result.Q(i, j))) throw DataError(q_path + ": truncated rotation");
  }
  {
    std::ifstream in(perm_path);
    if (!in) throw DataError("cannot open permutation: " + perm_path);
    std::string line;
    std::size_t expect = 1;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::size_t i = 0, target = 0;
      if (!(ls >> i >> target) || i != expect || target < 1)
        throw DataError(perm_path + ": bad row " + std::to_string(expect));
      result.perm.push_back(static_cast<std::uint32_t>(target - 1));
      ++expect;
    }
  }
  {
    std::ifstream in(history_path);
    if (!in) throw DataError("cannot open loss history: " + history_path);
    std::string line;
    if (!std::getline(in, line) || line != "epoch,loss")
      throw DataError(history_path + ": bad header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw DataError(history_path + ": bad row");
      const double value = std::stod(line.substr(comma + 1));
      if (line.compare(0, comma, "final") == 0)
        result.loss = value;
      else
        result.history.push_back(value);
    }
  }
  return result;
}

}  // namespace hypervec::alignment
