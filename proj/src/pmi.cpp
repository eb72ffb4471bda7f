#include "hypervec/pmi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hypervec/errors.hpp"

namespace hypervec::pmi {

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::Pmi: return "pmi";
    case ScoreKind::Spmi: return "spmi";
    case ScoreKind::SigmaSpmi: return "sigmaspmi";
  }
  throw std::logic_error("unreachable score kind");
}

ScoreKind score_kind_from_string(const std::string& s) {
  if (s == "pmi") return ScoreKind::Pmi;
  if (s == "spmi") return ScoreKind::Spmi;
  if (s == "sigmaspmi") return ScoreKind::SigmaSpmi;
  throw DataError("unknown score kind: " + s);
}

SparseScoreMatrix pmi_matrix(const corpus::CooccurrenceCounts& counts) {
  if (counts.total == 0) throw DataError("co-occurrence counts are empty");
  const auto row_sums = counts.row_sums();
  std::vector<double> log_rs(row_sums.size());
  for (std::size_t i = 0; i < row_sums.size(); ++i)
    log_rs[i] = row_sums[i] > 0 ? std::log(static_cast<double>(row_sums[i])) : 0.0;
  const double log_total = std::log(static_cast<double>(counts.total));

  SparseScoreMatrix m;
  m.n = counts.n;
  m.kind = ScoreKind::Pmi;
  m.keys = counts.keys;
  m.values.resize(counts.values.size());
  for (std::size_t s = 0; s < counts.keys.size(); ++s) {
    const std::uint32_t i = static_cast<std::uint32_t>(counts.keys[s] >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(counts.keys[s]);
    m.values[s] = std::log(static_cast<double>(counts.values[s])) + log_total -
                  log_rs[i] - log_rs[j];
  }
  return m;
}

SparseScoreMatrix shift(SparseScoreMatrix matrix, double k) {
  if (k <= 0) throw std::invalid_argument("shift k must be > 0");
  if (matrix.kind != ScoreKind::Pmi)
    throw std::invalid_argument("shift expects a plain PMI matrix");
  const double log_k = std::log(k);
  for (double& v : matrix.values) v -= log_k;
  matrix.kind = ScoreKind::Spmi;
  matrix.shift_k = k;
  return matrix;
}

SparseScoreMatrix sigma_spmi(SparseScoreMatrix matrix) {
  if (matrix.kind != ScoreKind::Spmi)
    throw std::invalid_argument("sigma_spmi expects a shifted PMI matrix");
  for (double& v : matrix.values) v = 1.0 / (1.0 + std::exp(-v));
  matrix.kind = ScoreKind::SigmaSpmi;
  return matrix;
}

std::vector<HistogramRow> pmi_histogram(const SparseScoreMatrix& matrix, int bins) {
  return make_histogram(matrix.values, bins);
}

void save(const SparseScoreMatrix& matrix, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write score matrix: " + path);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", matrix.shift_k);
  out << to_string(matrix.kind) << ' ' << matrix.n << ' ' << buf << '\n';
  for (std::size_t s = 0; s < matrix.keys.size(); ++s) {
    const std::uint32_t i = static_cast<std::uint32_t>(matrix.keys[s] >> 32);
    const std::uint32_t j = static_cast<std::uint32_t>(matrix.keys[s]);
    std::snprintf(buf, sizeof buf, "%.17g", matrix.values[s]);
    out << (i + 1) << '\t' << (j + 1) << '\t' << buf << '\n';
  }
  if (!out) throw DataError("failed writing score matrix: " + path);
}

SparseScoreMatrix load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open score matrix: " + path);
  std::string header;
  if (!std::getline(in, header)) throw DataError("empty score matrix file: " + path);
  std::istringstream hs(header);
  std::string kind_str;
  SparseScoreMatrix m;
  if (!(hs >> kind_str >> m.n >> m.shift_k))
    throw DataError(path + ": bad header, expected \"kind n shift_k\"");
  m.kind = score_kind_from_string(kind_str);

  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::uint64_t i = 0, j = 0;
    double v = 0;
    if (!(ls >> i >> j >> v) || i < 1 || j < 1 || i > j || j > m.n)
      throw DataError(path + ":" + std::to_string(line_no) + ": bad triple");
    m.keys.push_back((static_cast<std::uint64_t>(i - 1) << 32) | (j - 1));
    m.values.push_back(v);
  }
  if (!std::is_sorted(m.keys.begin(), m.keys.end()))
    throw DataError(path + ": triples out of order");
  return m;
}

}  // namespace hypervec::pmi
