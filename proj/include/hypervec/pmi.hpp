#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hypervec/corpus.hpp"
#include "hypervec/histogram.hpp"

namespace hypervec::pmi {

enum class ScoreKind { Pmi, Spmi, SigmaSpmi };

std::string to_string(ScoreKind kind);
ScoreKind score_kind_from_string(const std::string& s);

// Sparse symmetric score matrix over the pairs with #(i,j) > 0. Unobserved
// pairs are missing, not zero: PMI there is -inf and sigma maps it to an
// exact 0, which keeps the sparsity pattern equal to the count support.
struct SparseScoreMatrix {
  std::uint32_t n = 0;
  ScoreKind kind = ScoreKind::Pmi;
  double shift_k = 1.0;
  std::vector<std::uint64_t> keys;  // (i << 32) | j, i <= j, sorted
  std::vector<double> values;

  std::size_t stored_pairs() const { return keys.size(); }
};

// PMI(i,j) = log p(i,j) - log p(i) - log p(j) with p(i,j) = #(i,j)/total and
// p(i) = rowsum_i/total, computed in log space.
SparseScoreMatrix pmi_matrix(const corpus::CooccurrenceCounts& counts);

// Subtracts log k from every stored value; kind becomes Spmi.
SparseScoreMatrix shift(SparseScoreMatrix matrix, double k);

// Applies the logistic sigmoid to every stored value; kind becomes SigmaSpmi.
SparseScoreMatrix sigma_spmi(SparseScoreMatrix matrix);

// Equal-width bin counts over the stored values.
std::vector<HistogramRow> pmi_histogram(const SparseScoreMatrix& matrix, int bins);

// Header "kind n shift_k", then "i<TAB>j<TAB>value" triples (1-based, i <= j).
void save(const SparseScoreMatrix& matrix, const std::string& path);
SparseScoreMatrix load(const std::string& path);

}  // namespace hypervec::pmi
