#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "hypervec/spectral.hpp"

namespace hypervec::eval {

struct SimilarityPair {
  std::string word1, word2;
  double score = 0.0;
};

struct SimilarityDataset {
  std::string name;
  std::vector<SimilarityPair> pairs;
};

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
};

struct TaggedCorpus {
  std::vector<TaggedSentence> sentences;
  std::vector<std::string> tagset;  // sorted unique tags
  std::size_t token_count() const;
};

struct PosClassifierConfig {
  int hidden_size = 128;
  double step_size = 0.1;
  int epochs = 5;
  int batch_size = 64;
  std::uint64_t seed = 0;
};

// Spearman rank correlation with average ranks for ties. Throws DataError
// when either list is constant (ranks undefined).
double spearman(std::span<const double> xs, std::span<const double> ys);

// Token -> row lookup over an embedding matrix.
class EmbeddingLookup {
 public:
  explicit EmbeddingLookup(const spectral::EmbeddingMatrix& emb);
  const spectral::EmbeddingMatrix& matrix() const { return *emb_; }
  // Row id for a token, lowercasing the query to match lowercase corpora.
  std::optional<Eigen::Index> row_of(const std::string& token) const;

 private:
  const spectral::EmbeddingMatrix* emb_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

struct SimilarityResult {
  double spearman = 0.0;
  double coverage = 0.0;  // fraction of pairs with both words in vocabulary
  std::size_t used = 0;
  std::size_t total = 0;
};

// Cosine similarity per in-vocabulary pair; pairs with any missing word are
// skipped and reported through coverage.
SimilarityResult evaluate_similarity(const spectral::EmbeddingMatrix& emb,
                                     const SimilarityDataset& ds);

// Concatenation [w_{t-2}; ...; w_{t+2}] with zero blocks for positions
// outside the sentence or words outside the vocabulary.
Eigen::VectorXd build_pos_features(const std::vector<std::string>& sentence,
                                   const EmbeddingLookup& emb, std::size_t t);

struct PosClassifier {
  Eigen::MatrixXd A1;  // hidden x 5d
  Eigen::VectorXd b1;
  Eigen::MatrixXd A2;  // tags x hidden
  Eigen::VectorXd b2;
  std::vector<std::string> tags;  // output order
  std::unordered_map<std::string, int> tag_index;

  // Softmax over A2 sigma(A1 x + b1) + b2.
  Eigen::VectorXd predict_proba(const Eigen::VectorXd& features) const;
  int predict(const Eigen::VectorXd& features) const;
};

// One logistic-sigmoid hidden layer, softmax output, cross-entropy loss,
// mini-batch gradient descent; deterministic given seed.
// Throws ConvergenceError on non-finite loss.
PosClassifier train_pos_classifier(const TaggedCorpus& train,
                                   const spectral::EmbeddingMatrix& emb,
                                   const PosClassifierConfig& cfg);

// Token-level accuracy on a held-out tagged corpus.
double evaluate_pos(const PosClassifier& clf, const TaggedCorpus& test,
                    const spectral::EmbeddingMatrix& emb);

enum class SimilarityFormat { Auto, Csv, Tab, Whitespace };

// "word1 word2 score" rows (delimiter per format, Auto sniffs), optional
// header line. Malformed lines raise DataError with the line number.
SimilarityDataset load_similarity_dataset(const std::string& path,
                                          SimilarityFormat format = SimilarityFormat::Auto,
                                          std::string name = "");

// "token POS chunk" lines with blank-line sentence separators; the chunk
// column is discarded.
TaggedCorpus load_conll2000(const std::string& path);

// "word/TAG" tokens, whitespace-separated, one sentence per line.
TaggedCorpus load_brown(const std::string& path);

// Sentence-level split with a seeded shuffle; first fraction goes to train.
std::pair<TaggedCorpus, TaggedCorpus> split_tagged_corpus(const TaggedCorpus& corpus,
                                                          double train_fraction,
                                                          std::uint64_t seed);

}  // namespace hypervec::eval
