#include "hypervec/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "hypervec/errors.hpp"
#include "hypervec/rng.hpp"

namespace hypervec::eval {

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<double> average_ranks(std::span<const double> xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n);
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s;
    while (e < n && xs[order[e]] == xs[order[s]]) ++e;
    const double mid = 0.5 * (s + e - 1) + 1.0;  // 1-based average rank
    for (std::size_t t = s; t < e; ++t) ranks[order[t]] = mid;
    s = e;
  }
  return ranks;
}

void finish_sentence(TaggedCorpus& corpus, TaggedSentence& sent) {
  if (!sent.tokens.empty()) corpus.sentences.push_back(std::move(sent));
  sent = TaggedSentence{};
}

void collect_tagset(TaggedCorpus& corpus) {
  std::set<std::string> tags;
  for (const auto& sent : corpus.sentences)
    tags.insert(sent.tags.begin(), sent.tags.end());
  corpus.tagset.assign(tags.begin(), tags.end());
}

}  // namespace

std::size_t TaggedCorpus::token_count() const {
  std::size_t total = 0;
  for (const auto& sent : sentences) total += sent.tokens.size();
  return total;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("spearman needs equally sized lists");
  if (xs.size() < 2) throw DataError("spearman needs at least two observations");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mean = (n + 1) / 2;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = rx[i] - mean, dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 || syy == 0) throw DataError("spearman is undefined for constant lists");
  return sxy / std::sqrt(sxx * syy);
}

EmbeddingLookup::EmbeddingLookup(const spectral::EmbeddingMatrix& emb) : emb_(&emb) {
  if (emb.labels.size() != static_cast<std::size_t>(emb.n()))
    throw std::invalid_argument("embedding lookup needs labeled rows");
  index_.reserve(emb.labels.size());
  for (std::size_t i = 0; i < emb.labels.size(); ++i)
    index_.emplace(emb.labels[i], static_cast<Eigen::Index>(i));
}

std::optional<Eigen::Index> EmbeddingLookup::row_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) it = index_.find(lowercase(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SimilarityResult evaluate_similarity(const spectral::EmbeddingMatrix& emb,
                                     const SimilarityDataset& ds) {
  const EmbeddingLookup lookup(emb);
  std::vector<double> predicted, gold;
  for (const auto& pair : ds.pairs) {
    const auto a = lookup.row_of(pair.word1);
    const auto b = lookup.row_of(pair.word2);
    if (!a || !b) continue;
    const auto va = emb.rows.row(*a), vb = emb.rows.row(*b);
    const double na = va.norm(), nb = vb.norm();
    predicted.push_back(na > 0 && nb > 0 ? va.dot(vb) / (na * nb) : 0.0);
    gold.push_back(pair.score);
  }
  SimilarityResult result;
  result.total = ds.pairs.size();
  result.used = predicted.size();
  result.coverage = result.total == 0
                        ? 0.0
                        : static_cast<double>(result.used) / result.total;
  if (result.used < 2)
    throw DataError("similarity evaluation covers fewer than two pairs");
  result.spearman = spearman(predicted, gold);
  return result;
}

Eigen::VectorXd build_pos_features(const std::vector<std::string>& sentence,
                                   const EmbeddingLookup& emb, std::size_t t) {
  const int d = emb.matrix().dim();
  Eigen::VectorXd features = Eigen::VectorXd::Zero(5 * d);
  for (int off = -2; off <= 2; ++off) {
    const std::int64_t p = static_cast<std::int64_t>(t) + off;
    if (p < 0 || p >= static_cast<std::int64_t>(sentence.size())) continue;
    const auto row = emb.row_of(sentence[static_cast<std::size_t>(p)]);
    if (!row) continue;
    features.segment(static_cast<Eigen::Index>(off + 2) * d, d) =
        emb.matrix().rows.row(*row);
  }
  return features;
}

Eigen::VectorXd PosClassifier::predict_proba(const Eigen::VectorXd& features) const {
  Eigen::VectorXd h = A1 * features + b1;
  for (Eigen::Index i = 0; i < h.size(); ++i) h[i] = 1.0 / (1.0 + std::exp(-h[i]));
  Eigen::VectorXd logits = A2 * h + b2;
  const double top = logits.maxCoeff();
  Eigen::VectorXd probs = (logits.array() - top).exp();
  return probs / probs.sum();
}

int PosClassifier::predict(const Eigen::VectorXd& features) const {
  Eigen::Index arg = 0;
  predict_proba(features).maxCoeff(&arg);
  return static_cast<int>(arg);
}

PosClassifier train_pos_classifier(const TaggedCorpus& train,
                                   const spectral::EmbeddingMatrix& emb,
                                   const PosClassifierConfig& cfg) {
  if (cfg.hidden_size < 1 || cfg.epochs < 1 || cfg.batch_size < 1 ||
      !(cfg.step_size > 0))
    throw std::invalid_argument("bad classifier config");
  if (train.tagset.empty()) throw DataError("training corpus has no tags");

  const EmbeddingLookup lookup(emb);
  const int d = emb.dim();
  const int in_dim = 5 * d;
  const int tags = static_cast<int>(train.tagset.size());

  PosClassifier clf;
  clf.tags = train.tagset;
  for (int t = 0; t < tags; ++t) clf.tag_index.emplace(clf.tags[static_cast<std::size_t>(t)], t);

  NormalSampler gauss(substream(cfg.seed, "pos-init"));
  const double scale1 = 1.0 / std::sqrt(static_cast<double>(in_dim));
  const double scale2 = 1.0 / std::sqrt(static_cast<double>(cfg.hidden_size));
  clf.A1.resize(cfg.hidden_size, in_dim);
  for (Eigen::Index i = 0; i < clf.A1.rows(); ++i)
    for (Eigen::Index j = 0; j < clf.A1.cols(); ++j) clf.A1(i, j) = scale1 * gauss.next();
  clf.b1 = Eigen::VectorXd::Zero(cfg.hidden_size);
  clf.A2.resize(tags, cfg.hidden_size);
  for (Eigen::Index i = 0; i < clf.A2.rows(); ++i)
    for (Eigen::Index j = 0; j < clf.A2.cols(); ++j) clf.A2(i, j) = scale2 * gauss.next();
  clf.b2 = Eigen::VectorXd::Zero(tags);

  // Flattened (sentence, position) examples.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> examples;
  for (std::uint32_t s = 0; s < train.sentences.size(); ++s)
    for (std::uint32_t t = 0; t < train.sentences[s].tokens.size(); ++t)
      examples.emplace_back(s, t);
  if (examples.empty()) throw DataError("training corpus has no tokens");

  const std::uint64_t shuffle_root = substream(cfg.seed, "pos-epochs");
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    SplitMix64 rng(mix64(shuffle_root, static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = examples.size() - 1; i > 0; --i)
      std::swap(examples[i], examples[static_cast<std::size_t>(rng.below(i + 1))]);

    double epoch_loss = 0;
    for (std::size_t off = 0; off < examples.size();
         off += static_cast<std::size_t>(cfg.batch_size)) {
      const int m = static_cast<int>(std::min<std::size_t>(
          static_cast<std::size_t>(cfg.batch_size), examples.size() - off));
      Eigen::MatrixXd X(in_dim, m);
      std::vector<int> y(static_cast<std::size_t>(m));
      for (int c = 0; c < m; ++c) {
        const auto [s, t] = examples[off + static_cast<std::size_t>(c)];
        const auto& sent = train.sentences[s];
        X.col(c) = build_pos_features(sent.tokens, lookup, t);
        const auto it = clf.tag_index.find(sent.tags[t]);
        y[static_cast<std::size_t>(c)] = it->second;
      }

      Eigen::MatrixXd H = (clf.A1 * X).colwise() + clf.b1;
      H = (1.0 + (-H.array()).exp()).inverse().matrix();
      Eigen::MatrixXd logits = (clf.A2 * H).colwise() + clf.b2;
      Eigen::MatrixXd P = (logits.rowwise() - logits.colwise().maxCoeff()).array().exp();
      P.array().rowwise() /= P.colwise().sum().array();

      for (int c = 0; c < m; ++c)
        epoch_loss -= std::log(std::max(P(y[static_cast<std::size_t>(c)], c), 1e-300));

      // dL/dlogits = (P - onehot) / m
      Eigen::MatrixXd dlogits = P;
      for (int c = 0; c < m; ++c) dlogits(y[static_cast<std::size_t>(c)], c) -= 1.0;
      dlogits /= m;
      const Eigen::MatrixXd dH = clf.A2.transpose() * dlogits;
      const Eigen::MatrixXd dZ =
          (dH.array() * H.array() * (1.0 - H.array())).matrix();

      clf.A2 -= cfg.step_size * (dlogits * H.transpose());
      clf.b2 -= cfg.step_size * dlogits.rowwise().sum();
      clf.A1 -= cfg.step_size * (dZ * X.transpose());
      clf.b1 -= cfg.step_size * dZ.rowwise().sum();
    }
    if (!std::isfinite(epoch_loss))
      throw ConvergenceError("classifier loss diverged (non-finite)");
  }
  return clf;
}

double evaluate_pos(const PosClassifier& clf, const TaggedCorpus& test,
                    const spectral::EmbeddingMatrix& emb) {
  const EmbeddingLookup lookup(emb);
  std::size_t correct = 0, total = 0;
  for (const auto& sent : test.sentences) {
    for (std::size_t t = 0; t < sent.tokens.size(); ++t) {
      const auto it = clf.tag_index.find(sent.tags[t]);
      if (it == clf.tag_index.end()) {
        ++total;  // unseen tag can never be right
        continue;
      }
      const int predicted = clf.predict(build_pos_features(sent.tokens, lookup, t));
      correct += predicted == it->second;
      ++total;
    }
  }
  if (total == 0) throw DataError("test corpus has no tokens");
  return static_cast<double>(correct) / static_cast<double>(total);
}

SimilarityDataset load_similarity_dataset(const std::string& path,
                                          SimilarityFormat format, std::string name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open similarity dataset: " + path);
  SimilarityDataset ds;
  ds.name = name.empty() ? path : std::move(name);

  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    SimilarityFormat fmt = format;
    if (fmt == SimilarityFormat::Auto)
      fmt = line.find('\t') != std::string::npos ? SimilarityFormat::Tab
            : line.find(',') != std::string::npos ? SimilarityFormat::Csv
                                                  : SimilarityFormat::Whitespace;
    std::vector<std::string> fields;
    if (fmt == SimilarityFormat::Whitespace) {
      std::istringstream ls(line);
      std::string f;
      while (ls >> f) fields.push_back(f);
    } else {
      const char delim = fmt == SimilarityFormat::Csv ? ',' : '\t';
      std::string f;
      std::istringstream ls(line);
      while (std::getline(ls, f, delim)) fields.push_back(f);
    }
    if (fields.size() < 3)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected \"word1 word2 score\"");
    try {
      std::size_t used = 0;
      const double score = std::stod(fields[2], &used);
      if (used != fields[2].size()) throw std::invalid_argument("trailing junk");
      ds.pairs.push_back({fields[0], fields[1], score});
    } catch (const std::exception&) {
      if (first_content) {  // tolerated header row
        first_content = false;
        continue;
      }
      throw DataError(path + ":" + std::to_string(line_no) + ": bad score \"" +
                      fields[2] + "\"");
    }
    first_content = false;
  }
  if (ds.pairs.empty()) throw DataError("similarity dataset is empty: " + path);
  return ds;
}

TaggedCorpus load_conll2000(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tagged corpus: " + path);
  TaggedCorpus corpus;
  TaggedSentence sent;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish_sentence(corpus, sent);
      continue;
    }
    std::istringstream ls(line);
    std::string token, tag;
    if (!(ls >> token >> tag))
      throw DataError(path + ":" + std::to_string(line_no) + ": expected \"token POS ...\"");
    sent.tokens.push_back(token);
    sent.tags.push_back(tag);
  }
  finish_sentence(corpus, sent);
  if (corpus.sentences.empty()) throw DataError("tagged corpus is empty: " + path);
  collect_tagset(corpus);
  return corpus;
}

TaggedCorpus load_brown(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tagged corpus: " + path);
  TaggedCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    TaggedSentence sent;
    std::istringstream ls(line);
    std::string item;
    while (ls >> item) {
      const auto slash = item.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == item.size())
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": expected \"word/TAG\", got \"" + item + "\"");
      sent.tokens.push_back(item.substr(0, slash));
      sent.tags.push_back(item.substr(slash + 1));
    }
    if (!sent.tokens.empty()) corpus.sentences.push_back(std::move(sent));
  }
  if (corpus.sentences.empty()) throw DataError("tagged corpus is empty: " + path);
  collect_tagset(corpus);
  return corpus;
}

std::pair<TaggedCorpus, TaggedCorpus> split_tagged_corpus(const TaggedCorpus& corpus,
                                                          double train_fraction,
                                                          std::uint64_t seed) {
  if (!(train_fraction > 0) || !(train_fraction < 1))
    throw std::invalid_argument("train fraction must be in (0, 1)");
  std::vector<std::size_t> order(corpus.sentences.size());
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(substream(seed, "corpus-split"));
  for (std::size_t i = order.size() - 1; i > 0; --i)
    std::swap(order[i], order[static_cast<std::size_t>(rng.below(i + 1))]);

  const std::size_t cut = std::max<std::size_t>(
      1, static_cast<std::size_t>(train_fraction * order.size()));
  if (cut >= order.size())
    throw DataError("split leaves an empty test set");
  std::pair<TaggedCorpus, TaggedCorpus> out;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < cut ? out.first : out.second).sentences.push_back(corpus.sentences[order[i]]);
  collect_tagset(out.first);
  collect_tagset(out.second);
  return out;
}

}  // namespace hypervec::eval
