#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hypervec {

// Pipeline configuration, parsed from "key = value" lines. Unknown keys are
// rejected so typos fail loudly instead of silently using a default.
struct PipelineConfig {
  std::string corpus_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  // corpus / matrix construction (defaults match the published benchmark runs)
  std::uint64_t min_count = 5;
  int window = 2;
  double subsample = 1e-5;
  int dim = 200;
  double shift_k = 5.0;

  // truncated SVD
  int svd_iters = 100;
  int svd_oversample = 10;
  double svd_tol = 1e-6;
  bool svd_strict = true;
  std::string svd_source = "sigmaspmi";  // pmi | sigmaspmi

  // random hyperbolic graph
  std::uint32_t rhg_n = 0;  // 0: use vocabulary size
  double rhg_kbar = 10.0;
  double rhg_gamma = 2.5;
  bool rhg_realize_edges = true;

  // alignment
  int align_batch = 1024;
  int align_epochs = 30;
  double align_step = 0.5;
  double align_reg = 0.05;

  // SGNS baseline
  int sgns_negatives = 5;
  int sgns_epochs = 5;
  double sgns_step = 0.025;
  int sgns_threads = 1;

  // POS classifier
  int pos_hidden = 128;
  int pos_epochs = 5;
  double pos_step = 0.1;
  double brown_train_fraction = 0.8;

  // figure emission
  int fig_bins = 200;
  std::uint64_t fig_rx_samples = 1000000;

  // evaluation inputs
  std::string eval_ws353, eval_men, eval_mturk;
  std::string eval_conll_train, eval_conll_test, eval_brown;
  std::string eval_embeddings;  // embeddings file for eval-sim / eval-pos
  std::string eval_method;      // row label for the results tables
};

// Parse a config file; overrides are extra "key=value" pairs (from the
// command line) applied after the file. Throws ConfigError on unknown keys,
// unparsable values, or constraint violations.
PipelineConfig parse_config(const std::string& path,
                            const std::vector<std::string>& overrides = {});
PipelineConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides = {});

// The constraint checks alone (parse_config runs them already).
void validate(const PipelineConfig& cfg);

}  // namespace hypervec
