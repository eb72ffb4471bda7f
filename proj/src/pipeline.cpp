#include "hypervec/pipeline.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hypervec/alignment.hpp"
#include "hypervec/corpus.hpp"
#include "hypervec/errors.hpp"
#include "hypervec/eval.hpp"
#include "hypervec/hyperbolic.hpp"
#include "hypervec/pmi.hpp"
#include "hypervec/rng.hpp"
#include "hypervec/sgns.hpp"
#include "hypervec/spectral.hpp"

namespace hypervec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fnv1a_hex(const void* data, std::size_t len, std::uint64_t h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct StagePaths {
  std::string dir;
  std::string manifest;
};

StagePaths stage_paths(const PipelineConfig& cfg, const std::string& stage) {
  const std::string dir = cfg.out_dir + "/" + stage;
  return {dir, dir + "/manifest.json"};
}

void require_artifact(const std::string& stage, const std::string& path) {
  if (path.empty() || !fs::exists(path))
    throw DataError("stage " + stage + " needs missing artifact: " +
                    (path.empty() ? std::string("(unset path)") : path));
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

// A stage is current when its manifest matches today's parameters and input
// hashes and all recorded outputs still hash the same.
bool up_to_date(const StagePaths& paths, const json& params, const json& inputs) {
  std::ifstream in(paths.manifest);
  if (!in) return false;
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception&) {
    return false;
  }
  if (manifest.value("parameters", json()) != params) return false;
  if (manifest.value("inputs", json()) != inputs) return false;
  if (!manifest.contains("outputs")) return false;
  for (const auto& [path, hash] : manifest["outputs"].items()) {
    if (!fs::exists(path) || file_hash(path) != hash.get<std::string>()) return false;
  }
  return true;
}

std::vector<std::string> manifest_outputs(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  json manifest;
  in >> manifest;
  std::vector<std::string> out;
  for (const auto& [path, hash] : manifest["outputs"].items()) out.push_back(path);
  return out;
}

void write_manifest(const StagePaths& paths, const std::string& stage,
                    const json& params, const json& inputs,
                    const std::vector<std::string>& outputs, double wall) {
  json manifest;
  manifest["stage"] = stage;
  manifest["parameters"] = params;
  manifest["inputs"] = inputs;
  json out_hashes = json::object();
  for (const auto& path : outputs) out_hashes[path] = file_hash(path);
  manifest["outputs"] = out_hashes;
  manifest["wall_seconds"] = wall;
  std::ofstream out(paths.manifest);
  if (!out) throw DataError("cannot write manifest: " + paths.manifest);
  out << manifest.dump(2) << '\n';
}

json hash_inputs(const std::string& stage, const std::vector<std::string>& paths) {
  json inputs = json::object();
  for (const auto& path : paths) {
    require_artifact(stage, path);
    inputs[path] = file_hash(path);
  }
  return inputs;
}

void write_histogram(const std::vector<HistogramRow>& rows, const std::string& path) {
  save_histogram_csv(rows, path);
}

// ------------------------------------------------------------ stage bodies
// Each body returns the list of output paths it wrote.

std::vector<std::string> stage_vocab(const PipelineConfig& cfg, const std::string& dir) {
  corpus::FileTokenStream stream(cfg.corpus_path);
  const auto vocab = corpus::build_vocabulary(stream, cfg.min_count);
  const std::string out = dir + "/vocab.tsv";
  corpus::save_vocabulary(vocab, out);
  return {out};
}

std::vector<std::string> stage_cooc(const PipelineConfig& cfg, const std::string& dir) {
  const auto vocab = corpus::load_vocabulary(cfg.out_dir + "/vocab/vocab.tsv");
  corpus::FileTokenStream stream(cfg.corpus_path);
  const auto ids = corpus::subsample(stream, vocab, cfg.subsample, cfg.seed);
  const auto counts = corpus::count_cooccurrences(ids, vocab.size(), cfg.window);
  const std::string out = dir + "/cooc.tsv";
  corpus::save_cooccurrences(counts, out);
  return {out};
}

std::vector<std::string> stage_pmi(const PipelineConfig& cfg, const std::string& dir) {
  const auto counts =
      corpus::load_cooccurrences(cfg.out_dir + "/cooc/cooc.tsv", cfg.window);
  const auto matrix = pmi::pmi_matrix(counts);
  const std::string out = dir + "/pmi.tsv";
  pmi::save(matrix, out);
  return {out};
}

std::vector<std::string> stage_sigmaspmi(const PipelineConfig& cfg,
                                         const std::string& dir) {
  auto matrix = pmi::load(cfg.out_dir + "/pmi/pmi.tsv");
  matrix = pmi::sigma_spmi(pmi::shift(std::move(matrix), cfg.shift_k));
  const std::string out = dir + "/sigmaspmi.tsv";
  pmi::save(matrix, out);
  return {out};
}

std::vector<std::string> stage_svd_a(const PipelineConfig& cfg, const std::string& dir) {
  const std::string source = cfg.svd_source == "pmi"
                                 ? cfg.out_dir + "/pmi/pmi.tsv"
                                 : cfg.out_dir + "/sigmaspmi/sigmaspmi.tsv";
  const auto matrix = pmi::load(source);
  const auto vocab = corpus::load_vocabulary(cfg.out_dir + "/vocab/vocab.tsv");
  if (vocab.size() != matrix.n)
    throw DataError("vocabulary and score matrix disagree on size");
  const auto op = spectral::SparseSymmetric::from_scores(matrix);
  const spectral::SvdOptions options{cfg.svd_oversample, cfg.svd_tol, cfg.svd_strict};
  const auto svd = spectral::truncated_svd(op, cfg.dim, cfg.svd_iters,
                                           substream(cfg.seed, "svd-a"), options);
  auto emb = spectral::embeddings_from_svd(svd);
  emb.labels = vocab.tokens;
  const std::string out = dir + "/embeddings.tsv";
  spectral::save_embeddings(emb, out);
  return {out};
}

std::vector<std::string> stage_rhg(const PipelineConfig& cfg, const std::string& dir) {
  std::uint32_t n = cfg.rhg_n;
  if (n == 0) {
    const auto vocab = corpus::load_vocabulary(cfg.out_dir + "/vocab/vocab.tsv");
    n = vocab.size();
  }
  const hyperbolic::RhgParams params{n, cfg.rhg_kbar, cfg.rhg_gamma, cfg.seed};
  std::vector<std::string> outputs;
  if (cfg.rhg_realize_edges) {
    const auto g = hyperbolic::generate_rhg(params);
    const std::string points = dir + "/points.tsv";
    const std::string edges = dir + "/edges.tsv";
    hyperbolic::save_points(g, cfg.seed, points);
    hyperbolic::save_edges(g, edges);
    outputs = {points, edges};
  } else {
    hyperbolic::Rhg g;
    g.config = hyperbolic::calibrate(params);
    g.points = hyperbolic::sample_points(g.config, n, cfg.seed);
    const std::string points = dir + "/points.tsv";
    hyperbolic::save_points(g, cfg.seed, points);
    outputs = {points};
  }
  return outputs;
}

std::vector<std::string> stage_svd_b(const PipelineConfig& cfg, const std::string& dir) {
  const auto g = hyperbolic::load_points(cfg.out_dir + "/rhg/points.tsv");
  const hyperbolic::ConnectionOperator op(g.points, g.config.R);
  const spectral::OperatorRef<hyperbolic::ConnectionOperator> ref(op);
  const spectral::SvdOptions options{cfg.svd_oversample, cfg.svd_tol, cfg.svd_strict};
  const auto svd = spectral::truncated_svd(ref, cfg.dim, cfg.svd_iters,
                                           substream(cfg.seed, "svd-b"), options);
  auto emb = spectral::embeddings_from_svd(svd);
  const std::string out = dir + "/embeddings.tsv";
  spectral::save_embeddings(emb, out);
  return {out};
}

alignment::AlignmentConfig alignment_config(const PipelineConfig& cfg) {
  alignment::AlignmentConfig acfg;
  acfg.batch_size = cfg.align_batch;
  acfg.epochs = cfg.align_epochs;
  acfg.step_size = cfg.align_step;
  acfg.entropic_reg = cfg.align_reg;
  acfg.seed = cfg.seed;
  return acfg;
}

std::vector<std::string> stage_align(const PipelineConfig& cfg, const std::string& dir) {
  const auto wa = spectral::load_embeddings(cfg.out_dir + "/svd-a/embeddings.tsv");
  const auto wb = spectral::load_embeddings(cfg.out_dir + "/svd-b/embeddings.tsv");
  const auto acfg = alignment_config(cfg);

  const auto result = alignment::align(wa, wb, acfg);
  auto aligned = alignment::apply_alignment(wb, result);
  aligned.labels = wa.labels;
  const std::string q = dir + "/Q.tsv", perm = dir + "/perm.tsv";
  const std::string history = dir + "/history.csv", emb = dir + "/embeddings.tsv";
  alignment::save_alignment(result, q, perm, history);
  spectral::save_embeddings(aligned, emb);

  // Same procedure with the structured side replaced by pure noise; the gap
  // between the two rows is the evidence that geometry matters.
  const auto noise =
      alignment::random_baseline(wa.n(), wa.dim(), substream(cfg.seed, "baseline"));
  const auto random_result = alignment::align(wa, noise, acfg);
  auto random_aligned = alignment::apply_alignment(noise, random_result);
  random_aligned.labels = wa.labels;
  const std::string rq = dir + "/random_Q.tsv", rperm = dir + "/random_perm.tsv";
  const std::string rhistory = dir + "/random_history.csv";
  const std::string remb = dir + "/random_embeddings.tsv";
  alignment::save_alignment(random_result, rq, rperm, rhistory);
  spectral::save_embeddings(random_aligned, remb);
  return {q, perm, history, emb, rq, rperm, rhistory, remb};
}

std::vector<std::string> stage_sgns(const PipelineConfig& cfg, const std::string& dir) {
  const auto vocab = corpus::load_vocabulary(cfg.out_dir + "/vocab/vocab.tsv");
  corpus::FileTokenStream stream(cfg.corpus_path);
  const auto ids = corpus::subsample(stream, vocab, cfg.subsample, cfg.seed);
  const auto unigram = corpus::unigram_distribution(vocab, 0.75);
  sgns::SgnsConfig scfg;
  scfg.dim = cfg.dim;
  scfg.window = cfg.window;
  scfg.negatives = cfg.sgns_negatives;
  scfg.epochs = cfg.sgns_epochs;
  scfg.step_size = cfg.sgns_step;
  scfg.threads = cfg.sgns_threads;
  scfg.seed = cfg.seed;
  const auto model = sgns::train_sgns(ids, vocab, unigram, scfg);
  const auto emb = model.word_embeddings(vocab);
  const std::string out = dir + "/embeddings.tsv";
  spectral::save_embeddings(emb, out);

  const std::string objective = dir + "/objective.csv";
  std::ofstream obj(objective);
  if (!obj) throw DataError("cannot write objective: " + objective);
  obj << "epoch,objective\n";
  for (std::size_t e = 0; e < model.epoch_objective.size(); ++e)
    obj << (e + 1) << ',' << fmt(model.epoch_objective[e]) << '\n';
  return {out, objective};
}

struct SimilaritySuite {
  std::vector<std::pair<std::string, std::string>> datasets;  // name, path
};

SimilaritySuite similarity_suite(const PipelineConfig& cfg) {
  SimilaritySuite suite;
  if (!cfg.eval_ws353.empty()) suite.datasets.emplace_back("ws353", cfg.eval_ws353);
  if (!cfg.eval_men.empty()) suite.datasets.emplace_back("men", cfg.eval_men);
  if (!cfg.eval_mturk.empty()) suite.datasets.emplace_back("mturk", cfg.eval_mturk);
  return suite;
}

std::string eval_embeddings_path(const PipelineConfig& cfg) {
  return cfg.eval_embeddings.empty() ? cfg.out_dir + "/svd-a/embeddings.tsv"
                                     : cfg.eval_embeddings;
}

std::vector<std::string> stage_eval_sim(const PipelineConfig& cfg,
                                        const std::string& dir) {
  const auto suite = similarity_suite(cfg);
  if (suite.datasets.empty())
    throw DataError("stage eval-sim needs at least one similarity dataset path");
  const auto emb = spectral::load_embeddings(eval_embeddings_path(cfg));
  const std::string out = dir + "/results.csv";
  std::ofstream csv(out);
  if (!csv) throw DataError("cannot write results: " + out);
  csv << "dataset,spearman,coverage,used,total\n";
  for (const auto& [name, path] : suite.datasets) {
    const auto ds = eval::load_similarity_dataset(path, eval::SimilarityFormat::Auto, name);
    const auto r = eval::evaluate_similarity(emb, ds);
    csv << name << ',' << fmt(r.spearman) << ',' << fmt(r.coverage) << ',' << r.used
        << ',' << r.total << '\n';
  }
  return {out};
}

eval::PosClassifierConfig pos_config(const PipelineConfig& cfg) {
  eval::PosClassifierConfig pcfg;
  pcfg.hidden_size = cfg.pos_hidden;
  pcfg.epochs = cfg.pos_epochs;
  pcfg.step_size = cfg.pos_step;
  pcfg.seed = cfg.seed;
  return pcfg;
}

double pos_accuracy(const PipelineConfig& cfg, const spectral::EmbeddingMatrix& emb,
                    const eval::TaggedCorpus& train, const eval::TaggedCorpus& test) {
  const auto clf = eval::train_pos_classifier(train, emb, pos_config(cfg));
  return eval::evaluate_pos(clf, test, emb);
}

std::vector<std::string> stage_eval_pos(const PipelineConfig& cfg,
                                        const std::string& dir) {
  const bool has_conll = !cfg.eval_conll_train.empty() && !cfg.eval_conll_test.empty();
  const bool has_brown = !cfg.eval_brown.empty();
  if (!has_conll && !has_brown)
    throw DataError("stage eval-pos needs a tagged corpus path");
  const auto emb = spectral::load_embeddings(eval_embeddings_path(cfg));
  const std::string out = dir + "/results.csv";
  std::ofstream csv(out);
  if (!csv) throw DataError("cannot write results: " + out);
  csv << "dataset,accuracy,test_tokens\n";
  if (has_conll) {
    const auto train = eval::load_conll2000(cfg.eval_conll_train);
    const auto test = eval::load_conll2000(cfg.eval_conll_test);
    csv << "conll2000," << fmt(pos_accuracy(cfg, emb, train, test)) << ','
        << test.token_count() << '\n';
  }
  if (has_brown) {
    const auto brown = eval::load_brown(cfg.eval_brown);
    const auto [train, test] =
        eval::split_tagged_corpus(brown, cfg.brown_train_fraction, cfg.seed);
    csv << "brown," << fmt(pos_accuracy(cfg, emb, train, test)) << ','
        << test.token_count() << '\n';
  }
  return {out};
}

std::vector<std::string> stage_fig_pmi(const PipelineConfig& cfg,
                                       const std::string& dir) {
  const auto matrix = pmi::load(cfg.out_dir + "/pmi/pmi.tsv");
  const std::string out = dir + "/pmi_histogram.csv";
  write_histogram(pmi::pmi_histogram(matrix, cfg.fig_bins), out);
  return {out};
}

std::vector<std::string> stage_fig_rx(const PipelineConfig& cfg,
                                      const std::string& dir) {
  const auto g = hyperbolic::load_points(cfg.out_dir + "/rhg/points.tsv");
  const std::string out = dir + "/r_minus_x_histogram.csv";
  write_histogram(
      hyperbolic::r_minus_x_histogram(g.config, cfg.fig_rx_samples, cfg.seed, cfg.fig_bins),
      out);
  return {out};
}

std::vector<std::string> stage_table1(const PipelineConfig& cfg,
                                      const std::string& dir) {
  struct MethodRow {
    std::string method;
    std::string path;
  };
  const std::string svd_a_label =
      cfg.svd_source == "pmi" ? "pmi+svd" : "sigmaspmi+svd";
  const std::vector<MethodRow> methods = {
      {"sgns", cfg.out_dir + "/sgns/embeddings.tsv"},
      {svd_a_label, cfg.out_dir + "/svd-a/embeddings.tsv"},
      {"rhg+svd+align", cfg.out_dir + "/align/embeddings.tsv"},
      {"random+align", cfg.out_dir + "/align/random_embeddings.tsv"},
  };

  const auto suite = similarity_suite(cfg);
  const bool has_conll = !cfg.eval_conll_train.empty() && !cfg.eval_conll_test.empty();
  const bool has_brown = !cfg.eval_brown.empty();

  eval::TaggedCorpus conll_train, conll_test, brown_train, brown_test;
  if (has_conll) {
    conll_train = eval::load_conll2000(cfg.eval_conll_train);
    conll_test = eval::load_conll2000(cfg.eval_conll_test);
  }
  if (has_brown) {
    const auto brown = eval::load_brown(cfg.eval_brown);
    std::tie(brown_train, brown_test) =
        eval::split_tagged_corpus(brown, cfg.brown_train_fraction, cfg.seed);
  }

  const std::string out = dir + "/table1.csv";
  std::ofstream csv(out);
  if (!csv) throw DataError("cannot write table: " + out);
  csv << "method,ws353,men,mturk,conll2000,brown\n";
  bool any = false;
  for (const auto& method : methods) {
    if (!fs::exists(method.path)) continue;
    any = true;
    const auto emb = spectral::load_embeddings(method.path);
    std::string cells[5];
    for (const auto& [name, path] : suite.datasets) {
      const auto ds = eval::load_similarity_dataset(path, eval::SimilarityFormat::Auto, name);
      const double rho = eval::evaluate_similarity(emb, ds).spearman;
      if (name == "ws353") cells[0] = fmt(rho);
      if (name == "men") cells[1] = fmt(rho);
      if (name == "mturk") cells[2] = fmt(rho);
    }
    if (has_conll)
      cells[3] = fmt(100.0 * pos_accuracy(cfg, emb, conll_train, conll_test));
    if (has_brown)
      cells[4] = fmt(100.0 * pos_accuracy(cfg, emb, brown_train, brown_test));
    csv << method.method;
    for (const auto& cell : cells) csv << ',' << cell;
    csv << '\n';
  }
  if (!any)
    throw DataError("stage table1 found no method embeddings under " + cfg.out_dir);
  return {out};
}

// --------------------------------------------------- stage wiring & params

struct StageSpec {
  json params;
  std::vector<std::string> inputs;
  std::vector<std::string> (*run)(const PipelineConfig&, const std::string&);
};

StageSpec make_spec(const std::string& stage, const PipelineConfig& cfg) {
  const std::string vocab = cfg.out_dir + "/vocab/vocab.tsv";
  const std::string cooc = cfg.out_dir + "/cooc/cooc.tsv";
  const std::string pmi_path = cfg.out_dir + "/pmi/pmi.tsv";
  const std::string sspmi = cfg.out_dir + "/sigmaspmi/sigmaspmi.tsv";
  const std::string points = cfg.out_dir + "/rhg/points.tsv";

  if (stage == "vocab")
    return {{{"min_count", cfg.min_count}}, {cfg.corpus_path}, &stage_vocab};
  if (stage == "cooc")
    return {{{"window", cfg.window}, {"subsample", cfg.subsample}, {"seed", cfg.seed}},
            {cfg.corpus_path, vocab},
            &stage_cooc};
  if (stage == "pmi") return {json::object(), {cooc}, &stage_pmi};
  if (stage == "sigmaspmi")
    return {{{"shift_k", cfg.shift_k}}, {pmi_path}, &stage_sigmaspmi};
  if (stage == "svd-a")
    return {{{"dim", cfg.dim},
             {"svd_iters", cfg.svd_iters},
             {"svd_oversample", cfg.svd_oversample},
             {"svd_tol", cfg.svd_tol},
             {"svd_strict", cfg.svd_strict},
             {"svd_source", cfg.svd_source},
             {"seed", cfg.seed}},
            {cfg.svd_source == "pmi" ? pmi_path : sspmi, vocab},
            &stage_svd_a};
  if (stage == "rhg") {
    StageSpec spec{{{"rhg_n", cfg.rhg_n},
                    {"rhg_kbar", cfg.rhg_kbar},
                    {"rhg_gamma", cfg.rhg_gamma},
                    {"rhg_realize_edges", cfg.rhg_realize_edges},
                    {"seed", cfg.seed}},
                   {},
                   &stage_rhg};
    if (cfg.rhg_n == 0) spec.inputs.push_back(vocab);
    return spec;
  }
  if (stage == "svd-b")
    return {{{"dim", cfg.dim},
             {"svd_iters", cfg.svd_iters},
             {"svd_oversample", cfg.svd_oversample},
             {"svd_tol", cfg.svd_tol},
             {"svd_strict", cfg.svd_strict},
             {"seed", cfg.seed}},
            {points},
            &stage_svd_b};
  if (stage == "align")
    return {{{"align_batch", cfg.align_batch},
             {"align_epochs", cfg.align_epochs},
             {"align_step", cfg.align_step},
             {"align_reg", cfg.align_reg},
             {"seed", cfg.seed}},
            {cfg.out_dir + "/svd-a/embeddings.tsv",
             cfg.out_dir + "/svd-b/embeddings.tsv"},
            &stage_align};
  if (stage == "sgns")
    return {{{"dim", cfg.dim},
             {"window", cfg.window},
             {"subsample", cfg.subsample},
             {"sgns_negatives", cfg.sgns_negatives},
             {"sgns_epochs", cfg.sgns_epochs},
             {"sgns_step", cfg.sgns_step},
             {"sgns_threads", cfg.sgns_threads},
             {"seed", cfg.seed}},
            {cfg.corpus_path, vocab},
            &stage_sgns};
  if (stage == "eval-sim") {
    StageSpec spec{json::object(), {eval_embeddings_path(cfg)}, &stage_eval_sim};
    for (const auto& [name, path] : similarity_suite(cfg).datasets)
      spec.inputs.push_back(path);
    return spec;
  }
  if (stage == "eval-pos") {
    StageSpec spec{{{"pos_hidden", cfg.pos_hidden},
                    {"pos_epochs", cfg.pos_epochs},
                    {"pos_step", cfg.pos_step},
                    {"brown_train_fraction", cfg.brown_train_fraction},
                    {"seed", cfg.seed}},
                   {eval_embeddings_path(cfg)},
                   &stage_eval_pos};
    if (!cfg.eval_conll_train.empty()) spec.inputs.push_back(cfg.eval_conll_train);
    if (!cfg.eval_conll_test.empty()) spec.inputs.push_back(cfg.eval_conll_test);
    if (!cfg.eval_brown.empty()) spec.inputs.push_back(cfg.eval_brown);
    return spec;
  }
  if (stage == "fig-pmi")
    return {{{"fig_bins", cfg.fig_bins}}, {pmi_path}, &stage_fig_pmi};
  if (stage == "fig-rx")
    return {{{"fig_bins", cfg.fig_bins},
             {"fig_rx_samples", cfg.fig_rx_samples},
             {"seed", cfg.seed}},
            {points},
            &stage_fig_rx};
  if (stage == "table1") {
    StageSpec spec{{{"pos_hidden", cfg.pos_hidden},
                    {"pos_epochs", cfg.pos_epochs},
                    {"pos_step", cfg.pos_step},
                    {"brown_train_fraction", cfg.brown_train_fraction},
                    {"svd_source", cfg.svd_source},
                    {"seed", cfg.seed}},
                   {},
                   &stage_table1};
    for (const auto& [name, path] : similarity_suite(cfg).datasets)
      spec.inputs.push_back(path);
    if (!cfg.eval_conll_train.empty()) spec.inputs.push_back(cfg.eval_conll_train);
    if (!cfg.eval_conll_test.empty()) spec.inputs.push_back(cfg.eval_conll_test);
    if (!cfg.eval_brown.empty()) spec.inputs.push_back(cfg.eval_brown);
    // Method embeddings are optional inputs: present ones pin the hash.
    for (const char* rel : {"/sgns/embeddings.tsv", "/svd-a/embeddings.tsv",
                            "/align/embeddings.tsv", "/align/random_embeddings.tsv"}) {
      const std::string path = cfg.out_dir + rel;
      if (fs::exists(path)) spec.inputs.push_back(path);
    }
    return spec;
  }
  throw ConfigError("unknown stage: " + stage);
}

}  // namespace

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names = {
      "vocab", "cooc", "pmi", "sigmaspmi", "svd-a", "rhg", "svd-b",
      "align", "sgns", "eval-sim", "eval-pos", "fig-pmi", "fig-rx", "table1"};
  return names;
}

StageOutcome run_stage(const std::string& stage, const PipelineConfig& cfg,
                       bool force) {
  const auto& names = stage_names();
  if (std::find(names.begin(), names.end(), stage) == names.end())
    throw ConfigError("unknown stage: " + stage);
  const auto spec = make_spec(stage, cfg);
  const auto paths = stage_paths(cfg, stage);
  fs::create_directories(paths.dir);

  const json inputs = hash_inputs(stage, spec.inputs);
  StageOutcome outcome;
  outcome.stage = stage;
  if (!force && up_to_date(paths, spec.params, inputs)) {
    outcome.skipped = true;
    outcome.outputs = manifest_outputs(paths.manifest);
    return outcome;
  }

  const auto start = std::chrono::steady_clock::now();
  outcome.outputs = spec.run(cfg, paths.dir);
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(paths, stage, spec.params, inputs, outcome.outputs,
                 outcome.wall_seconds);
  return outcome;
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot hash missing file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const auto got = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (in.eof()) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string manifest_hash(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw DataError("cannot open manifest: " + manifest_path);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw DataError("unreadable manifest " + manifest_path + ": " + e.what());
  }
  manifest.erase("wall_seconds");
  const std::string canon = manifest.dump();
  return fnv1a_hex(canon.data(), canon.size(), 0xcbf29ce484222325ULL);
}

}  // namespace hypervec
