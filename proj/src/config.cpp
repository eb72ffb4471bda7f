#include "hypervec/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hypervec/errors.hpp"

namespace hypervec {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  std::istringstream ss(value);
  ss >> out;
  if (ss.fail() || !ss.eof())
    throw ConfigError("config key \"" + key + "\": cannot parse \"" + value + "\"");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key \"" + key + "\": expected true/false, got \"" +
                    value + "\"");
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  auto str = [](std::string PipelineConfig::* field) {
    return Setter([field](PipelineConfig& c, const std::string&, const std::string& v) {
      c.*field = v;
    });
  };
  auto u64 = [](std::uint64_t PipelineConfig::* field) {
    return Setter([field](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.*field = parse_number<std::uint64_t>(k, v);
    });
  };
  auto u32 = [](std::uint32_t PipelineConfig::* field) {
    return Setter([field](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.*field = parse_number<std::uint32_t>(k, v);
    });
  };
  auto num = [](int PipelineConfig::* field) {
    return Setter([field](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.*field = parse_number<int>(k, v);
    });
  };
  auto dbl = [](double PipelineConfig::* field) {
    return Setter([field](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.*field = parse_number<double>(k, v);
    });
  };
  auto flag = [](bool PipelineConfig::* field) {
    return Setter([field](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.*field = parse_bool(k, v);
    });
  };

  static const std::map<std::string, Setter> map = {
      {"corpus_path", str(&PipelineConfig::corpus_path)},
      {"out_dir", str(&PipelineConfig::out_dir)},
      {"seed", u64(&PipelineConfig::seed)},
      {"min_count", u64(&PipelineConfig::min_count)},
      {"window", num(&PipelineConfig::window)},
      {"subsample", dbl(&PipelineConfig::subsample)},
      {"dim", num(&PipelineConfig::dim)},
      {"shift_k", dbl(&PipelineConfig::shift_k)},
      {"svd_iters", num(&PipelineConfig::svd_iters)},
      {"svd_oversample", num(&PipelineConfig::svd_oversample)},
      {"svd_tol", dbl(&PipelineConfig::svd_tol)},
      {"svd_strict", flag(&PipelineConfig::svd_strict)},
      {"svd_source", str(&PipelineConfig::svd_source)},
      {"rhg_n", u32(&PipelineConfig::rhg_n)},
      {"rhg_kbar", dbl(&PipelineConfig::rhg_kbar)},
      {"rhg_gamma", dbl(&PipelineConfig::rhg_gamma)},
      {"rhg_realize_edges", flag(&PipelineConfig::rhg_realize_edges)},
      {"align_batch", num(&PipelineConfig::align_batch)},
      {"align_epochs", num(&PipelineConfig::align_epochs)},
      {"align_step", dbl(&PipelineConfig::align_step)},
      {"align_reg", dbl(&PipelineConfig::align_reg)},
      {"sgns_negatives", num(&PipelineConfig::sgns_negatives)},
      {"sgns_epochs", num(&PipelineConfig::sgns_epochs)},
      {"sgns_step", dbl(&PipelineConfig::sgns_step)},
      {"sgns_threads", num(&PipelineConfig::sgns_threads)},
      {"pos_hidden", num(&PipelineConfig::pos_hidden)},
      {"pos_epochs", num(&PipelineConfig::pos_epochs)},
      {"pos_step", dbl(&PipelineConfig::pos_step)},
      {"brown_train_fraction", dbl(&PipelineConfig::brown_train_fraction)},
      {"fig_bins", num(&PipelineConfig::fig_bins)},
      {"fig_rx_samples", u64(&PipelineConfig::fig_rx_samples)},
      {"eval_ws353", str(&PipelineConfig::eval_ws353)},
      {"eval_men", str(&PipelineConfig::eval_men)},
      {"eval_mturk", str(&PipelineConfig::eval_mturk)},
      {"eval_conll_train", str(&PipelineConfig::eval_conll_train)},
      {"eval_conll_test", str(&PipelineConfig::eval_conll_test)},
      {"eval_brown", str(&PipelineConfig::eval_brown)},
      {"eval_embeddings", str(&PipelineConfig::eval_embeddings)},
      {"eval_method", str(&PipelineConfig::eval_method)},
  };
  return map;
}

void apply(PipelineConfig& cfg, const std::string& key, const std::string& value,
           const std::string& where) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end())
    throw ConfigError(where + ": unknown config key \"" + key + "\"");
  it->second(cfg, key, value);
}

void apply_line(PipelineConfig& cfg, std::string line, const std::string& where) {
  const auto hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  line = trim(line);
  if (line.empty()) return;
  const auto eq = line.find('=');
  if (eq == std::string::npos)
    throw ConfigError(where + ": expected \"key = value\", got \"" + line + "\"");
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError(where + ": empty key");
  apply(cfg, key, value, where);
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("config constraint violated: ") + what);
  };
  require(cfg.min_count >= 1, "min_count >= 1");
  require(cfg.window >= 1, "window >= 1");
  require(cfg.subsample > 0, "subsample > 0");
  require(cfg.dim >= 1, "dim >= 1");
  require(cfg.shift_k > 0, "shift_k > 0");
  require(cfg.svd_iters >= 1, "svd_iters >= 1");
  require(cfg.svd_oversample >= 0, "svd_oversample >= 0");
  require(cfg.svd_tol > 0, "svd_tol > 0");
  require(cfg.svd_source == "pmi" || cfg.svd_source == "sigmaspmi",
          "svd_source in {pmi, sigmaspmi}");
  require(cfg.rhg_kbar > 0, "rhg_kbar > 0");
  require(cfg.rhg_gamma > 2, "rhg_gamma > 2");
  require(cfg.align_batch >= 1, "align_batch >= 1");
  require(cfg.align_epochs >= 0, "align_epochs >= 0");
  require(cfg.align_step > 0 && cfg.align_step <= 1, "align_step in (0, 1]");
  require(cfg.align_reg > 0, "align_reg > 0");
  require(cfg.sgns_negatives >= 0, "sgns_negatives >= 0");
  require(cfg.sgns_epochs >= 1, "sgns_epochs >= 1");
  require(cfg.sgns_step > 0, "sgns_step > 0");
  require(cfg.sgns_threads >= 1, "sgns_threads >= 1");
  require(cfg.pos_hidden >= 1, "pos_hidden >= 1");
  require(cfg.pos_epochs >= 1, "pos_epochs >= 1");
  require(cfg.pos_step > 0, "pos_step > 0");
  require(cfg.brown_train_fraction > 0 && cfg.brown_train_fraction < 1,
          "brown_train_fraction in (0, 1)");
  require(cfg.fig_bins >= 2, "fig_bins >= 2");
  require(cfg.fig_rx_samples >= 2, "fig_rx_samples >= 2");
}

PipelineConfig parse_config_text(const std::string& text,
                                 const std::vector<std::string>& overrides) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    apply_line(cfg, line, "config line " + std::to_string(line_no));
  }
  for (const auto& override_kv : overrides)
    apply_line(cfg, override_kv, "override \"" + override_kv + "\"");
  validate(cfg);
  return cfg;
}

PipelineConfig parse_config(const std::string& path,
                            const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), overrides);
}

}  // namespace hypervec
