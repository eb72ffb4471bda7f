#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hypervec/config.hpp"
#include "hypervec/errors.hpp"

using namespace hypervec;

TEST_SUITE("config") {
  TEST_CASE("empty text yields the documented defaults") {
    const auto cfg = parse_config_text("");
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.seed == 1);
    CHECK(cfg.min_count == 5);
    CHECK(cfg.window == 2);
    CHECK(cfg.subsample == doctest::Approx(1e-5));
    CHECK(cfg.dim == 200);
    CHECK(cfg.shift_k == doctest::Approx(5.0));
    CHECK(cfg.svd_iters == 100);
    CHECK(cfg.svd_oversample == 10);
    CHECK(cfg.svd_strict);
    CHECK(cfg.svd_source == "sigmaspmi");
    CHECK(cfg.rhg_n == 0);
    CHECK(cfg.rhg_kbar == doctest::Approx(10.0));
    CHECK(cfg.rhg_gamma == doctest::Approx(2.5));
    CHECK(cfg.rhg_realize_edges);
    CHECK(cfg.align_batch == 1024);
    CHECK(cfg.align_epochs == 30);
    CHECK(cfg.align_step == doctest::Approx(0.5));
    CHECK(cfg.align_reg == doctest::Approx(0.05));
    CHECK(cfg.sgns_negatives == 5);
    CHECK(cfg.sgns_epochs == 5);
    CHECK(cfg.sgns_threads == 1);
    CHECK(cfg.pos_hidden == 128);
    CHECK(cfg.brown_train_fraction == doctest::Approx(0.8));
    CHECK(cfg.fig_bins == 200);
    CHECK(cfg.fig_rx_samples == 1000000);
    CHECK(cfg.corpus_path.empty());
    CHECK(cfg.eval_ws353.empty());
  }

  TEST_CASE("key=value lines with comments and loose whitespace") {
    const auto cfg = parse_config_text(
        "# experiment setup\n"
        "corpus_path = data/corpus.txt   # inline comment\n"
        "\n"
        "  seed=42\n"
        "window =  5\n"
        "svd_strict = false\n"
        "rhg_realize_edges = 1\n"
        "eval_method = pmi+svd\n");
    CHECK(cfg.corpus_path == "data/corpus.txt");
    CHECK(cfg.seed == 42);
    CHECK(cfg.window == 5);
    CHECK(!cfg.svd_strict);
    CHECK(cfg.rhg_realize_edges);
    CHECK(cfg.eval_method == "pmi+svd");
  }

  TEST_CASE("overrides win over file values and are validated") {
    const auto cfg = parse_config_text("dim = 100\nseed = 7\n",
                                       {"dim=25", "out_dir=elsewhere"});
    CHECK(cfg.dim == 25);
    CHECK(cfg.seed == 7);
    CHECK(cfg.out_dir == "elsewhere");
    CHECK_THROWS_AS(parse_config_text("", {"dim=0"}), ConfigError);
    CHECK_THROWS_AS(parse_config_text("", {"no_such_key=1"}), ConfigError);
  }

  TEST_CASE("unknown keys and malformed lines fail loudly") {
    CHECK_THROWS_WITH_AS(parse_config_text("wnidow = 2\n"),
                         doctest::Contains("unknown config key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text("just some words\n"),
                         doctest::Contains("line 1"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("= 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("window = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("window = 2x\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("svd_strict = maybe\n"), ConfigError);
  }

  TEST_CASE("every range constraint rejects an out-of-range value") {
    const std::vector<std::string> bad = {
        "min_count = 0",
        "window = 0",
        "subsample = 0",
        "dim = 0",
        "shift_k = 0",
        "svd_iters = 0",
        "svd_oversample = -1",
        "svd_tol = 0",
        "svd_source = magic",
        "rhg_kbar = 0",
        "rhg_gamma = 2.0",
        "align_batch = 0",
        "align_epochs = -1",
        "align_step = 0",
        "align_step = 1.5",
        "align_reg = 0",
        "sgns_negatives = -1",
        "sgns_epochs = 0",
        "sgns_step = 0",
        "sgns_threads = 0",
        "pos_hidden = 0",
        "pos_epochs = 0",
        "pos_step = 0",
        "brown_train_fraction = 0",
        "brown_train_fraction = 1",
        "fig_bins = 1",
        "fig_rx_samples = 1",
    };
    for (const auto& line : bad) {
      CAPTURE(line);
      CHECK_THROWS_AS(parse_config_text(line + "\n"), ConfigError);
    }
  }

  TEST_CASE("validate() can be called on a hand-built config") {
    PipelineConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.rhg_gamma = 1.9;
    CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("rhg_gamma"), ConfigError);
  }

  TEST_CASE("parse_config reads a file and reports a missing one") {
    const auto dir = std::filesystem::temp_directory_path() / "hypervec_config_test";
    std::filesystem::create_directories(dir);
    const auto p = dir / "run.cfg";
    {
      std::ofstream out(p);
      out << "seed = 99\nwindow = 3\n";
    }
    const auto cfg = parse_config(p.string(), {"window=4"});
    CHECK(cfg.seed == 99);
    CHECK(cfg.window == 4);
    CHECK_THROWS_AS(parse_config((dir / "absent.cfg").string()), ConfigError);
    std::filesystem::remove_all(dir);
  }
}
