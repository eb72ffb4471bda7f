// Command line front end: one subcommand per pipeline stage plus `all`.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypervec/config.hpp"
#include "hypervec/errors.hpp"
#include "hypervec/pipeline.hpp"

namespace {

// 0 ok, 1 unexpected, 2 config, 3 data, 4 convergence.
constexpr int kConfigExit = 2;
constexpr int kDataExit = 3;
constexpr int kConvergenceExit = 4;

hypervec::PipelineConfig load_config(const std::string& path,
                                     const std::vector<std::string>& sets) {
  if (path.empty()) return hypervec::parse_config_text("", sets);
  return hypervec::parse_config(path, sets);
}

void report(const hypervec::StageOutcome& outcome) {
  if (outcome.skipped) {
    std::printf("stage %s: up to date\n", outcome.stage.c_str());
    return;
  }
  std::printf("stage %s: wrote %zu file%s in %.2fs\n", outcome.stage.c_str(),
              outcome.outputs.size(), outcome.outputs.size() == 1 ? "" : "s",
              outcome.wall_seconds);
}

bool eval_inputs_configured(const std::string& stage,
                            const hypervec::PipelineConfig& cfg) {
  const bool sim = !cfg.eval_ws353.empty() || !cfg.eval_men.empty() ||
                   !cfg.eval_mturk.empty();
  const bool pos = (!cfg.eval_conll_train.empty() && !cfg.eval_conll_test.empty()) ||
                   !cfg.eval_brown.empty();
  if (stage == "eval-sim") return sim;
  if (stage == "eval-pos") return pos;
  if (stage == "table1") return sim || pos;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"text and random-hyperbolic-graph embedding pipeline"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  bool force = false;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--set", sets, "override, e.g. --set seed=7")->take_all();
  app.add_flag("--force", force, "re-run even when outputs are up to date");

  for (const auto& stage : hypervec::stage_names())
    app.add_subcommand(stage, "run the " + stage + " stage");
  auto* all = app.add_subcommand(
      "all", "run every stage in order; evaluation stages only when their "
             "dataset paths are configured");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    const auto cfg = load_config(config_path, sets);
    if (all->parsed()) {
      for (const auto& stage : hypervec::stage_names()) {
        if (!eval_inputs_configured(stage, cfg)) {
          std::printf("stage %s: skipped (no dataset paths configured)\n",
                      stage.c_str());
          continue;
        }
        report(hypervec::run_stage(stage, cfg, force));
      }
      return 0;
    }
    for (const auto* sub : app.get_subcommands())
      report(hypervec::run_stage(sub->get_name(), cfg, force));
    return 0;
  } catch (const hypervec::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigExit;
  } catch (const hypervec::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kDataExit;
  } catch (const hypervec::ConvergenceError& e) {
    std::fprintf(stderr, "convergence error: %s\n", e.what());
    return kConvergenceExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
