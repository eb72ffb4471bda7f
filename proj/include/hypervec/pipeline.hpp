#pragma once

#include <string>
#include <vector>

#include "hypervec/config.hpp"

namespace hypervec {

// Stage ids in dependency order.
// vocab, cooc, pmi, sigmaspmi, svd-a, rhg, svd-b, align, sgns,
// eval-sim, eval-pos, fig-pmi, fig-rx, table1
const std::vector<std::string>& stage_names();

struct StageOutcome {
  std::string stage;
  bool skipped = false;               // inputs unchanged; re-run not forced
  std::vector<std::string> outputs;   // paths written (or found up to date)
  double wall_seconds = 0.0;
};

// Runs one stage: validates upstream artifacts (DataError naming the absent
// file on a gap), writes outputs plus a manifest with input hashes,
// parameters, seed, and wall time under <out_dir>/<stage>/. Re-running with
// identical inputs and parameters is a no-op unless force is set.
StageOutcome run_stage(const std::string& stage, const PipelineConfig& cfg,
                       bool force = false);

// Stable fingerprint of a manifest (stage, parameters, input and output
// hashes; wall time excluded). Used by the idempotence checks.
std::string manifest_hash(const std::string& manifest_path);

// FNV-1a over file bytes, hex-encoded; the hash used in manifests.
std::string file_hash(const std::string& path);

}  // namespace hypervec
