// Named verification experiments: closed-form predictions vs exact or
// Monte-Carlo ground truth, with deterministic, machine-readable reports.
//
// Each experiment emits rows (one compared quantity each).  A row records
// the measured value, the predicted value, the tolerance it was judged
// against, the Monte-Carlo standard error (0 for exact rows), and whether
// it passed.  Rows marked gated decide the experiment's overall verdict;
// ungated rows are informative only (e.g. quantities whose constant is
// conjectural, where only stability is asserted).
//
// Monte-Carlo draws are split across 16 fixed lanes: lane L handles draws
// k = L mod 16 with its own RNG stream, and lanes are reduced in lane
// order.  Reports are therefore byte-identical for any worker count, and
// neither runtime nor worker count appears in the serialized output.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace treelab {

struct ReportRow {
  std::string experiment;
  int n = 0;
  double mu = 0.0;
  std::string quantity;
  double measured = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
  double stderr_value = 0.0;  // Monte-Carlo standard error, 0 when exact
  bool pass = false;
  bool gated = true;
  std::string provenance;  // "exact" or "monte-carlo:<samples>"
};

struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  std::string backend;  // count-table backend(s) the experiment used
  std::vector<ReportRow> rows;

  bool all_passed() const;  // over gated rows only
  // Header "experiment,n,mu,quantity,measured,predicted,tolerance,stderr,pass"
  // plus one line per row, %.12g numbers, pass as 1/0.
  std::string to_csv() const;
  // Full report including per-row provenance and gating; excludes runtime
  // and worker count so output is reproducible byte for byte.
  std::string to_json() const;
};

struct ExperimentConfig {
  std::uint64_t seed = 20260823;
  int workers = 0;  // 0 = hardware concurrency; affects wall time only
  // Per-experiment parameter overrides, merged over the built-in defaults
  // (e.g. {"samples": 1000, "n": [500, 1000]}).
  nlohmann::json overrides = nlohmann::json::object();
};

// Names accepted by run_experiment, in catalogue order.
std::vector<std::string> experiment_names();

// Runs one experiment by name; throws std::invalid_argument for unknown
// names or malformed overrides.
ExperimentReport run_experiment(const std::string& name,
                                const ExperimentConfig& config = {});

}  // namespace treelab
