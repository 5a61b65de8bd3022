// Copyright 2026 The somaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOMAUDIT_PIPELINE_H_
#define SOMAUDIT_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "somaudit/audit.h"
#include "somaudit/dataset.h"
#include "somaudit/embedding.h"
#include "somaudit/report_io.h"
#include "somaudit/som.h"
#include "somaudit/trajectory.h"

namespace somaudit {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

// Internal errors come from numeric failures (non-finite training state);
// everything else is a problem with the inputs.
int ExitCodeFor(const absl::Status& status);

struct RunConfig {
  // Dataset CSV. With `sidecar` empty, `sensitive_column` names a column of
  // this file; otherwise the sensitive values come from the sidecar.
  std::string input;
  std::string sidecar;
  std::string sensitive_column;
  // "drop" removes rows with a missing cell, "constant" substitutes
  // `missing_value`.
  std::string missing = "drop";
  double missing_value = -1.0;
  std::vector<std::string> missing_tokens;
  std::vector<std::string> ignore_columns;
  char delimiter = ',';
  bool standardize = true;
  std::optional<double> filter_threshold;
  TrainConfig train;
  // Trajectory: chosen by silhouette over [2, 12] when unset.
  std::optional<int> n_clusters;
  std::vector<AdjacencyMode> modes = {AdjacencyMode::kChain};
  // Trajectory scoring: centroids whose majority label is listed here are
  // left out of the true order.
  std::vector<double> exclude_labels;
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  std::string output_dir = "out";
  // Report label; the input file name when empty.
  std::string dataset_tag;

  absl::Status Validate() const;
  std::string DatasetTag() const;
  // Stable key=value rendering of every field that affects results.
  std::string Canonical() const;
  std::string Hash() const;
};

struct PreparedData {
  Dataset dataset;
  std::vector<std::string> removed_features;
  LoadStats load_stats;
};

// Load, optional correlation filter, optional standardization. This is the
// only stage that pairs features with sensitive values.
absl::StatusOr<PreparedData> PrepareAuditData(const RunConfig& cfg);

struct SeedArtifacts {
  SomMap map;
  Embedding3D embedding;
  LeakageReport report;
};

// Training and reporting for one seed on prepared data. Training receives
// the feature matrix only.
absl::StatusOr<SeedArtifacts> AuditSeed(const Dataset& data, const RunConfig& cfg,
                                        uint64_t seed);

struct AuditOutcome {
  std::vector<LeakageReport> reports;
  RunAggregate aggregate;
};

// For every seed writes <out>/seed_<s>/{embedding.csv, distance_map.csv,
// report.json, report.csv, som.bin}; then <out>/aggregate.json.
absl::StatusOr<AuditOutcome> RunAudit(const RunConfig& cfg);

// PCA embedding on the same prepared data: <out>/baseline/{embedding.csv,
// report.json, report.csv}.
absl::StatusOr<LeakageReport> RunBaseline(const RunConfig& cfg);

// Trajectory analysis. Features are loaded without the sensitive column and
// every seed's map is trained before `labels_path` (a one-column sidecar) is
// opened. Writes <out>/seed_<s>/trajectory.json and <out>/trajectory.json.
absl::StatusOr<std::vector<TrajectoryRun>> RunTrajectory(
    const RunConfig& cfg, const std::string& labels_path);

// Writes <dir>/features.csv, <dir>/sensitive.csv and <dir>/ground_truth.json.
absl::Status RunSynth(const SyntheticSpec& spec, const std::string& dir);

absl::Status RunPlot(const std::string& embedding_csv,
                     const std::string& sidecar, const std::string& out_svg);

// Merges report JSON files into one comparison table: <out>.json holds the
// reports and per (method, dataset) aggregates, <out>.csv one row per
// report.
absl::Status RunReportMerge(const std::vector<std::string>& inputs,
                            const std::string& out_prefix);

}  // namespace somaudit

#endif  // SOMAUDIT_PIPELINE_H_
