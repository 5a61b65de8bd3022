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

#ifndef SOMAUDIT_DATASET_H_
#define SOMAUDIT_DATASET_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "somaudit/matrix.h"

namespace somaudit {

// Tabular observations with the sensitive attribute held apart from the
// features. Training code only ever receives `features`.
struct Dataset {
  Matrix features;                      // N x d
  std::vector<double> sensitive;        // length N, withheld from learning
  std::vector<std::string> feature_names;
  std::string sensitive_name;
  std::string provenance;

  size_t num_rows() const { return features.rows(); }
  size_t num_features() const { return features.cols(); }

  // Checks shape agreement, finiteness, the sensitive column not being among
  // the features, and d >= 2, N >= min_rows.
  absl::Status Validate(size_t min_rows = 10) const;
};

// How missing cells are resolved at load time.
class MissingPolicy {
 public:
  enum class Mode { kReplaceWithConstant, kDropRows };

  static MissingPolicy ReplaceWithConstant(double value) {
    return MissingPolicy(Mode::kReplaceWithConstant, value);
  }
  static MissingPolicy DropRows() { return MissingPolicy(Mode::kDropRows, 0.0); }

  Mode mode() const { return mode_; }
  double value() const { return value_; }

 private:
  MissingPolicy(Mode mode, double value) : mode_(mode), value_(value) {}
  Mode mode_;
  double value_;
};

struct CsvOptions {
  char delimiter = ',';
  // Cells equal to one of these (after trimming) count as missing, in
  // addition to blank cells.
  std::vector<std::string> missing_tokens;
  // Columns dropped before numeric parsing.
  std::vector<std::string> ignore_columns;
  size_t min_rows = 10;
};

struct LoadStats {
  size_t rows_read = 0;
  size_t rows_dropped = 0;
  size_t cells_replaced = 0;
};

// Reads a headered CSV, pulls `sensitive_column` out of the feature matrix
// and applies `policy` to missing cells (the sensitive column included).
absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                const std::string& sensitive_column,
                                const MissingPolicy& policy,
                                const CsvOptions& options = {},
                                LoadStats* stats = nullptr);

absl::StatusOr<Dataset> ParseCsv(std::istream& in,
                                 const std::string& sensitive_column,
                                 const MissingPolicy& policy,
                                 const CsvOptions& options = {},
                                 LoadStats* stats = nullptr);

// Reads a features-only CSV plus a one-column sensitive sidecar, the layout
// WriteDatasetCsv emits. Row counts must agree; `policy` applies to both.
absl::StatusOr<Dataset> LoadCsvWithSidecar(const std::string& features_path,
                                           const std::string& sidecar_path,
                                           const MissingPolicy& policy,
                                           const CsvOptions& options = {},
                                           LoadStats* stats = nullptr);

// A feature matrix read without any sensitive column.
struct FeatureTable {
  Matrix features;
  std::vector<std::string> names;
  // Data row (0-based, header excluded) each kept row came from.
  std::vector<size_t> source_rows;
};

// Reads a headered numeric CSV in full. Used where the sensitive values must
// stay unread, such as before training in the trajectory pipeline.
absl::StatusOr<FeatureTable> LoadFeaturesCsv(const std::string& path,
                                             const MissingPolicy& policy,
                                             const CsvOptions& options = {},
                                             LoadStats* stats = nullptr);

// Writes features (header = feature names) and the sensitive values to a
// separate sidecar file. Values use round-trip precision.
absl::Status WriteDatasetCsv(const Dataset& ds, const std::string& features_path,
                             const std::string& sidecar_path);

// Reads a single-column sidecar (header + one value per line).
absl::StatusOr<std::vector<double>> ReadSidecar(const std::string& path);

struct FilterResult {
  Dataset dataset;
  std::vector<std::string> removed;
};

// Drops every feature whose |Pearson| with the sensitive vector exceeds
// `threshold` (strictly). Constant features have no defined correlation and
// are kept. This is the only place sensitive values meet the features.
absl::StatusOr<FilterResult> FilterCorrelatedFeatures(const Dataset& ds,
                                                      double threshold);

// Z-scores each feature column (population variance).
absl::StatusOr<Dataset> Standardize(const Dataset& ds);

struct SyntheticSpec {
  int n_groups = 5;
  int n_per_group = 200;
  int d = 22;
  double max_feature_corr = 0.35;
  bool noise_scale_gradient = true;
  // With the gradient flag, group g of G has noise scale
  // noise_scale_ratio^(g / (G - 1)): 1 for the first group, the full ratio
  // for the last.
  double noise_scale_ratio = 32.0;
  // Correlation target of feature f is max_feature_corr * signal_decay^f.
  double signal_decay = 0.1;
  uint64_t seed = 7;

  absl::Status Validate() const;
};

struct SyntheticData {
  Dataset dataset;
  // Group labels in their true order: 1..G. The sensitive value of every
  // row is its group label.
  std::vector<int> ground_truth_order;
  // Per-group noise standard deviation actually used.
  std::vector<double> noise_scales;
  // Largest |Pearson(feature, sensitive)| over the emitted features.
  double max_abs_feature_corr = 0.0;
};

// Planted ordinal structure: G groups, every feature a nondecreasing (or
// nonincreasing) linear profile of the group index plus Gaussian noise, with
// the amplitude solved so the feature's measured |corr| meets its target
// without exceeding the cap. With the gradient flag the noise scale grows
// geometrically with the group index.
absl::StatusOr<SyntheticData> SynthOrdinal(const SyntheticSpec& spec);

}  // namespace somaudit

#endif  // SOMAUDIT_DATASET_H_
