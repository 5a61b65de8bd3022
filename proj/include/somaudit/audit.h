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

#ifndef SOMAUDIT_AUDIT_H_
#define SOMAUDIT_AUDIT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "somaudit/matrix.h"

namespace somaudit {

struct AxisCorrelation {
  std::string axis_name;
  double pearson = 0.0;
  double spearman = 0.0;
  double spearman_p = 1.0;
  int64_t n = 0;
  // spearman_p below 2^-52, displayed as "<= eps".
  bool p_below_epsilon = false;
};

// Per-axis association between a withheld attribute and the axes of an
// embedding. Max statistics keep their sign and may come from different
// axes.
struct LeakageReport {
  std::string method_name;
  std::string dataset_tag;
  uint64_t seed = 0;
  std::vector<AxisCorrelation> per_axis;
  // Constant axes, left out of the argmax.
  std::vector<std::string> excluded_axes;

  int max_pearson_axis = -1;
  int max_spearman_axis = -1;
  double max_abs_pearson = 0.0;   // signed value at argmax |pearson|
  double max_abs_spearman = 0.0;  // signed value at argmax |spearman|
  double max_spearman_p = 1.0;    // p of the max-spearman axis

  // Axis 0 Spearman, the "strongest by variance" reading for ordered bases
  // such as PCA.
  std::optional<double> first_axis_spearman;

  std::string config_hash;
};

// Correlates every column of `axes` with `sensitive`. Requires at least one
// non-constant axis.
absl::StatusOr<LeakageReport> ComputeLeakageReport(
    const Matrix& axes, std::span<const std::string> axis_names,
    std::span<const double> sensitive, const std::string& method_name,
    const std::string& dataset_tag, uint64_t seed);

struct RunAggregate {
  std::string method_name;
  std::string dataset_tag;
  int run_count = 0;
  // Statistics over |max| values across runs (sample std).
  double mean_spearman = 0.0;
  double std_spearman = 0.0;
  double mean_pearson = 0.0;
  double std_pearson = 0.0;
};

absl::StatusOr<RunAggregate> AggregateRuns(
    std::span<const LeakageReport> reports);

}  // namespace somaudit

#endif  // SOMAUDIT_AUDIT_H_
