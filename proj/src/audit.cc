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

#include "somaudit/audit.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "somaudit/stats.h"

namespace somaudit {

absl::StatusOr<LeakageReport> ComputeLeakageReport(
    const Matrix& axes, std::span<const std::string> axis_names,
    std::span<const double> sensitive, const std::string& method_name,
    const std::string& dataset_tag, uint64_t seed) {
  if (axes.cols() == 0) {
    return absl::InvalidArgumentError("embedding has no axes");
  }
  if (axis_names.size() != axes.cols()) {
    return absl::InvalidArgumentError("axis name count != axis count");
  }
  if (sensitive.size() != axes.rows()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sensitive length ", sensitive.size(), " != embedding rows ",
        axes.rows()));
  }
  if (axes.rows() < 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 3 rows, have ", axes.rows()));
  }
  LeakageReport report;
  report.method_name = method_name;
  report.dataset_tag = dataset_tag;
  report.seed = seed;

  double best_pearson = -1.0;
  double best_spearman = -1.0;
  for (size_t a = 0; a < axes.cols(); ++a) {
    const std::vector<double> axis = axes.column(a);
    absl::StatusOr<double> pearson = Pearson(axis, sensitive);
    absl::StatusOr<SpearmanResult> spearman = Spearman(axis, sensitive);
    if (!pearson.ok() || !spearman.ok()) {
      // Shapes were checked above, so the only failure left is a constant
      // axis.
      report.excluded_axes.push_back(axis_names[a]);
      continue;
    }
    AxisCorrelation entry;
    entry.axis_name = axis_names[a];
    entry.pearson = *pearson;
    entry.spearman = spearman->rho;
    entry.spearman_p = spearman->p_value;
    entry.n = static_cast<int64_t>(axis.size());
    entry.p_below_epsilon = spearman->p_value < kPValueDisplayFloor;
    if (a == 0) report.first_axis_spearman = entry.spearman;
    // Strict comparison keeps the lowest axis index on ties.
    if (std::fabs(entry.pearson) > best_pearson) {
      best_pearson = std::fabs(entry.pearson);
      report.max_pearson_axis = static_cast<int>(report.per_axis.size());
      report.max_abs_pearson = entry.pearson;
    }
    if (std::fabs(entry.spearman) > best_spearman) {
      best_spearman = std::fabs(entry.spearman);
      report.max_spearman_axis = static_cast<int>(report.per_axis.size());
      report.max_abs_spearman = entry.spearman;
      report.max_spearman_p = entry.spearman_p;
    }
    report.per_axis.push_back(std::move(entry));
  }
  if (report.per_axis.empty()) {
    return absl::InvalidArgumentError(
        "every embedding axis (or the sensitive vector) is constant");
  }
  return report;
}

absl::StatusOr<RunAggregate> AggregateRuns(
    std::span<const LeakageReport> reports) {
  if (reports.empty()) {
    return absl::InvalidArgumentError("no reports to aggregate");
  }
  RunAggregate agg;
  agg.method_name = reports.front().method_name;
  agg.dataset_tag = reports.front().dataset_tag;
  std::vector<double> spearman, pearson;
  for (const LeakageReport& r : reports) {
    if (r.method_name != agg.method_name || r.dataset_tag != agg.dataset_tag) {
      return absl::InvalidArgumentError(absl::StrCat(
          "mixed tags: (", agg.method_name, ", ", agg.dataset_tag, ") vs (",
          r.method_name, ", ", r.dataset_tag, ")"));
    }
    spearman.push_back(std::fabs(r.max_abs_spearman));
    pearson.push_back(std::fabs(r.max_abs_pearson));
  }
  agg.run_count = static_cast<int>(reports.size());
  agg.mean_spearman = Mean(spearman);
  agg.std_spearman = SampleStdDev(spearman);
  agg.mean_pearson = Mean(pearson);
  agg.std_pearson = SampleStdDev(pearson);
  return agg;
}

}  // namespace somaudit
