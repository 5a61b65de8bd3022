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

#ifndef SOMAUDIT_REPORT_IO_H_
#define SOMAUDIT_REPORT_IO_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "somaudit/audit.h"
#include "somaudit/trajectory.h"

namespace somaudit {

using Json = nlohmann::ordered_json;

// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string Fnv1aHex(std::string_view text);

Json ToJson(const AxisCorrelation& axis);
Json ToJson(const LeakageReport& report);
Json ToJson(const RunAggregate& aggregate);
absl::StatusOr<LeakageReport> LeakageReportFromJson(const Json& j);

// One row per axis: method, dataset, seed, axis, pearson, spearman,
// spearman_p, p_below_eps, n, max flags.
std::string LeakageReportCsv(const LeakageReport& report);

struct TrajectoryRun {
  CentroidSet centroids;
  std::vector<TrajectoryGraph> graphs;  // one per requested mode
  std::vector<std::vector<std::vector<int>>> orderings;  // per graph
  // Scoring, present only when labels were supplied.
  std::optional<std::vector<int>> true_order;
  std::vector<double> accuracy;  // per graph, empty without labels
};

const char* AdjacencyModeName(AdjacencyMode mode);
absl::StatusOr<AdjacencyMode> ParseAdjacencyMode(std::string_view name);

Json ToJson(const TrajectoryRun& run);

// Error document for a failed command: {"error": {"code", "message"}}.
Json ErrorJson(const absl::Status& status);

// Pretty-printed with a trailing newline; identical input gives identical
// bytes.
absl::Status WriteTextFile(const std::string& path, std::string_view text);
absl::Status WriteJsonFile(const std::string& path, const Json& j);
absl::StatusOr<Json> ReadJsonFile(const std::string& path);

}  // namespace somaudit

#endif  // SOMAUDIT_REPORT_IO_H_
