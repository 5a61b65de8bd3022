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

#include "somaudit/report_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace somaudit {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Quotes a CSV cell when it holds a delimiter or quote.
std::string CsvCell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

template <typename T>
absl::Status Get(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) {
    return absl::InvalidArgumentError(absl::StrCat("report lacks '", key, "'"));
  }
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("report field '", key, "': ", e.what()));
  }
  return absl::OkStatus();
}

}  // namespace

std::string Fnv1aHex(std::string_view text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

Json ToJson(const AxisCorrelation& axis) {
  Json j;
  j["axis"] = axis.axis_name;
  j["pearson"] = axis.pearson;
  j["spearman"] = axis.spearman;
  j["spearman_p"] = axis.spearman_p;
  j["p_below_eps"] = axis.p_below_epsilon;
  j["n"] = axis.n;
  return j;
}

Json ToJson(const LeakageReport& report) {
  Json j;
  j["method"] = report.method_name;
  j["dataset"] = report.dataset_tag;
  j["seed"] = report.seed;
  j["config_hash"] = report.config_hash;
  const AxisCorrelation* best_p =
      report.max_pearson_axis >= 0 ? &report.per_axis[report.max_pearson_axis]
                                   : nullptr;
  const AxisCorrelation* best_s =
      report.max_spearman_axis >= 0
          ? &report.per_axis[report.max_spearman_axis]
          : nullptr;
  j["pearson"] = report.max_abs_pearson;
  j["pearson_axis"] = best_p != nullptr ? best_p->axis_name : "";
  j["spearman"] = report.max_abs_spearman;
  j["spearman_axis"] = best_s != nullptr ? best_s->axis_name : "";
  j["p"] = report.max_spearman_p;
  j["p_below_eps"] = best_s != nullptr && best_s->p_below_epsilon;
  if (report.first_axis_spearman) {
    j["first_axis_spearman"] = *report.first_axis_spearman;
  }
  Json axes = Json::array();
  for (const AxisCorrelation& a : report.per_axis) axes.push_back(ToJson(a));
  j["per_axis"] = std::move(axes);
  j["excluded_axes"] = report.excluded_axes;
  return j;
}

Json ToJson(const RunAggregate& aggregate) {
  Json j;
  j["method"] = aggregate.method_name;
  j["dataset"] = aggregate.dataset_tag;
  j["run_count"] = aggregate.run_count;
  j["mean_spearman"] = aggregate.mean_spearman;
  j["std_spearman"] = aggregate.std_spearman;
  j["mean_pearson"] = aggregate.mean_pearson;
  j["std_pearson"] = aggregate.std_pearson;
  return j;
}

absl::StatusOr<LeakageReport> LeakageReportFromJson(const Json& j) {
  if (!j.is_object()) return absl::InvalidArgumentError("report is not an object");
  LeakageReport r;
  absl::Status s;
  if (!(s = Get(j, "method", r.method_name)).ok()) return s;
  if (!(s = Get(j, "dataset", r.dataset_tag)).ok()) return s;
  if (!(s = Get(j, "seed", r.seed)).ok()) return s;
  if (!(s = Get(j, "pearson", r.max_abs_pearson)).ok()) return s;
  if (!(s = Get(j, "spearman", r.max_abs_spearman)).ok()) return s;
  if (!(s = Get(j, "p", r.max_spearman_p)).ok()) return s;
  if (j.contains("config_hash")) {
    if (!(s = Get(j, "config_hash", r.config_hash)).ok()) return s;
  }
  if (j.contains("first_axis_spearman")) {
    double v = 0.0;
    if (!(s = Get(j, "first_axis_spearman", v)).ok()) return s;
    r.first_axis_spearman = v;
  }
  if (j.contains("excluded_axes")) {
    if (!(s = Get(j, "excluded_axes", r.excluded_axes)).ok()) return s;
  }
  std::string pearson_axis, spearman_axis;
  if (j.contains("pearson_axis")) (void)Get(j, "pearson_axis", pearson_axis);
  if (j.contains("spearman_axis")) (void)Get(j, "spearman_axis", spearman_axis);
  if (j.contains("per_axis")) {
    if (!j["per_axis"].is_array()) {
      return absl::InvalidArgumentError("per_axis must be an array");
    }
    for (const Json& a : j["per_axis"]) {
      AxisCorrelation axis;
      if (!(s = Get(a, "axis", axis.axis_name)).ok()) return s;
      if (!(s = Get(a, "pearson", axis.pearson)).ok()) return s;
      if (!(s = Get(a, "spearman", axis.spearman)).ok()) return s;
      if (!(s = Get(a, "spearman_p", axis.spearman_p)).ok()) return s;
      if (!(s = Get(a, "n", axis.n)).ok()) return s;
      if (a.contains("p_below_eps")) {
        if (!(s = Get(a, "p_below_eps", axis.p_below_epsilon)).ok()) return s;
      }
      const int index = static_cast<int>(r.per_axis.size());
      if (axis.axis_name == pearson_axis && r.max_pearson_axis < 0) {
        r.max_pearson_axis = index;
      }
      if (axis.axis_name == spearman_axis && r.max_spearman_axis < 0) {
        r.max_spearman_axis = index;
      }
      r.per_axis.push_back(std::move(axis));
    }
  }
  return r;
}

std::string LeakageReportCsv(const LeakageReport& report) {
  std::ostringstream out;
  out << "method,dataset,seed,axis,pearson,spearman,spearman_p,p_below_eps,n,"
         "is_max_pearson,is_max_spearman\n";
  for (size_t i = 0; i < report.per_axis.size(); ++i) {
    const AxisCorrelation& a = report.per_axis[i];
    out << CsvCell(report.method_name) << ',' << CsvCell(report.dataset_tag)
        << ',' << report.seed << ',' << CsvCell(a.axis_name) << ','
        << FormatDouble(a.pearson) << ',' << FormatDouble(a.spearman) << ','
        << FormatDouble(a.spearman_p) << ',' << (a.p_below_epsilon ? 1 : 0)
        << ',' << a.n << ','
        << (static_cast<int>(i) == report.max_pearson_axis ? 1 : 0) << ','
        << (static_cast<int>(i) == report.max_spearman_axis ? 1 : 0) << '\n';
  }
  return out.str();
}

const char* AdjacencyModeName(AdjacencyMode mode) {
  return mode == AdjacencyMode::kStrict ? "strict" : "chain";
}

absl::StatusOr<AdjacencyMode> ParseAdjacencyMode(std::string_view name) {
  if (name == "strict") return AdjacencyMode::kStrict;
  if (name == "chain") return AdjacencyMode::kChain;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown adjacency mode '", std::string(name), "' (strict|chain)"));
}

Json ToJson(const TrajectoryRun& run) {
  Json j;
  Json centroids = Json::array();
  for (size_t i = 0; i < run.centroids.size(); ++i) {
    Json c;
    c["index"] = i;
    c["x"] = run.centroids.centroids(i, 0);
    c["y"] = run.centroids.centroids(i, 1);
    c["activation"] = run.centroids.centroids(i, 2);
    size_t members = 0;
    for (int a : run.centroids.assignment) members += a == static_cast<int>(i);
    c["members"] = members;
    centroids.push_back(std::move(c));
  }
  j["centroids"] = std::move(centroids);
  if (run.true_order) j["true_order"] = *run.true_order;
  Json graphs = Json::array();
  for (size_t g = 0; g < run.graphs.size(); ++g) {
    const TrajectoryGraph& graph = run.graphs[g];
    Json gj;
    gj["mode"] = AdjacencyModeName(graph.mode);
    Json edges = Json::array();
    for (const auto& [from, to] : graph.Edges()) edges.push_back({from, to});
    gj["edges"] = std::move(edges);
    gj["orderings"] = run.orderings[g];
    if (g < run.accuracy.size()) gj["recovery_accuracy"] = run.accuracy[g];
    graphs.push_back(std::move(gj));
  }
  j["graphs"] = std::move(graphs);
  return j;
}

Json ErrorJson(const absl::Status& status) {
  Json j;
  j["error"]["code"] = absl::StatusCodeToString(status.code());
  j["error"]["message"] = std::string(status.message());
  return j;
}

absl::Status WriteTextFile(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << text;
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::Status WriteJsonFile(const std::string& path, const Json& j) {
  return WriteTextFile(path, j.dump(2) + "\n");
}

absl::StatusOr<Json> ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open file: ", path));
  Json j = Json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": malformed JSON"));
  }
  return j;
}

}  // namespace somaudit
