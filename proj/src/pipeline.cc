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

#include "somaudit/pipeline.h"

#include <charconv>
#include <filesystem>
#include <map>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "somaudit/embedding.h"
#include "somaudit/pca.h"
#include "somaudit/status_macros.h"
#include "somaudit/svg.h"

namespace somaudit {
namespace {

namespace fs = std::filesystem;

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

absl::Status MakeDirs(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        absl::StrCat("cannot create directory ", dir, ": ", ec.message()));
  }
  return absl::OkStatus();
}

std::string SeedDir(const RunConfig& cfg, uint64_t seed) {
  return (fs::path(cfg.output_dir) / absl::StrCat("seed_", seed)).string();
}

MissingPolicy PolicyOf(const RunConfig& cfg) {
  return cfg.missing == "constant" ? MissingPolicy::ReplaceWithConstant(cfg.missing_value)
                                   : MissingPolicy::DropRows();
}

CsvOptions CsvOptionsOf(const RunConfig& cfg) {
  CsvOptions options;
  options.delimiter = cfg.delimiter;
  options.missing_tokens = cfg.missing_tokens;
  options.ignore_columns = cfg.ignore_columns;
  return options;
}

std::string MatrixCsv(const Matrix& m) {
  std::string out;
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) {
      if (c > 0) out.push_back(',');
      out += FormatDouble(m(r, c));
    }
    out.push_back('\n');
  }
  return out;
}

const char* DecayName(DecaySchedule d) {
  return d == DecaySchedule::kLinear ? "linear" : "inverse_time";
}

const char* InitName(InitMethod m) {
  switch (m) {
    case InitMethod::kSampleRows:
      return "sample_rows";
    case InitMethod::kSampleRowsPrincipalOrder:
      return "principal_order";
    case InitMethod::kPrincipalPlane:
      return "principal_plane";
  }
  return "?";
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  if (status.ok()) return kExitOk;
  if (status.code() == absl::StatusCode::kInternal) return kExitNumeric;
  return kExitData;
}

absl::Status RunConfig::Validate() const {
  if (input.empty()) return absl::InvalidArgumentError("no input file given");
  if (missing != "drop" && missing != "constant") {
    return absl::InvalidArgumentError(
        absl::StrCat("missing policy must be drop or constant, got '", missing, "'"));
  }
  if (filter_threshold && !(*filter_threshold > 0.0 && *filter_threshold <= 1.0)) {
    return absl::InvalidArgumentError("filter threshold must lie in (0, 1]");
  }
  if (n_clusters && *n_clusters < 2) {
    return absl::InvalidArgumentError("n_clusters must be >= 2");
  }
  if (seeds.empty()) return absl::InvalidArgumentError("seed list is empty");
  if (modes.empty()) return absl::InvalidArgumentError("no adjacency mode given");
  return train.Validate();
}

std::string RunConfig::DatasetTag() const {
  if (!dataset_tag.empty()) return dataset_tag;
  return fs::path(input).filename().string();
}

std::string RunConfig::Canonical() const {
  std::vector<std::string> mode_names;
  for (AdjacencyMode m : modes) mode_names.push_back(AdjacencyModeName(m));
  std::vector<std::string> exclude;
  for (double v : exclude_labels) exclude.push_back(FormatDouble(v));
  std::ostringstream s;
  s << "input=" << fs::path(input).filename().string() << "\n"
    << "sidecar=" << fs::path(sidecar).filename().string() << "\n"
    << "sensitive_column=" << sensitive_column << "\n"
    << "missing=" << missing << "\n"
    << "missing_value=" << FormatDouble(missing_value) << "\n"
    << "missing_tokens=" << absl::StrJoin(missing_tokens, "|") << "\n"
    << "ignore_columns=" << absl::StrJoin(ignore_columns, "|") << "\n"
    << "delimiter=" << delimiter << "\n"
    << "standardize=" << standardize << "\n"
    << "filter=" << (filter_threshold ? FormatDouble(*filter_threshold) : "none") << "\n"
    << "sigma0=" << FormatDouble(train.sigma0) << "\n"
    << "alpha0=" << FormatDouble(train.alpha0) << "\n"
    << "iterations=" << (train.iterations ? absl::StrCat(*train.iterations) : "10N") << "\n"
    << "decay=" << DecayName(train.decay) << "\n"
    << "init=" << InitName(train.init) << "\n"
    << "k_override=" << (train.k_override ? absl::StrCat(*train.k_override) : "none") << "\n"
    << "k_cap=" << (train.k_cap ? absl::StrCat(*train.k_cap) : "none") << "\n"
    << "n_clusters=" << (n_clusters ? absl::StrCat(*n_clusters) : "auto") << "\n"
    << "modes=" << absl::StrJoin(mode_names, "|") << "\n"
    << "exclude_labels=" << absl::StrJoin(exclude, "|") << "\n"
    << "seeds=" << absl::StrJoin(seeds, "|") << "\n"
    << "dataset=" << DatasetTag() << "\n";
  return s.str();
}

std::string RunConfig::Hash() const { return Fnv1aHex(Canonical()); }

absl::StatusOr<PreparedData> PrepareAuditData(const RunConfig& cfg) {
  RETURN_IF_ERROR(cfg.Validate());
  PreparedData out;
  const CsvOptions options = CsvOptionsOf(cfg);
  if (!cfg.sidecar.empty()) {
    ASSIGN_OR_RETURN(out.dataset, LoadCsvWithSidecar(cfg.input, cfg.sidecar,
                                                     PolicyOf(cfg), options,
                                                     &out.load_stats));
  } else {
    if (cfg.sensitive_column.empty()) {
      return absl::InvalidArgumentError(
          "give either a sensitive sidecar or the sensitive column name");
    }
    ASSIGN_OR_RETURN(out.dataset, LoadCsv(cfg.input, cfg.sensitive_column,
                                          PolicyOf(cfg), options, &out.load_stats));
  }
  if (cfg.filter_threshold) {
    ASSIGN_OR_RETURN(FilterResult filtered,
                     FilterCorrelatedFeatures(out.dataset, *cfg.filter_threshold));
    out.dataset = std::move(filtered.dataset);
    out.removed_features = std::move(filtered.removed);
  }
  if (cfg.standardize) {
    ASSIGN_OR_RETURN(out.dataset, Standardize(out.dataset));
  }
  return out;
}

absl::StatusOr<SeedArtifacts> AuditSeed(const Dataset& data, const RunConfig& cfg,
                                        uint64_t seed) {
  SeedArtifacts out;
  ASSIGN_OR_RETURN(out.map, Train(data.features, cfg.train, seed));
  ASSIGN_OR_RETURN(out.embedding, Embed(out.map, data.features));
  ASSIGN_OR_RETURN(out.report,
                   ComputeLeakageReport(out.embedding.coords, EmbeddingAxisNames(),
                                        data.sensitive, "SOM",
                                        cfg.DatasetTag(), seed));
  out.report.config_hash = cfg.Hash();
  return out;
}

absl::StatusOr<AuditOutcome> RunAudit(const RunConfig& cfg) {
  ASSIGN_OR_RETURN(PreparedData prepared, PrepareAuditData(cfg));
  AuditOutcome outcome;
  for (uint64_t seed : cfg.seeds) {
    ASSIGN_OR_RETURN(SeedArtifacts art, AuditSeed(prepared.dataset, cfg, seed));
    const std::string dir = SeedDir(cfg, seed);
    RETURN_IF_ERROR(MakeDirs(dir));
    const fs::path base(dir);
    RETURN_IF_ERROR(WriteEmbeddingCsv((base / "embedding.csv").string(), art.embedding));
    RETURN_IF_ERROR(WriteTextFile((base / "distance_map.csv").string(),
                                  MatrixCsv(DistanceMap(art.map))));
    RETURN_IF_ERROR(SaveSomMap(art.map, (base / "som.bin").string()));
    Json report = ToJson(art.report);
    report["removed_features"] = prepared.removed_features;
    RETURN_IF_ERROR(WriteJsonFile((base / "report.json").string(), report));
    RETURN_IF_ERROR(WriteTextFile((base / "report.csv").string(),
                                  LeakageReportCsv(art.report)));
    outcome.reports.push_back(std::move(art.report));
  }
  ASSIGN_OR_RETURN(outcome.aggregate, AggregateRuns(outcome.reports));
  Json agg = ToJson(outcome.aggregate);
  agg["config_hash"] = cfg.Hash();
  agg["seeds"] = cfg.seeds;
  Json z = Json::array();
  for (const LeakageReport& r : outcome.reports) {
    for (const AxisCorrelation& a : r.per_axis) {
      if (a.axis_name == "z") z.push_back(a.spearman);
    }
  }
  agg["z_spearman"] = std::move(z);
  agg["removed_features"] = prepared.removed_features;
  agg["rows_read"] = prepared.load_stats.rows_read;
  agg["rows_dropped"] = prepared.load_stats.rows_dropped;
  RETURN_IF_ERROR(WriteJsonFile(
      (fs::path(cfg.output_dir) / "aggregate.json").string(), agg));
  return outcome;
}

absl::StatusOr<LeakageReport> RunBaseline(const RunConfig& cfg) {
  ASSIGN_OR_RETURN(PreparedData prepared, PrepareAuditData(cfg));
  const Matrix& x = prepared.dataset.features;
  ASSIGN_OR_RETURN(PcaModel model,
                   PcaFit(x, DefaultPcaComponents(x.rows(), x.cols())));
  ASSIGN_OR_RETURN(Matrix scores, PcaTransform(model, x));
  ASSIGN_OR_RETURN(LeakageReport report,
                   BaselineAudit(scores, prepared.dataset.sensitive,
                                 cfg.DatasetTag(), 0));
  report.config_hash = cfg.Hash();
  const fs::path base = fs::path(cfg.output_dir) / "baseline";
  RETURN_IF_ERROR(MakeDirs(base.string()));
  std::vector<std::string> names;
  for (size_t a = 0; a < scores.cols(); ++a) names.push_back(absl::StrCat("pc", a));
  RETURN_IF_ERROR(WriteAxesCsv((base / "embedding.csv").string(), names, scores));
  Json j = ToJson(report);
  j["explained_variance"] = model.explained_variance;
  j["warnings"] = model.warnings;
  RETURN_IF_ERROR(WriteJsonFile((base / "report.json").string(), j));
  RETURN_IF_ERROR(WriteTextFile((base / "report.csv").string(), LeakageReportCsv(report)));
  return report;
}

absl::StatusOr<std::vector<TrajectoryRun>> RunTrajectory(
    const RunConfig& cfg, const std::string& labels_path) {
  if (cfg.input.empty()) return absl::InvalidArgumentError("no input file given");
  RETURN_IF_ERROR(cfg.train.Validate());
  if (cfg.seeds.empty()) return absl::InvalidArgumentError("seed list is empty");
  if (cfg.modes.empty()) return absl::InvalidArgumentError("no adjacency mode given");
  CsvOptions options = CsvOptionsOf(cfg);
  // A sensitive column inside the input is never read here.
  if (!cfg.sensitive_column.empty()) {
    options.ignore_columns.push_back(cfg.sensitive_column);
  }
  ASSIGN_OR_RETURN(FeatureTable table,
                   LoadFeaturesCsv(cfg.input, PolicyOf(cfg), options));
  Dataset features_only;
  features_only.features = std::move(table.features);
  features_only.feature_names = table.names;
  if (cfg.standardize) {
    ASSIGN_OR_RETURN(features_only, Standardize(features_only));
  }

  // Stage 1: everything that does not need labels, for every seed.
  std::vector<TrajectoryRun> runs;
  for (uint64_t seed : cfg.seeds) {
    ASSIGN_OR_RETURN(SomMap map, Train(features_only.features, cfg.train, seed));
    ASSIGN_OR_RETURN(Embedding3D emb, Embed(map, features_only.features));
    const Matrix dmap = DistanceMap(map);
    int n_clusters = 0;
    if (cfg.n_clusters) {
      n_clusters = *cfg.n_clusters;
    } else {
      ASSIGN_OR_RETURN(n_clusters, ChooseClusterCount(emb, 2, 12, seed));
    }
    TrajectoryRun run;
    ASSIGN_OR_RETURN(run.centroids, FindCentroids(emb, dmap, n_clusters, seed));
    for (AdjacencyMode mode : cfg.modes) {
      ASSIGN_OR_RETURN(TrajectoryGraph g,
                       BuildAdjacency(run.centroids.centroids, map.k(), mode));
      run.orderings.push_back(ExtractOrderings(g));
      run.graphs.push_back(std::move(g));
    }
    runs.push_back(std::move(run));
  }

  // Stage 2: post-hoc scoring.
  if (!labels_path.empty()) {
    ASSIGN_OR_RETURN(std::vector<double> labels, ReadSidecar(labels_path));
    std::vector<double> aligned;
    aligned.reserve(table.source_rows.size());
    for (size_t r : table.source_rows) {
      if (r >= labels.size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            labels_path, " has ", labels.size(), " rows; ", cfg.input,
            " has more"));
      }
      aligned.push_back(labels[r]);
    }
    for (TrajectoryRun& run : runs) {
      std::vector<int> order =
          TrueOrderFromLabels(run.centroids, aligned, cfg.exclude_labels);
      for (const TrajectoryGraph& g : run.graphs) {
        ASSIGN_OR_RETURN(double acc, RecoveryAccuracy(g, order));
        run.accuracy.push_back(acc);
      }
      run.true_order = std::move(order);
    }
  }

  Json summary;
  summary["dataset"] = cfg.DatasetTag();
  summary["config_hash"] = cfg.Hash();
  summary["seeds"] = cfg.seeds;
  Json per_seed = Json::array();
  for (size_t i = 0; i < runs.size(); ++i) {
    const std::string dir = SeedDir(cfg, cfg.seeds[i]);
    RETURN_IF_ERROR(MakeDirs(dir));
    Json j = ToJson(runs[i]);
    j["seed"] = cfg.seeds[i];
    j["config_hash"] = cfg.Hash();
    RETURN_IF_ERROR(WriteJsonFile((fs::path(dir) / "trajectory.json").string(), j));
    Json row;
    row["seed"] = cfg.seeds[i];
    row["n_clusters"] = runs[i].centroids.size();
    for (size_t g = 0; g < runs[i].graphs.size(); ++g) {
      const char* mode = AdjacencyModeName(runs[i].graphs[g].mode);
      row[absl::StrCat(mode, "_primary_ordering")] =
          runs[i].orderings[g].empty() ? std::vector<int>{} : runs[i].orderings[g][0];
      if (g < runs[i].accuracy.size()) {
        row[absl::StrCat(mode, "_accuracy")] = runs[i].accuracy[g];
      }
    }
    per_seed.push_back(std::move(row));
  }
  summary["runs"] = std::move(per_seed);
  RETURN_IF_ERROR(MakeDirs(cfg.output_dir));
  RETURN_IF_ERROR(WriteJsonFile(
      (fs::path(cfg.output_dir) / "trajectory.json").string(), summary));
  return runs;
}

absl::Status RunSynth(const SyntheticSpec& spec, const std::string& dir) {
  ASSIGN_OR_RETURN(SyntheticData data, SynthOrdinal(spec));
  RETURN_IF_ERROR(MakeDirs(dir));
  const fs::path base(dir);
  RETURN_IF_ERROR(WriteDatasetCsv(data.dataset, (base / "features.csv").string(),
                                  (base / "sensitive.csv").string()));
  Json j;
  j["ground_truth_order"] = data.ground_truth_order;
  j["noise_scales"] = data.noise_scales;
  j["max_abs_feature_corr"] = data.max_abs_feature_corr;
  j["provenance"] = data.dataset.provenance;
  return WriteJsonFile((base / "ground_truth.json").string(), j);
}

absl::Status RunPlot(const std::string& embedding_csv, const std::string& sidecar,
                     const std::string& out_svg) {
  ASSIGN_OR_RETURN(Embedding3D emb, ReadEmbeddingCsv(embedding_csv));
  std::vector<double> groups;
  if (!sidecar.empty()) {
    ASSIGN_OR_RETURN(groups, ReadSidecar(sidecar));
  }
  ASSIGN_OR_RETURN(std::string svg, RenderScatterSvg(emb, groups));
  return WriteTextFile(out_svg, svg);
}

absl::Status RunReportMerge(const std::vector<std::string>& inputs,
                            const std::string& out_prefix) {
  if (inputs.empty()) return absl::InvalidArgumentError("no reports to merge");
  std::vector<LeakageReport> reports;
  for (const std::string& path : inputs) {
    ASSIGN_OR_RETURN(Json j, ReadJsonFile(path));
    absl::StatusOr<LeakageReport> r = LeakageReportFromJson(j);
    if (!r.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": ", r.status().message()));
    }
    reports.push_back(std::move(*r));
  }
  // Groups keep first-seen order.
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::vector<LeakageReport>> groups;
  for (const LeakageReport& r : reports) {
    auto key = std::make_pair(r.method_name, r.dataset_tag);
    if (!groups.count(key)) keys.push_back(key);
    groups[key].push_back(r);
  }
  Json out;
  Json rows = Json::array();
  std::string csv = "method,dataset,seed,pearson,spearman,p,config_hash\n";
  for (const LeakageReport& r : reports) {
    Json row;
    row["method"] = r.method_name;
    row["dataset"] = r.dataset_tag;
    row["seed"] = r.seed;
    row["pearson"] = r.max_abs_pearson;
    row["spearman"] = r.max_abs_spearman;
    row["p"] = r.max_spearman_p;
    rows.push_back(std::move(row));
    absl::StrAppend(&csv, r.method_name, ",", r.dataset_tag, ",", r.seed, ",",
                    FormatDouble(r.max_abs_pearson), ",",
                    FormatDouble(r.max_abs_spearman), ",",
                    FormatDouble(r.max_spearman_p), ",", r.config_hash, "\n");
  }
  out["reports"] = std::move(rows);
  Json aggs = Json::array();
  for (const auto& key : keys) {
    ASSIGN_OR_RETURN(RunAggregate agg, AggregateRuns(groups[key]));
    aggs.push_back(ToJson(agg));
  }
  out["aggregates"] = std::move(aggs);
  RETURN_IF_ERROR(WriteJsonFile(out_prefix + ".json", out));
  return WriteTextFile(out_prefix + ".csv", csv);
}

}  // namespace somaudit
