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

// somaudit: command-line front end.
//
//   somaudit synth --out data/
//   somaudit audit --input data/features.csv --sidecar data/sensitive.csv
//   somaudit trajectory --input data/features.csv --labels data/sensitive.csv
//   somaudit baseline --input ... ; somaudit plot ... ; somaudit report-merge ...
//
// Options may also come from a TOML/INI file given before the subcommand
// (somaudit --config run.toml audit ...), one section per subcommand; flags win.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "somaudit/pipeline.h"

namespace {

using somaudit::RunConfig;

// Flag values that need conversion after parsing.
struct RawRunFlags {
  std::string delimiter = ",";
  std::string decay = "inverse_time";
  std::string init = "principal_order";
  std::vector<std::string> modes;
  bool no_standardize = false;
  double filter = 0.0;
  int64_t iterations = 0;
  int k = 0;
  int k_cap = 0;
  int n_clusters = 0;
};

void AddRunOptions(CLI::App* cmd, RunConfig& cfg, RawRunFlags& raw) {
  cmd->add_option("-i,--input", cfg.input, "Dataset CSV")->required();
  cmd->add_option("--sidecar", cfg.sidecar, "One-column sensitive sidecar CSV");
  cmd->add_option("--sensitive-column", cfg.sensitive_column,
                  "Sensitive column inside the input (when no sidecar)");
  cmd->add_option("--missing", cfg.missing, "drop | constant")
      ->check(CLI::IsMember({"drop", "constant"}));
  cmd->add_option("--missing-value", cfg.missing_value,
                  "Replacement for missing cells under 'constant'");
  cmd->add_option("--missing-token", cfg.missing_tokens,
                  "Extra cell text treated as missing");
  cmd->add_option("--ignore-column", cfg.ignore_columns, "Column to skip");
  cmd->add_option("--delimiter", raw.delimiter, "Field delimiter (one char)");
  cmd->add_flag("--no-standardize", raw.no_standardize,
                "Train on raw feature values");
  cmd->add_option("--filter", raw.filter,
                  "Drop features with |corr| to the sensitive value >= this");
  cmd->add_option("--sigma0", cfg.train.sigma0, "Initial neighborhood width");
  cmd->add_option("--alpha0", cfg.train.alpha0, "Initial learning rate");
  cmd->add_option("--iterations", raw.iterations, "Presentations (default 10N)");
  cmd->add_option("--decay", raw.decay, "inverse_time | linear")
      ->check(CLI::IsMember({"inverse_time", "linear"}));
  cmd->add_option("--init", raw.init,
                  "sample_rows | principal_order | principal_plane")
      ->check(CLI::IsMember({"sample_rows", "principal_order", "principal_plane"}));
  cmd->add_option("--k", raw.k, "Lattice side override");
  cmd->add_option("--k-cap", raw.k_cap, "Upper bound on the lattice side");
  cmd->add_option("--seeds", cfg.seeds, "Seeds, one run each");
  cmd->add_option("-o,--out", cfg.output_dir, "Output directory");
  cmd->add_option("--dataset-tag", cfg.dataset_tag, "Dataset label in reports");
}

void AddTrajectoryOptions(CLI::App* cmd, RunConfig& cfg, RawRunFlags& raw) {
  cmd->add_option("--n-clusters", raw.n_clusters,
                  "Centroid count (silhouette sweep over 2..12 when unset)");
  cmd->add_option("--mode", raw.modes, "strict | chain (repeatable)")
      ->check(CLI::IsMember({"strict", "chain"}));
  cmd->add_option("--exclude-label", cfg.exclude_labels,
                  "Label left out of the scored order (repeatable)");
}

absl::Status Finish(RunConfig& cfg, const RawRunFlags& raw) {
  if (raw.delimiter.size() != 1) {
    return absl::InvalidArgumentError("--delimiter must be a single character");
  }
  cfg.delimiter = raw.delimiter[0];
  cfg.standardize = !raw.no_standardize;
  if (raw.filter != 0.0) cfg.filter_threshold = raw.filter;
  if (raw.iterations != 0) cfg.train.iterations = raw.iterations;
  cfg.train.decay = raw.decay == "linear" ? somaudit::DecaySchedule::kLinear
                                          : somaudit::DecaySchedule::kInverseTime;
  if (raw.init == "sample_rows") {
    cfg.train.init = somaudit::InitMethod::kSampleRows;
  } else if (raw.init == "principal_plane") {
    cfg.train.init = somaudit::InitMethod::kPrincipalPlane;
  } else {
    cfg.train.init = somaudit::InitMethod::kSampleRowsPrincipalOrder;
  }
  if (raw.k != 0) cfg.train.k_override = raw.k;
  if (raw.k_cap != 0) cfg.train.k_cap = raw.k_cap;
  if (raw.n_clusters != 0) cfg.n_clusters = raw.n_clusters;
  if (!raw.modes.empty()) {
    cfg.modes.clear();
    for (const std::string& m : raw.modes) {
      absl::StatusOr<somaudit::AdjacencyMode> mode = somaudit::ParseAdjacencyMode(m);
      if (!mode.ok()) return mode.status();
      cfg.modes.push_back(*mode);
    }
  }
  return cfg.Validate();
}

int Fail(const absl::Status& status, int code) {
  std::cerr << somaudit::ErrorJson(status).dump() << "\n";
  return code;
}

int Report(const absl::Status& status) {
  if (status.ok()) return somaudit::kExitOk;
  return Fail(status, somaudit::ExitCodeFor(status));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensitive-attribute leakage audit for self-organizing map embeddings"};
  app.require_subcommand(1);
  // Keys go under a section named after the subcommand, e.g. [audit].
  app.set_config("--config", "", "TOML/INI file with option defaults");

  RunConfig cfg;
  RawRunFlags raw;
  std::string labels_path;

  somaudit::SyntheticSpec spec;
  std::string synth_out = "synthetic";
  bool no_gradient = false;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic ordinal dataset");
  synth->add_option("-o,--out", synth_out, "Output directory");
  synth->add_option("--groups", spec.n_groups, "Number of ordinal groups");
  synth->add_option("--per-group", spec.n_per_group, "Rows per group");
  synth->add_option("--d", spec.d, "Feature count");
  synth->add_option("--max-corr", spec.max_feature_corr,
                    "Cap on each feature's |corr| with the group");
  synth->add_flag("--no-gradient", no_gradient, "Same noise scale for every group");
  synth->add_option("--noise-ratio", spec.noise_scale_ratio,
                    "Noise scale of the last group relative to the first");
  synth->add_option("--signal-decay", spec.signal_decay,
                    "Per-feature geometric decay of the correlation target");
  synth->add_option("--seed", spec.seed, "Generator seed");

  CLI::App* audit = app.add_subcommand("audit", "Train, embed and report leakage");
  AddRunOptions(audit, cfg, raw);

  CLI::App* baseline = app.add_subcommand("baseline", "PCA leakage baseline");
  AddRunOptions(baseline, cfg, raw);

  CLI::App* trajectory =
      app.add_subcommand("trajectory", "Centroid ordering from the distance map");
  AddRunOptions(trajectory, cfg, raw);
  AddTrajectoryOptions(trajectory, cfg, raw);
  trajectory->add_option("--labels", labels_path,
                         "One-column label sidecar for post-hoc scoring");

  std::string plot_embedding, plot_sidecar, plot_out = "embedding.svg";
  CLI::App* plot = app.add_subcommand("plot", "SVG scatter of an embedding CSV");
  plot->add_option("--embedding", plot_embedding, "Embedding CSV")->required();
  plot->add_option("--sidecar", plot_sidecar, "Group sidecar for colors");
  plot->add_option("-o,--out", plot_out, "Output SVG");

  std::vector<std::string> merge_inputs;
  std::string merge_out = "merged";
  CLI::App* merge = app.add_subcommand("report-merge", "Combine report JSON files");
  merge->add_option("reports", merge_inputs, "Report JSON files")->required();
  merge->add_option("-o,--out", merge_out, "Output prefix (.json and .csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? somaudit::kExitOk : somaudit::kExitUsage;
  }

  if (synth->parsed()) {
    spec.noise_scale_gradient = !no_gradient;
    return Report(somaudit::RunSynth(spec, synth_out));
  }
  if (plot->parsed()) {
    return Report(somaudit::RunPlot(plot_embedding, plot_sidecar, plot_out));
  }
  if (merge->parsed()) {
    return Report(somaudit::RunReportMerge(merge_inputs, merge_out));
  }

  if (absl::Status s = Finish(cfg, raw); !s.ok()) {
    return Fail(s, somaudit::kExitUsage);
  }
  if (audit->parsed()) {
    absl::StatusOr<somaudit::AuditOutcome> out = somaudit::RunAudit(cfg);
    if (!out.ok()) return Report(out.status());
    const somaudit::RunAggregate& a = out->aggregate;
    std::cout << a.method_name << " " << a.dataset_tag << ": spearman "
              << a.mean_spearman << " +/- " << a.std_spearman << " over "
              << a.run_count << " runs -> " << cfg.output_dir << "\n";
    return somaudit::kExitOk;
  }
  if (baseline->parsed()) {
    absl::StatusOr<somaudit::LeakageReport> r = somaudit::RunBaseline(cfg);
    if (!r.ok()) return Report(r.status());
    std::cout << "PCA " << r->dataset_tag << ": spearman " << r->max_abs_spearman
              << "\n";
    return somaudit::kExitOk;
  }
  absl::StatusOr<std::vector<somaudit::TrajectoryRun>> runs =
      somaudit::RunTrajectory(cfg, labels_path);
  if (!runs.ok()) return Report(runs.status());
  for (size_t i = 0; i < runs->size(); ++i) {
    const somaudit::TrajectoryRun& run = (*runs)[i];
    std::cout << "seed " << cfg.seeds[i] << ": " << run.centroids.size()
              << " centroids";
    for (size_t g = 0; g < run.graphs.size(); ++g) {
      std::cout << ", " << somaudit::AdjacencyModeName(run.graphs[g].mode) << " "
                << run.graphs[g].Edges().size() << " edges";
      if (g < run.accuracy.size()) std::cout << " acc " << run.accuracy[g];
    }
    std::cout << "\n";
  }
  return somaudit::kExitOk;
}
