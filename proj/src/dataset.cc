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

#include "somaudit/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "somaudit/random.h"
#include "somaudit/stats.h"
#include "somaudit/status_macros.h"

namespace somaudit {
namespace {

std::string Trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Splits one CSV record. Double-quoted fields may contain the delimiter;
// "" inside quotes is a literal quote.
std::vector<std::string> SplitRecord(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      fields.push_back(Trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(Trim(cur));
  return fields;
}

bool GetRecord(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!Trim(line).empty()) return true;
  }
  return false;
}

std::optional<double> ParseNumber(const std::string& cell) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

struct RawTable {
  std::vector<std::string> header;
  // Missing cells are NaN.
  std::vector<std::vector<double>> rows;
};

absl::StatusOr<RawTable> ReadTable(std::istream& in, const CsvOptions& options,
                                   const std::string& source) {
  RawTable table;
  std::string line;
  if (!GetRecord(in, line)) {
    return absl::InvalidArgumentError(absl::StrCat(source, ": empty file"));
  }
  const std::vector<std::string> header = SplitRecord(line, options.delimiter);
  std::vector<size_t> keep;
  for (size_t c = 0; c < header.size(); ++c) {
    if (std::find(options.ignore_columns.begin(), options.ignore_columns.end(),
                  header[c]) == options.ignore_columns.end()) {
      keep.push_back(c);
      table.header.push_back(header[c]);
    }
  }
  size_t line_no = 1;
  while (GetRecord(in, line)) {
    ++line_no;
    const std::vector<std::string> fields = SplitRecord(line, options.delimiter);
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat(source, ":", line_no, ": expected ", header.size(),
                       " fields, found ", fields.size()));
    }
    std::vector<double> row;
    row.reserve(keep.size());
    for (size_t c : keep) {
      const std::string& cell = fields[c];
      const bool missing =
          cell.empty() ||
          std::find(options.missing_tokens.begin(), options.missing_tokens.end(),
                    cell) != options.missing_tokens.end();
      if (missing) {
        row.push_back(std::nan(""));
        continue;
      }
      std::optional<double> v = ParseNumber(cell);
      if (!v) {
        return absl::InvalidArgumentError(
            absl::StrCat(source, ":", line_no, ": non-numeric cell '", cell,
                         "' in column '", header[c], "'"));
      }
      row.push_back(*v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

// Applies the missing policy in place; returns surviving row indices.
std::vector<size_t> ApplyPolicy(std::vector<std::vector<double>>& rows,
                                const MissingPolicy& policy,
                                LoadStats& stats) {
  std::vector<size_t> kept;
  for (size_t r = 0; r < rows.size(); ++r) {
    bool has_missing = false;
    for (double& v : rows[r]) {
      if (std::isnan(v)) {
        has_missing = true;
        if (policy.mode() == MissingPolicy::Mode::kReplaceWithConstant) {
          v = policy.value();
          ++stats.cells_replaced;
        }
      }
    }
    if (has_missing && policy.mode() == MissingPolicy::Mode::kDropRows) {
      ++stats.rows_dropped;
      continue;
    }
    kept.push_back(r);
  }
  return kept;
}

absl::StatusOr<std::ifstream> OpenForRead(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open file: ", path));
  }
  return in;
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

absl::Status Dataset::Validate(size_t min_rows) const {
  if (sensitive.size() != features.rows()) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitive length ", sensitive.size(), " != row count ",
                     features.rows()));
  }
  if (feature_names.size() != features.cols()) {
    return absl::InvalidArgumentError("feature name count != column count");
  }
  if (std::find(feature_names.begin(), feature_names.end(), sensitive_name) !=
      feature_names.end()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "sensitive column '", sensitive_name, "' present among features"));
  }
  if (features.cols() < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need at least 2 features, have ", features.cols()));
  }
  if (features.rows() < min_rows) {
    return absl::InvalidArgumentError(absl::StrCat(
        "need at least ", min_rows, " rows, have ", features.rows()));
  }
  if (!features.AllFinite()) {
    return absl::InvalidArgumentError("features contain non-finite values");
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> ParseCsv(std::istream& in,
                                 const std::string& sensitive_column,
                                 const MissingPolicy& policy,
                                 const CsvOptions& options, LoadStats* stats) {
  ASSIGN_OR_RETURN(RawTable table, ReadTable(in, options, "csv"));
  auto it = std::find(table.header.begin(), table.header.end(), sensitive_column);
  if (it == table.header.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("sensitive column '", sensitive_column, "' not found"));
  }
  const size_t s_col = static_cast<size_t>(it - table.header.begin());

  LoadStats local;
  local.rows_read = table.rows.size();
  const std::vector<size_t> kept = ApplyPolicy(table.rows, policy, local);

  Dataset ds;
  ds.sensitive_name = sensitive_column;
  ds.provenance = "csv";
  for (size_t c = 0; c < table.header.size(); ++c) {
    if (c != s_col) ds.feature_names.push_back(table.header[c]);
  }
  ds.features = Matrix(kept.size(), ds.feature_names.size());
  ds.sensitive.resize(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    const std::vector<double>& src = table.rows[kept[i]];
    size_t out_c = 0;
    for (size_t c = 0; c < src.size(); ++c) {
      if (c == s_col) {
        ds.sensitive[i] = src[c];
      } else {
        ds.features(i, out_c++) = src[c];
      }
    }
  }
  if (stats != nullptr) *stats = local;
  RETURN_IF_ERROR(ds.Validate(options.min_rows));
  return ds;
}

absl::StatusOr<Dataset> LoadCsv(const std::string& path,
                                const std::string& sensitive_column,
                                const MissingPolicy& policy,
                                const CsvOptions& options, LoadStats* stats) {
  ASSIGN_OR_RETURN(std::ifstream in, OpenForRead(path));
  absl::StatusOr<Dataset> ds =
      ParseCsv(in, sensitive_column, policy, options, stats);
  if (!ds.ok()) {
    return absl::Status(ds.status().code(),
                        absl::StrCat(path, ": ", ds.status().message()));
  }
  ds->provenance = path;
  return ds;
}

absl::StatusOr<Dataset> LoadCsvWithSidecar(const std::string& features_path,
                                           const std::string& sidecar_path,
                                           const MissingPolicy& policy,
                                           const CsvOptions& options,
                                           LoadStats* stats) {
  ASSIGN_OR_RETURN(std::ifstream fin, OpenForRead(features_path));
  ASSIGN_OR_RETURN(std::ifstream sin, OpenForRead(sidecar_path));
  ASSIGN_OR_RETURN(RawTable features, ReadTable(fin, options, features_path));
  CsvOptions sidecar_options = options;
  sidecar_options.ignore_columns.clear();
  ASSIGN_OR_RETURN(RawTable sidecar, ReadTable(sin, sidecar_options, sidecar_path));
  if (sidecar.header.size() != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat(sidecar_path, ": sidecar must have exactly one column"));
  }
  if (sidecar.rows.size() != features.rows.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "row count mismatch: ", features_path, " has ", features.rows.size(),
        ", ", sidecar_path, " has ", sidecar.rows.size()));
  }
  // Join so one policy decision covers both files.
  for (size_t r = 0; r < features.rows.size(); ++r) {
    features.rows[r].push_back(sidecar.rows[r][0]);
  }
  LoadStats local;
  local.rows_read = features.rows.size();
  const std::vector<size_t> kept = ApplyPolicy(features.rows, policy, local);

  Dataset ds;
  ds.feature_names = features.header;
  ds.sensitive_name = sidecar.header[0];
  ds.provenance = features_path;
  const size_t d = features.header.size();
  ds.features = Matrix(kept.size(), d);
  ds.sensitive.resize(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    const std::vector<double>& src = features.rows[kept[i]];
    for (size_t c = 0; c < d; ++c) ds.features(i, c) = src[c];
    ds.sensitive[i] = src[d];
  }
  if (stats != nullptr) *stats = local;
  RETURN_IF_ERROR(ds.Validate(options.min_rows));
  return ds;
}

absl::StatusOr<FeatureTable> LoadFeaturesCsv(const std::string& path,
                                             const MissingPolicy& policy,
                                             const CsvOptions& options,
                                             LoadStats* stats) {
  ASSIGN_OR_RETURN(std::ifstream in, OpenForRead(path));
  ASSIGN_OR_RETURN(RawTable table, ReadTable(in, options, path));
  LoadStats local;
  local.rows_read = table.rows.size();
  FeatureTable out;
  out.source_rows = ApplyPolicy(table.rows, policy, local);
  out.names = table.header;
  out.features = Matrix(out.source_rows.size(), out.names.size());
  for (size_t i = 0; i < out.source_rows.size(); ++i) {
    const std::vector<double>& src = table.rows[out.source_rows[i]];
    for (size_t c = 0; c < src.size(); ++c) out.features(i, c) = src[c];
  }
  if (stats != nullptr) *stats = local;
  if (out.names.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": no feature columns"));
  }
  if (out.features.rows() < options.min_rows) {
    return absl::InvalidArgumentError(absl::StrCat(
        path, ": need at least ", options.min_rows, " rows, have ",
        out.features.rows()));
  }
  return out;
}

absl::Status WriteDatasetCsv(const Dataset& ds, const std::string& features_path,
                             const std::string& sidecar_path) {
  std::ofstream fout(features_path);
  std::ofstream sout(sidecar_path);
  if (!fout || !sout) {
    return absl::PermissionDeniedError(absl::StrCat(
        "cannot write ", features_path, " or ", sidecar_path));
  }
  fout << absl::StrJoin(ds.feature_names, ",") << "\n";
  for (size_t r = 0; r < ds.num_rows(); ++r) {
    auto row = ds.features.row(r);
    for (size_t c = 0; c < row.size(); ++c) {
      if (c > 0) fout << ',';
      fout << FormatDouble(row[c]);
    }
    fout << "\n";
  }
  sout << ds.sensitive_name << "\n";
  for (double v : ds.sensitive) sout << FormatDouble(v) << "\n";
  if (!fout || !sout) {
    return absl::DataLossError("write failed");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<double>> ReadSidecar(const std::string& path) {
  ASSIGN_OR_RETURN(std::ifstream in, OpenForRead(path));
  ASSIGN_OR_RETURN(RawTable table, ReadTable(in, CsvOptions{}, path));
  if (table.header.size() != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": sidecar must have exactly one column"));
  }
  std::vector<double> out;
  out.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    if (std::isnan(table.rows[r][0])) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": missing value at data row ", r + 1));
    }
    out.push_back(table.rows[r][0]);
  }
  return out;
}

absl::StatusOr<FilterResult> FilterCorrelatedFeatures(const Dataset& ds,
                                                      double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("threshold must lie in (0, 1], got ", threshold));
  }
  FilterResult result;
  std::vector<size_t> keep;
  for (size_t c = 0; c < ds.num_features(); ++c) {
    const std::vector<double> column = ds.features.column(c);
    absl::StatusOr<double> r = Pearson(column, ds.sensitive);
    if (r.ok() && std::fabs(*r) > threshold) {
      result.removed.push_back(ds.feature_names[c]);
    } else {
      keep.push_back(c);
    }
  }
  if (keep.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "every feature exceeds |corr| ", threshold, " with '",
        ds.sensitive_name, "'"));
  }
  Dataset& out = result.dataset;
  out.features = ds.features.SelectColumns(keep);
  for (size_t c : keep) out.feature_names.push_back(ds.feature_names[c]);
  out.sensitive = ds.sensitive;
  out.sensitive_name = ds.sensitive_name;
  out.provenance = ds.provenance;
  return result;
}

absl::StatusOr<Dataset> Standardize(const Dataset& ds) {
  Dataset out = ds;
  for (size_t c = 0; c < ds.num_features(); ++c) {
    std::vector<double> column = ds.features.column(c);
    const double mean = Mean(column);
    const double sd = std::sqrt(PopulationVariance(column));
    if (!(sd > 0.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "column '", ds.feature_names[c], "' has zero variance"));
    }
    for (double& v : column) v = (v - mean) / sd;
    out.features.set_column(c, column);
  }
  return out;
}

absl::Status SyntheticSpec::Validate() const {
  if (n_groups < 2) return absl::InvalidArgumentError("n_groups must be >= 2");
  if (n_per_group < 1) {
    return absl::InvalidArgumentError("n_per_group must be positive");
  }
  if (d < 2) return absl::InvalidArgumentError("d must be >= 2");
  if (!(max_feature_corr > 0.0 && max_feature_corr < 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "max_feature_corr must lie in (0, 1), got ", max_feature_corr));
  }
  if (noise_scale_gradient &&
      !(noise_scale_ratio > 1.0 && std::isfinite(noise_scale_ratio))) {
    return absl::InvalidArgumentError(
        "noise_scale_ratio must be > 1 when the gradient is on");
  }
  if (!(signal_decay > 0.0 && signal_decay <= 1.0)) {
    return absl::InvalidArgumentError("signal_decay must lie in (0, 1]");
  }
  return absl::OkStatus();
}

namespace {

// Smallest amplitude multiplier at which sign * corr(a * g + noise, g)
// reaches `target`. sign*corr is nondecreasing in a >= 0.
double SolveAmplitude(std::span<const double> group,
                      std::span<const double> noise, double sign,
                      double target) {
  std::vector<double> column(group.size());
  auto signed_corr = [&](double a) {
    for (size_t i = 0; i < column.size(); ++i) {
      column[i] = sign * a * group[i] + noise[i];
    }
    return sign * Pearson(column, group).value();
  };
  if (signed_corr(0.0) >= target) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (signed_corr(hi) < target) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (signed_corr(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

absl::StatusOr<SyntheticData> SynthOrdinal(const SyntheticSpec& spec) {
  RETURN_IF_ERROR(spec.Validate());

  const size_t g_count = static_cast<size_t>(spec.n_groups);
  const size_t n = g_count * static_cast<size_t>(spec.n_per_group);
  const size_t d = static_cast<size_t>(spec.d);
  Rng rng(spec.seed);

  SyntheticData out;
  for (size_t g = 0; g < g_count; ++g) {
    const double frac = static_cast<double>(g) / static_cast<double>(g_count - 1);
    out.noise_scales.push_back(
        spec.noise_scale_gradient ? std::pow(spec.noise_scale_ratio, frac)
                                  : 1.0);
  }

  std::vector<size_t> order = Iota(n);
  rng.Shuffle(std::span<size_t>(order));
  std::vector<double> group(n);
  for (size_t i = 0; i < n; ++i) {
    group[i] = static_cast<double>(order[i] / static_cast<size_t>(spec.n_per_group));
  }

  Dataset& ds = out.dataset;
  ds.features = Matrix(n, d);
  ds.sensitive.resize(n);
  for (size_t i = 0; i < n; ++i) ds.sensitive[i] = group[i] + 1.0;
  ds.sensitive_name = "group";
  ds.provenance = absl::StrCat("synth:G=", spec.n_groups, ",n=", spec.n_per_group,
                               ",d=", spec.d, ",cap=", spec.max_feature_corr,
                               ",gradient=", spec.noise_scale_gradient ? 1 : 0,
                               ",ratio=", spec.noise_scale_ratio,
                               ",decay=", spec.signal_decay,
                               ",seed=", spec.seed);

  std::vector<double> noise(n);
  std::vector<double> column(n);
  double target = spec.max_feature_corr;
  for (size_t f = 0; f < d; ++f) {
    ds.feature_names.push_back(absl::StrCat("f", f));
    for (size_t i = 0; i < n; ++i) {
      noise[i] = rng.Normal() * out.noise_scales[static_cast<size_t>(group[i])];
    }
    const double sign = (f % 2 == 0) ? -1.0 : 1.0;
    const double amplitude = SolveAmplitude(group, noise, sign, target);
    for (size_t i = 0; i < n; ++i) {
      column[i] = sign * amplitude * group[i] + noise[i];
    }
    const double corr = std::fabs(Pearson(column, group).value());
    if (corr > spec.max_feature_corr) {
      return absl::InvalidArgumentError(absl::StrCat(
          "cannot satisfy correlation cap ", spec.max_feature_corr,
          ": feature f", f, " reaches |corr| ", corr, " from noise alone"));
    }
    out.max_abs_feature_corr = std::max(out.max_abs_feature_corr, corr);
    ds.features.set_column(f, column);
    target *= spec.signal_decay;
  }
  for (int g = 1; g <= spec.n_groups; ++g) out.ground_truth_order.push_back(g);
  return out;
}

}  // namespace somaudit
