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

#include "somaudit/embedding.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "somaudit/status_macros.h"

namespace somaudit {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

absl::StatusOr<Embedding3D> Embed(const SomMap& map, const Matrix& x) {
  if (x.cols() != static_cast<size_t>(map.d())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: map has d=", map.d(), ", data has ", x.cols()));
  }
  Embedding3D emb;
  emb.k = map.k();
  emb.coords = Matrix(x.rows(), 3);
  for (size_t i = 0; i < x.rows(); ++i) {
    ASSIGN_OR_RETURN(Bmu bmu, FindBmu(map, x.row(i)));
    emb.coords(i, 0) = bmu.col;
    emb.coords(i, 1) = bmu.row;
    emb.coords(i, 2) = bmu.distance;
  }
  return emb;
}

absl::Status WriteAxesCsv(const std::string& path,
                          const std::vector<std::string>& axis_names,
                          const Matrix& axes) {
  if (axis_names.size() != axes.cols()) {
    return absl::InvalidArgumentError("axis name count != column count");
  }
  std::ofstream out(path);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out << "row_id";
  for (const std::string& name : axis_names) out << ',' << name;
  out << '\n';
  for (size_t r = 0; r < axes.rows(); ++r) {
    out << r;
    for (double v : axes.row(r)) out << ',' << FormatDouble(v);
    out << '\n';
  }
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<AxesTable> ReadAxesCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open file: ", path));
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": empty file"));
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = absl::StrSplit(line, ',');
  if (header.size() < 2 || header[0] != "row_id") {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": header must start with row_id"));
  }
  AxesTable table;
  table.axis_names.assign(header.begin() + 1, header.end());
  std::vector<double> values;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = absl::StrSplit(line, ',');
    if (fields.size() != header.size()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ":", line_no, ": expected ", header.size(), " fields"));
    }
    int64_t id = 0;
    {
      auto [ptr, ec] = std::from_chars(fields[0].data(),
                                       fields[0].data() + fields[0].size(), id);
      if (ec != std::errc() || ptr != fields[0].data() + fields[0].size()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ":", line_no, ": bad row_id '", fields[0], "'"));
      }
    }
    table.row_ids.push_back(id);
    for (size_t c = 1; c < fields.size(); ++c) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(fields[c].data(),
                                       fields[c].data() + fields[c].size(), v);
      if (ec != std::errc() || ptr != fields[c].data() + fields[c].size() ||
          !std::isfinite(v)) {
        return absl::InvalidArgumentError(absl::StrCat(
            path, ":", line_no, ": non-numeric value '", fields[c], "'"));
      }
      values.push_back(v);
    }
  }
  table.axes = Matrix(table.row_ids.size(), table.axis_names.size());
  table.axes.data() = std::move(values);
  return table;
}

absl::Status WriteEmbeddingCsv(const std::string& path, const Embedding3D& emb) {
  return WriteAxesCsv(path, EmbeddingAxisNames(), emb.coords);
}

absl::StatusOr<Embedding3D> ReadEmbeddingCsv(const std::string& path, int k) {
  ASSIGN_OR_RETURN(AxesTable table, ReadAxesCsv(path));
  if (table.axis_names != EmbeddingAxisNames()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": expected columns row_id,x,y,z"));
  }
  Embedding3D emb;
  emb.coords = std::move(table.axes);
  int max_cell = 0;
  for (size_t i = 0; i < emb.size(); ++i) {
    const double x = emb.x(i), y = emb.y(i);
    if (x < 0 || y < 0 || x != std::floor(x) || y != std::floor(y) ||
        emb.z(i) < 0) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ": row ", i, " is not a lattice coordinate with z >= 0"));
    }
    max_cell = std::max(max_cell, static_cast<int>(std::max(x, y)));
  }
  emb.k = k > 0 ? k : max_cell + 1;
  return emb;
}

}  // namespace somaudit
