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

#ifndef SOMAUDIT_EMBEDDING_H_
#define SOMAUDIT_EMBEDDING_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "somaudit/matrix.h"
#include "somaudit/som.h"

namespace somaudit {

// Per-observation (x, y, z): x is the BMU lattice column, y the BMU lattice
// row, z the distance to the BMU prototype.
struct Embedding3D {
  Matrix coords;  // N x 3
  int k = 0;

  size_t size() const { return coords.rows(); }
  double x(size_t i) const { return coords(i, 0); }
  double y(size_t i) const { return coords(i, 1); }
  double z(size_t i) const { return coords(i, 2); }
};

inline const std::vector<std::string>& EmbeddingAxisNames() {
  static const std::vector<std::string> kNames = {"x", "y", "z"};
  return kNames;
}

absl::StatusOr<Embedding3D> Embed(const SomMap& map, const Matrix& x);

// CSV with header row_id followed by one column per axis. Values are written
// with round-trip precision.
absl::Status WriteAxesCsv(const std::string& path,
                          const std::vector<std::string>& axis_names,
                          const Matrix& axes);

struct AxesTable {
  std::vector<std::string> axis_names;
  std::vector<int64_t> row_ids;
  Matrix axes;
};

absl::StatusOr<AxesTable> ReadAxesCsv(const std::string& path);

absl::Status WriteEmbeddingCsv(const std::string& path, const Embedding3D& emb);

// Reads a (row_id, x, y, z) file. The lattice side is inferred as
// max(x, y) + 1 unless given.
absl::StatusOr<Embedding3D> ReadEmbeddingCsv(const std::string& path,
                                             int k = 0);

}  // namespace somaudit

#endif  // SOMAUDIT_EMBEDDING_H_
