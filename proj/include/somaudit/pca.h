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

#ifndef SOMAUDIT_PCA_H_
#define SOMAUDIT_PCA_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "somaudit/audit.h"
#include "somaudit/matrix.h"

namespace somaudit {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // row i is the eigenvector of values[i]
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Each eigenvector
// is sign-normalized so its largest-magnitude entry is positive.
EigenDecomposition SymmetricEigen(const Matrix& symmetric);

struct PcaModel {
  Matrix components;                    // m x d, orthonormal rows
  std::vector<double> explained_variance;  // nonincreasing
  std::vector<double> mean;             // d
  std::vector<std::string> warnings;

  size_t num_components() const { return components.rows(); }
};

// Top-m principal axes of the sample covariance. When the data has rank
// below m the model keeps only the nondegenerate axes and records a warning.
absl::StatusOr<PcaModel> PcaFit(const Matrix& x, int m);

// Default component count: 50, capped at min(N - 1, d).
int DefaultPcaComponents(size_t n, size_t d);

absl::StatusOr<Matrix> PcaTransform(const PcaModel& model, const Matrix& x);
absl::StatusOr<Matrix> PcaInverseTransform(const PcaModel& model,
                                           const Matrix& scores);

// Per-axis leakage over every PCA axis, reported under method "PCA". The
// first-by-variance axis is also recorded separately.
absl::StatusOr<LeakageReport> BaselineAudit(const Matrix& scores,
                                            std::span<const double> sensitive,
                                            const std::string& dataset_tag,
                                            uint64_t seed);

}  // namespace somaudit

#endif  // SOMAUDIT_PCA_H_
