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

#ifndef SOMAUDIT_KMEANS_H_
#define SOMAUDIT_KMEANS_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "somaudit/matrix.h"

namespace somaudit {

struct KMeansResult {
  Matrix centers;               // k x dims
  std::vector<int> assignment;  // per point
  double inertia = 0.0;         // sum of squared distances to centers
};

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
};

// Lloyd's algorithm from k-means++ seeds; restart r draws from a stream
// derived from (seed, r). The lowest-inertia run wins, earliest on ties.
absl::StatusOr<KMeansResult> KMeans(const Matrix& points, int k, uint64_t seed,
                                    const KMeansOptions& options = {});

size_t CountDistinctRows(const Matrix& points);

// Mean silhouette coefficient. Uses at most `max_points` evenly spaced
// points.
double MeanSilhouette(const Matrix& points, const std::vector<int>& assignment,
                      int k, size_t max_points = 2000);

}  // namespace somaudit

#endif  // SOMAUDIT_KMEANS_H_
