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

#include "somaudit/kmeans.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "somaudit/random.h"

namespace somaudit {
namespace {

Matrix SeedPlusPlus(const Matrix& points, int k, Rng& rng) {
  const size_t n = points.rows();
  Matrix centers(static_cast<size_t>(k), points.cols());
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  size_t pick = rng.UniformInt(n);
  for (int c = 0; c < k; ++c) {
    auto src = points.row(pick);
    std::copy(src.begin(), src.end(), centers.row(c).begin());
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], SquaredDistance(points.row(i), centers.row(c)));
      total += d2[i];
    }
    if (c + 1 == k) break;
    if (total <= 0.0) {
      pick = rng.UniformInt(n);
      continue;
    }
    double target = rng.Uniform01() * total;
    pick = n - 1;
    for (size_t i = 0; i < n; ++i) {
      target -= d2[i];
      if (target < 0.0 && d2[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  return centers;
}

KMeansResult Lloyd(const Matrix& points, Matrix centers, int max_iterations) {
  const size_t n = points.rows();
  const size_t dims = points.cols();
  const size_t k = centers.rows();
  KMeansResult result;
  result.assignment.assign(n, -1);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      for (size_t c = 0; c < k; ++c) {
        const double d2 = SquaredDistance(points.row(i), centers.row(c));
        if (d2 < best_d2) {
          best_d2 = d2;
          best = static_cast<int>(c);
        }
      }
      if (result.assignment[i] != best) {
        result.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed && it > 0) break;
    Matrix sums(k, dims);
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      const size_t c = static_cast<size_t>(result.assignment[i]);
      ++counts[c];
      auto row = points.row(i);
      for (size_t j = 0; j < dims; ++j) sums(c, j) += row[j];
    }
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // Re-seat an empty cluster on the point farthest from its center.
        size_t far = 0;
        double far_d2 = -1.0;
        for (size_t i = 0; i < n; ++i) {
          const double d2 = SquaredDistance(
              points.row(i), centers.row(static_cast<size_t>(result.assignment[i])));
          if (d2 > far_d2) {
            far_d2 = d2;
            far = i;
          }
        }
        auto src = points.row(far);
        std::copy(src.begin(), src.end(), centers.row(c).begin());
        result.assignment[far] = static_cast<int>(c);
        changed = true;
        continue;
      }
      for (size_t j = 0; j < dims; ++j) {
        centers(c, j) = sums(c, j) / static_cast<double>(counts[c]);
      }
    }
  }
  result.inertia = 0.0;
  for (size_t i = 0; i < n; ++i) {
    result.inertia += SquaredDistance(
        points.row(i), centers.row(static_cast<size_t>(result.assignment[i])));
  }
  result.centers = std::move(centers);
  return result;
}

}  // namespace

size_t CountDistinctRows(const Matrix& points) {
  std::set<std::vector<double>> distinct;
  for (size_t i = 0; i < points.rows(); ++i) {
    auto row = points.row(i);
    distinct.emplace(row.begin(), row.end());
  }
  return distinct.size();
}

absl::StatusOr<KMeansResult> KMeans(const Matrix& points, int k, uint64_t seed,
                                    const KMeansOptions& options) {
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (points.rows() == 0) return absl::InvalidArgumentError("no points");
  const size_t distinct = CountDistinctRows(points);
  if (static_cast<size_t>(k) > distinct) {
    return absl::InvalidArgumentError(absl::StrCat(
        "requested ", k, " clusters but only ", distinct, " distinct points"));
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  const int restarts = std::max(1, options.restarts);
  for (int r = 0; r < restarts; ++r) {
    Rng rng(Rng::Derive(seed, static_cast<uint64_t>(r)));
    KMeansResult run =
        Lloyd(points, SeedPlusPlus(points, k, rng), options.max_iterations);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best;
}

double MeanSilhouette(const Matrix& points, const std::vector<int>& assignment,
                      int k, size_t max_points) {
  const size_t n = points.rows();
  if (n < 2 || k < 2) return 0.0;
  std::vector<size_t> sample;
  const size_t count = std::min(n, max_points);
  for (size_t i = 0; i < count; ++i) sample.push_back(i * n / count);

  double total = 0.0;
  std::vector<double> sum(static_cast<size_t>(k));
  std::vector<size_t> size(static_cast<size_t>(k));
  for (size_t i : sample) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(size.begin(), size.end(), 0);
    for (size_t j : sample) {
      if (j == i) continue;
      const size_t c = static_cast<size_t>(assignment[j]);
      sum[c] += EuclideanDistance(points.row(i), points.row(j));
      ++size[c];
    }
    const size_t own = static_cast<size_t>(assignment[i]);
    if (size[own] == 0) continue;  // singleton: silhouette 0
    const double a = sum[own] / static_cast<double>(size[own]);
    double b = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < sum.size(); ++c) {
      if (c == own || size[c] == 0) continue;
      b = std::min(b, sum[c] / static_cast<double>(size[c]));
    }
    if (!std::isfinite(b)) continue;
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(sample.size());
}

}  // namespace somaudit
