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

#include "somaudit/trajectory.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "somaudit/kmeans.h"
#include "somaudit/status_macros.h"

namespace somaudit {
namespace {

Matrix BmuPositions(const Embedding3D& emb) {
  Matrix xy(emb.size(), 2);
  for (size_t i = 0; i < emb.size(); ++i) {
    xy(i, 0) = emb.x(i);
    xy(i, 1) = emb.y(i);
  }
  return xy;
}

size_t NearestCell(double v, size_t limit) {
  const double r = std::round(v);
  if (r <= 0.0) return 0;
  return std::min(static_cast<size_t>(r), limit - 1);
}

}  // namespace

std::vector<std::pair<int, int>> TrajectoryGraph::Edges() const {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (HasEdge(i, j)) edges.emplace_back(i, j);
    }
  }
  return edges;
}

int TrajectoryGraph::OutDegree(int node) const {
  int deg = 0;
  for (int j = 0; j < n; ++j) deg += HasEdge(node, j) ? 1 : 0;
  return deg;
}

int TrajectoryGraph::InDegree(int node) const {
  int deg = 0;
  for (int i = 0; i < n; ++i) deg += HasEdge(i, node) ? 1 : 0;
  return deg;
}

bool TrajectoryGraph::IsAcyclic() const {
  // Kahn's algorithm.
  std::vector<int> indeg(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) indeg[j] = InDegree(j);
  std::vector<int> ready;
  for (int j = 0; j < n; ++j) {
    if (indeg[j] == 0) ready.push_back(j);
  }
  int removed = 0;
  while (!ready.empty()) {
    const int u = ready.back();
    ready.pop_back();
    ++removed;
    for (int v = 0; v < n; ++v) {
      if (HasEdge(u, v) && --indeg[v] == 0) ready.push_back(v);
    }
  }
  return removed == n;
}

absl::StatusOr<CentroidSet> FindCentroids(const Embedding3D& emb,
                                          const Matrix& dmap, int n_clusters,
                                          uint64_t seed) {
  if (n_clusters < 2) return absl::InvalidArgumentError("n_clusters must be >= 2");
  if (emb.size() == 0) return absl::InvalidArgumentError("empty embedding");
  if (dmap.rows() == 0 || dmap.cols() == 0) {
    return absl::InvalidArgumentError("empty distance map");
  }
  const Matrix xy = BmuPositions(emb);
  const size_t distinct = CountDistinctRows(xy);
  if (static_cast<size_t>(n_clusters) > distinct) {
    return absl::InvalidArgumentError(
        absl::StrCat("n_clusters=", n_clusters, " exceeds the ", distinct,
                     " distinct BMU positions"));
  }
  ASSIGN_OR_RETURN(KMeansResult km, KMeans(xy, n_clusters, seed));
  CentroidSet out;
  out.centroids = Matrix(static_cast<size_t>(n_clusters), 3);
  for (size_t c = 0; c < out.centroids.rows(); ++c) {
    const double x = km.centers(c, 0), y = km.centers(c, 1);
    out.centroids(c, 0) = x;
    out.centroids(c, 1) = y;
    out.centroids(c, 2) =
        dmap(NearestCell(y, dmap.rows()), NearestCell(x, dmap.cols()));
  }
  out.assignment = std::move(km.assignment);
  return out;
}

absl::StatusOr<int> ChooseClusterCount(const Embedding3D& emb, int min_k,
                                       int max_k, uint64_t seed) {
  if (min_k < 2 || max_k < min_k) {
    return absl::InvalidArgumentError("cluster range must satisfy 2 <= min <= max");
  }
  const Matrix xy = BmuPositions(emb);
  const int distinct = static_cast<int>(CountDistinctRows(xy));
  if (distinct < min_k) {
    return absl::InvalidArgumentError(absl::StrCat(
        "only ", distinct, " distinct BMU positions; need at least ", min_k));
  }
  int best_k = min_k;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int k = min_k; k <= std::min(max_k, distinct); ++k) {
    ASSIGN_OR_RETURN(KMeansResult km, KMeans(xy, k, seed));
    const double score = MeanSilhouette(xy, km.assignment, k);
    if (score > best_score) {
      best_score = score;
      best_k = k;
    }
  }
  return best_k;
}

absl::StatusOr<TrajectoryGraph> BuildAdjacency(const Matrix& centroids,
                                               double k, AdjacencyMode mode) {
  const size_t n = centroids.rows();
  if (n < 2) return absl::InvalidArgumentError("need at least 2 centroids");
  if (centroids.cols() != 3) {
    return absl::InvalidArgumentError("centroids must have 3 columns");
  }
  if (!centroids.AllFinite()) {
    return absl::InvalidArgumentError("centroids contain non-finite values");
  }
  double sum_x = 0.0, sum_y = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sum_x += centroids(i, 0);
    sum_y += centroids(i, 1);
  }
  if (sum_x == 0.0 || sum_y == 0.0) {
    return absl::InvalidArgumentError("centroid coordinate sums must be nonzero");
  }
  Matrix scaled(n, 3);
  for (size_t i = 0; i < n; ++i) {
    scaled(i, 0) = centroids(i, 0) / sum_x;
    scaled(i, 1) = centroids(i, 1) / sum_y;
    scaled(i, 2) = k * centroids(i, 2);
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return centroids(a, 2) < centroids(b, 2);
  });

  TrajectoryGraph g;
  g.n = static_cast<int>(n);
  g.mode = mode;
  g.adjacency.assign(n * n, 0);
  for (int i : order) {
    TrajectoryStep step;
    step.node = i;
    const bool has_out = g.OutDegree(i) > 0;
    const bool has_in = g.InDegree(i) > 0;
    if (has_out || (mode == AdjacencyMode::kStrict && has_in)) {
      step.skipped = true;
      g.trace.push_back(step);
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n; ++j) {
      if (!(centroids(i, 2) < centroids(j, 2))) continue;
      const double d = EuclideanDistance(scaled.row(i), scaled.row(j));
      if (d < best) {
        best = d;
        step.target = static_cast<int>(j);
      }
    }
    if (step.target >= 0) {
      step.distance = best;
      g.adjacency[static_cast<size_t>(i) * n + step.target] = 1;
    }
    g.trace.push_back(step);
  }
  return g;
}

std::vector<std::vector<int>> ExtractOrderings(const TrajectoryGraph& graph) {
  std::vector<std::vector<int>> paths;
  for (int s = 0; s < graph.n; ++s) {
    if (graph.InDegree(s) != 0 || graph.OutDegree(s) == 0) continue;
    std::vector<int> path = {s};
    std::vector<bool> seen(static_cast<size_t>(graph.n), false);
    seen[s] = true;
    int cur = s;
    while (true) {
      int next = -1;
      for (int j = 0; j < graph.n; ++j) {
        if (graph.HasEdge(cur, j) && !seen[j]) {
          next = j;
          break;
        }
      }
      if (next < 0) break;
      seen[next] = true;
      path.push_back(next);
      cur = next;
    }
    paths.push_back(std::move(path));
  }
  std::stable_sort(paths.begin(), paths.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     return a.size() > b.size();
                   });
  return paths;
}

absl::StatusOr<double> RecoveryAccuracy(const TrajectoryGraph& graph,
                                        std::span<const int> true_order) {
  if (true_order.size() < 2) {
    return absl::InvalidArgumentError("true order needs at least 2 centroids");
  }
  std::set<int> scored;
  for (int c : true_order) {
    if (c < 0 || c >= graph.n) {
      return absl::InvalidArgumentError(
          absl::StrCat("true order references unknown centroid ", c));
    }
    if (!scored.insert(c).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("centroid ", c, " repeated in true order"));
    }
  }
  std::set<std::pair<int, int>> truth;
  for (size_t i = 0; i + 1 < true_order.size(); ++i) {
    truth.emplace(true_order[i], true_order[i + 1]);
  }
  size_t hits = 0, extra = 0;
  for (const auto& e : graph.Edges()) {
    if (!scored.count(e.first) || !scored.count(e.second)) continue;
    if (truth.count(e)) {
      ++hits;
    } else {
      ++extra;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size() + extra);
}

std::vector<int> TrueOrderFromLabels(const CentroidSet& centroids,
                                     std::span<const double> labels,
                                     std::span<const double> excluded_labels) {
  const size_t n = centroids.size();
  std::vector<std::map<double, size_t>> counts(n);
  std::vector<double> sums(n, 0.0);
  std::vector<size_t> sizes(n, 0);
  for (size_t i = 0; i < centroids.assignment.size() && i < labels.size(); ++i) {
    const size_t c = static_cast<size_t>(centroids.assignment[i]);
    ++counts[c][labels[i]];
    sums[c] += labels[i];
    ++sizes[c];
  }
  struct Entry {
    int index;
    double mode;
    double mean;
  };
  std::vector<Entry> entries;
  for (size_t c = 0; c < n; ++c) {
    if (sizes[c] == 0) continue;
    double mode = 0.0;
    size_t mode_count = 0;
    for (const auto& [label, count] : counts[c]) {
      if (count > mode_count) {
        mode = label;
        mode_count = count;
      }
    }
    if (std::find(excluded_labels.begin(), excluded_labels.end(), mode) !=
        excluded_labels.end()) {
      continue;
    }
    entries.push_back({static_cast<int>(c), mode,
                       sums[c] / static_cast<double>(sizes[c])});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.mode != b.mode) return a.mode < b.mode;
    if (a.mean != b.mean) return a.mean < b.mean;
    return a.index < b.index;
  });
  std::vector<int> order;
  for (const Entry& e : entries) order.push_back(e.index);
  return order;
}

}  // namespace somaudit
