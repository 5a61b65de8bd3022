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

#ifndef SOMAUDIT_TRAJECTORY_H_
#define SOMAUDIT_TRAJECTORY_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "somaudit/embedding.h"
#include "somaudit/matrix.h"

namespace somaudit {

// Cluster centers in lattice XY space with their distance-map activation.
struct CentroidSet {
  Matrix centroids;             // n x 3: (x, y, activation)
  std::vector<int> assignment;  // observation -> centroid index

  size_t size() const { return centroids.rows(); }
  double activation(size_t i) const { return centroids(i, 2); }
};

// k-means over the BMU (x, y) positions. Activation is the distance-map value
// of the lattice cell nearest each centroid.
absl::StatusOr<CentroidSet> FindCentroids(const Embedding3D& emb,
                                          const Matrix& dmap, int n_clusters,
                                          uint64_t seed = 0);

// Cluster count in [min_k, max_k] with the best mean silhouette over the BMU
// positions; lowest k wins ties.
absl::StatusOr<int> ChooseClusterCount(const Embedding3D& emb, int min_k = 2,
                                       int max_k = 12, uint64_t seed = 0);

enum class AdjacencyMode {
  // Skip a centroid that already has any incoming or outgoing edge.
  kStrict,
  // Skip only when the centroid already has an outgoing edge.
  kChain,
};

// One visit of the outer loop.
struct TrajectoryStep {
  int node = -1;
  bool skipped = false;
  int target = -1;  // -1 when no higher-activation centroid exists
  double distance = 0.0;
};

struct TrajectoryGraph {
  int n = 0;
  std::vector<uint8_t> adjacency;  // n x n, row = source
  AdjacencyMode mode = AdjacencyMode::kChain;
  std::vector<TrajectoryStep> trace;

  bool HasEdge(int from, int to) const {
    return adjacency[static_cast<size_t>(from) * n + to] != 0;
  }
  std::vector<std::pair<int, int>> Edges() const;
  int OutDegree(int node) const;
  int InDegree(int node) const;
  bool IsAcyclic() const;
};

// Trajectory adjacency construction. Centroids are visited in ascending
// activation order (input index breaks ties). Coordinates are scaled as
// (x / sum x, y / sum y, k * activation) and each visited centroid links to
// the nearest scaled centroid of strictly higher activation, lower index on
// distance ties.
absl::StatusOr<TrajectoryGraph> BuildAdjacency(const Matrix& centroids,
                                               double k, AdjacencyMode mode);

// Maximal paths from every in-degree-0 node with at least one edge, longest
// first (lowest start index on ties). Empty for an edgeless graph.
std::vector<std::vector<int>> ExtractOrderings(const TrajectoryGraph& graph);

// hits / (|true edges| + |false edges|), where true edges are consecutive
// pairs of `true_order` and only edges between centroids listed in
// `true_order` are scored.
absl::StatusOr<double> RecoveryAccuracy(const TrajectoryGraph& graph,
                                        std::span<const int> true_order);

// Centroid order implied by post-hoc labels: each centroid takes the most
// frequent label among its members (smaller label on ties); centroids whose
// label is in `excluded_labels` are dropped; the rest are sorted by label,
// then by mean member label, then index.
std::vector<int> TrueOrderFromLabels(const CentroidSet& centroids,
                                     std::span<const double> labels,
                                     std::span<const double> excluded_labels = {});

}  // namespace somaudit

#endif  // SOMAUDIT_TRAJECTORY_H_
