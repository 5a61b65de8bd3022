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
#include <numeric>

#include "gtest/gtest.h"
#include "test_util.h"

namespace somaudit {
namespace {

using Edge = std::pair<int, int>;

TrajectoryGraph GraphWithEdges(int n, const std::vector<Edge>& edges) {
  TrajectoryGraph g;
  g.n = n;
  g.adjacency.assign(static_cast<size_t>(n) * n, 0);
  for (const auto& [a, b] : edges) g.adjacency[static_cast<size_t>(a) * n + b] = 1;
  return g;
}

Matrix FiveOnALine() {
  return Matrix::FromRows(
      {{1, 1, 0.1}, {2, 1, 0.2}, {3, 1, 0.3}, {4, 1, 0.4}, {5, 1, 0.5}});
}

TEST(BuildAdjacencyTest, TwoCentroidsSingleEdgeBothModes) {
  const Matrix c = Matrix::FromRows({{3, 4, 0.2}, {7, 1, 0.6}});
  for (AdjacencyMode mode : {AdjacencyMode::kStrict, AdjacencyMode::kChain}) {
    absl::StatusOr<TrajectoryGraph> g = BuildAdjacency(c, 10, mode);
    ASSERT_TRUE(g.ok()) << g.status();
    EXPECT_EQ(g->Edges(), (std::vector<Edge>{{0, 1}}));
  }
}

TEST(BuildAdjacencyTest, EqualActivationsGiveNoEdges) {
  const Matrix c = Matrix::FromRows({{1, 1, 0.5}, {2, 5, 0.5}, {6, 3, 0.5}});
  for (AdjacencyMode mode : {AdjacencyMode::kStrict, AdjacencyMode::kChain}) {
    const TrajectoryGraph g = *BuildAdjacency(c, 10, mode);
    EXPECT_TRUE(g.Edges().empty());
    ASSERT_EQ(g.trace.size(), 3u);
    for (const TrajectoryStep& s : g.trace) {
      EXPECT_FALSE(s.skipped);
      EXPECT_EQ(s.target, -1);
    }
  }
}

TEST(BuildAdjacencyTest, FiveOnALineStrictTrace) {
  const TrajectoryGraph g = *BuildAdjacency(FiveOnALine(), 10, AdjacencyMode::kStrict);
  // Visit 0: link to 1. Visit 1: has an in-edge, skip. Visit 2: link to 3.
  // Visit 3: skip. Visit 4: nothing higher.
  ASSERT_EQ(g.trace.size(), 5u);
  const int nodes[] = {0, 1, 2, 3, 4};
  const bool skipped[] = {false, true, false, true, false};
  const int targets[] = {1, -1, 3, -1, -1};
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(g.trace[i].node, nodes[i]);
    EXPECT_EQ(g.trace[i].skipped, skipped[i]) << i;
    EXPECT_EQ(g.trace[i].target, targets[i]) << i;
  }
  EXPECT_EQ(g.Edges(), (std::vector<Edge>{{0, 1}, {2, 3}}));
}

TEST(BuildAdjacencyTest, FiveOnALineChainIsFullPath) {
  const TrajectoryGraph g = *BuildAdjacency(FiveOnALine(), 10, AdjacencyMode::kChain);
  EXPECT_EQ(g.Edges(), (std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}, {3, 4}}));
  for (const TrajectoryStep& s : g.trace) EXPECT_FALSE(s.skipped);
}

TEST(BuildAdjacencyTest, DistanceUsesScaledCoordinates) {
  // Unit 0 sits next to unit 1 in raw x, but after x / sum(x) and k * z the
  // activation gap dominates and unit 2 is closer.
  const Matrix c = Matrix::FromRows({{1, 1, 0.1}, {2, 1, 0.9}, {30, 1, 0.2}});
  const TrajectoryGraph g = *BuildAdjacency(c, 100, AdjacencyMode::kChain);
  EXPECT_TRUE(g.HasEdge(0, 2));
  const double sx = 33.0, sy = 3.0;
  const double want = std::hypot(30 / sx - 1 / sx, 0.0 / sy, 100 * (0.2 - 0.1));
  EXPECT_NEAR(g.trace[0].distance, want, 1e-12);
}

TEST(BuildAdjacencyTest, StrictModeCanMergeTwoEdgesIntoOneNode) {
  // The first two visits both pick node 2, so strict mode is not a matching.
  const Matrix c = Matrix::FromRows({{1, 1, 0.1}, {10, 1, 0.2}, {2, 1, 0.3}});
  const TrajectoryGraph g = *BuildAdjacency(c, 1, AdjacencyMode::kStrict);
  EXPECT_EQ(g.Edges(), (std::vector<Edge>{{0, 2}, {1, 2}}));
  EXPECT_EQ(g.InDegree(2), 2);
  for (int i = 0; i < 3; ++i) EXPECT_LE(g.OutDegree(i), 1);
}

TEST(BuildAdjacencyTest, VisitOrderFollowsActivationNotIndex) {
  const Matrix c = Matrix::FromRows({{5, 1, 0.5}, {4, 1, 0.4}, {3, 1, 0.3}});
  const TrajectoryGraph g = *BuildAdjacency(c, 10, AdjacencyMode::kChain);
  EXPECT_EQ(g.trace[0].node, 2);
  EXPECT_EQ(g.Edges(), (std::vector<Edge>{{1, 0}, {2, 1}}));
}

TEST(BuildAdjacencyTest, Errors) {
  EXPECT_FALSE(BuildAdjacency(Matrix::FromRows({{1, 1, 1}}), 10, AdjacencyMode::kChain).ok());
  EXPECT_FALSE(BuildAdjacency(Matrix(3, 2, 1.0), 10, AdjacencyMode::kChain).ok());
  EXPECT_FALSE(BuildAdjacency(Matrix::FromRows({{0, 1, 1}, {0, 2, 2}}), 10,
                              AdjacencyMode::kChain)
                   .ok());
  Matrix nan = FiveOnALine();
  nan(2, 2) = std::nan("");
  EXPECT_FALSE(BuildAdjacency(nan, 10, AdjacencyMode::kChain).ok());
}

TEST(ExtractOrderingsTest, Examples) {
  EXPECT_EQ(ExtractOrderings(GraphWithEdges(3, {{0, 1}, {1, 2}})),
            (std::vector<std::vector<int>>{{0, 1, 2}}));
  EXPECT_EQ(ExtractOrderings(GraphWithEdges(4, {{0, 1}, {2, 3}})),
            (std::vector<std::vector<int>>{{0, 1}, {2, 3}}));
  EXPECT_TRUE(ExtractOrderings(GraphWithEdges(4, {})).empty());
}

TEST(ExtractOrderingsTest, LongestFirst) {
  EXPECT_EQ(ExtractOrderings(GraphWithEdges(5, {{0, 1}, {2, 3}, {3, 4}})),
            (std::vector<std::vector<int>>{{2, 3, 4}, {0, 1}}));
}

TEST(RecoveryAccuracyTest, IdenticalChain) {
  const std::vector<int> order = {0, 1, 2, 3, 4};
  EXPECT_EQ(*RecoveryAccuracy(GraphWithEdges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}), order),
            1.0);
}

TEST(RecoveryAccuracyTest, MatchingAgainstChain) {
  // Two hits, two true edges missed, no false edges: 2 / 4.
  const std::vector<int> order = {0, 1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(*RecoveryAccuracy(GraphWithEdges(5, {{0, 1}, {2, 3}}), order), 0.5);
}

TEST(RecoveryAccuracyTest, FalseEdgesEnlargeDenominator) {
  const std::vector<int> order = {0, 1, 2};
  // Hits {0->1}; false {2->0}; denominator 2 + 1.
  EXPECT_DOUBLE_EQ(*RecoveryAccuracy(GraphWithEdges(3, {{0, 1}, {2, 0}}), order),
                   1.0 / 3.0);
}

TEST(RecoveryAccuracyTest, UnscoredCentroidsIgnored) {
  const std::vector<int> order = {0, 2};
  EXPECT_DOUBLE_EQ(*RecoveryAccuracy(GraphWithEdges(3, {{0, 2}, {1, 2}}), order), 1.0);
}

TEST(RecoveryAccuracyTest, RandomPathHitsAllWithOneIn120) {
  const std::vector<int> truth = {0, 1, 2, 3, 4};
  std::vector<int> perm = truth;
  int perfect = 0, total = 0;
  do {
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < 5; ++i) edges.push_back({perm[i], perm[i + 1]});
    perfect += *RecoveryAccuracy(GraphWithEdges(5, edges), truth) == 1.0;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(total, 120);
  EXPECT_EQ(perfect, 1);
}

TEST(RecoveryAccuracyTest, Errors) {
  const TrajectoryGraph g = GraphWithEdges(3, {{0, 1}});
  const std::vector<int> one = {0}, bad = {0, 5}, dup = {0, 1, 0};
  EXPECT_FALSE(RecoveryAccuracy(g, one).ok());
  EXPECT_FALSE(RecoveryAccuracy(g, bad).ok());
  EXPECT_FALSE(RecoveryAccuracy(g, dup).ok());
}

Embedding3D Blobs(const std::vector<std::pair<double, double>>& centers, int per,
                  int k, Rng& rng) {
  Embedding3D emb;
  emb.k = k;
  emb.coords = Matrix(centers.size() * per, 3);
  size_t i = 0;
  for (const auto& [cx, cy] : centers) {
    for (int j = 0; j < per; ++j, ++i) {
      emb.coords(i, 0) = std::clamp(std::round(cx + rng.Normal()), 0.0, k - 1.0);
      emb.coords(i, 1) = std::clamp(std::round(cy + rng.Normal()), 0.0, k - 1.0);
      emb.coords(i, 2) = rng.Uniform01();
    }
  }
  return emb;
}

TEST(FindCentroidsTest, TwoCornerBlobs) {
  Rng rng(1);
  const Embedding3D emb = Blobs({{2, 2}, {17, 17}}, 50, 20, rng);
  Matrix dmap(20, 20, 0.0);
  absl::StatusOr<CentroidSet> cs = FindCentroids(emb, dmap, 2, 1);
  ASSERT_TRUE(cs.ok()) << cs.status();
  for (int blob = 0; blob < 2; ++blob) {
    double mx = 0, my = 0;
    for (int j = 0; j < 50; ++j) {
      mx += emb.x(blob * 50 + j) / 50;
      my += emb.y(blob * 50 + j) / 50;
    }
    const int c = cs->assignment[blob * 50];
    EXPECT_NEAR(cs->centroids(c, 0), mx, 1.0);
    EXPECT_NEAR(cs->centroids(c, 1), my, 1.0);
  }
}

TEST(FindCentroidsTest, OneCentroidPerCellReadsActivation) {
  Embedding3D emb;
  emb.k = 4;
  emb.coords = Matrix::FromRows({{0, 0, 0}, {3, 1, 0}, {3, 1, 0}, {1, 2, 0}});
  Matrix dmap(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) dmap(r, c) = 0.1 * r + 0.01 * c;
  }
  absl::StatusOr<CentroidSet> cs = FindCentroids(emb, dmap, 3, 1);
  ASSERT_TRUE(cs.ok()) << cs.status();
  for (size_t i = 0; i < cs->size(); ++i) {
    const double x = cs->centroids(i, 0), y = cs->centroids(i, 1);
    EXPECT_EQ(x, std::round(x));
    EXPECT_EQ(y, std::round(y));
    EXPECT_DOUBLE_EQ(cs->activation(i), dmap(static_cast<size_t>(y), static_cast<size_t>(x)));
  }
}

TEST(FindCentroidsTest, Errors) {
  Embedding3D emb;
  emb.k = 4;
  emb.coords = Matrix::FromRows({{0, 0, 0}, {1, 1, 0}});
  const Matrix dmap(4, 4, 0.0);
  EXPECT_FALSE(FindCentroids(emb, dmap, 1).ok());
  EXPECT_FALSE(FindCentroids(emb, dmap, 3).ok());
  EXPECT_FALSE(FindCentroids(Embedding3D{}, dmap, 2).ok());
}

TEST(ChooseClusterCountTest, FindsThreeBlobs) {
  Rng rng(2);
  const Embedding3D emb = Blobs({{3, 3}, {30, 4}, {16, 30}}, 60, 34, rng);
  absl::StatusOr<int> k = ChooseClusterCount(emb, 2, 8, 1);
  ASSERT_TRUE(k.ok()) << k.status();
  EXPECT_EQ(*k, 3);
}

TEST(TrueOrderFromLabelsTest, MajorityLabelOrder) {
  CentroidSet cs;
  cs.centroids = Matrix(3, 3, 0.0);
  cs.assignment = {0, 0, 1, 1, 1, 2, 2};
  const std::vector<double> labels = {3, 3, 1, 1, 2, 2, 2};
  EXPECT_EQ(TrueOrderFromLabels(cs, labels), (std::vector<int>{1, 2, 0}));
  const std::vector<double> excluded = {2};
  EXPECT_EQ(TrueOrderFromLabels(cs, labels, excluded), (std::vector<int>{1, 0}));
}

}  // namespace
}  // namespace somaudit
