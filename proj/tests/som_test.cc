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

#include "somaudit/som.h"

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "test_util.h"

namespace somaudit {
namespace {

SomMap RandomMap(int k, int d, Rng& rng) {
  SomMap map(k, d, 0.7, 0.75, 0);
  for (double& v : map.prototypes().data()) v = rng.Normal();
  return map;
}

// Exhaustive scan written without the library's helpers.
Bmu BruteForceBmu(const SomMap& map, std::span<const double> x) {
  Bmu best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int r = 0; r < map.k(); ++r) {
    for (int c = 0; c < map.k(); ++c) {
      double d2 = 0.0;
      for (int j = 0; j < map.d(); ++j) {
        const double diff = map.prototype(r, c)[j] - x[j];
        d2 += diff * diff;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = {r, c, std::sqrt(d2)};
      }
    }
  }
  return best;
}

TEST(LatticeSizeTest, KnownValues) {
  EXPECT_EQ(LatticeSize(1), 5);
  EXPECT_EQ(LatticeSize(4018), 442);
  EXPECT_EQ(LatticeSize(27024), 1236);
  EXPECT_EQ(LatticeSize(1000), static_cast<int>(std::lround(5 * std::pow(1000.0, 0.54))));
}

TEST(LatticeSizeTest, OverrideAndCap) {
  TrainConfig cfg;
  EXPECT_EQ(ResolveLatticeSize(4018, cfg), 442);
  cfg.k_cap = 64;
  EXPECT_EQ(ResolveLatticeSize(4018, cfg), 64);
  cfg.k_override = 30;
  EXPECT_EQ(ResolveLatticeSize(4018, cfg), 30);
}

TEST(FindBmuTest, ExactMatch) {
  Rng rng(1);
  SomMap map = RandomMap(8, 4, rng);
  const std::vector<double> x(map.prototype(3, 7).begin(), map.prototype(3, 7).end());
  absl::StatusOr<Bmu> bmu = FindBmu(map, x);
  ASSERT_TRUE(bmu.ok());
  EXPECT_EQ(bmu->row, 3);
  EXPECT_EQ(bmu->col, 7);
  EXPECT_EQ(bmu->distance, 0.0);
}

TEST(FindBmuTest, TieGoesToRowMajorFirst) {
  SomMap map(2, 1, 0.7, 0.75, 0);
  map.prototype(0, 0)[0] = 10.0;
  map.prototype(0, 1)[0] = 1.0;
  map.prototype(1, 0)[0] = -1.0;
  map.prototype(1, 1)[0] = 10.0;
  const std::vector<double> x = {0.0};
  absl::StatusOr<Bmu> bmu = FindBmu(map, x);
  EXPECT_EQ(bmu->row, 0);
  EXPECT_EQ(bmu->col, 1);
  EXPECT_DOUBLE_EQ(bmu->distance, 1.0);
}

TEST(FindBmuTest, MatchesBruteForce) {
  Rng rng(2);
  SomMap map = RandomMap(8, 5, rng);
  for (int q = 0; q < 1000; ++q) {
    std::vector<double> x(5);
    for (double& v : x) v = rng.Normal();
    const Bmu got = *FindBmu(map, x);
    const Bmu want = BruteForceBmu(map, x);
    ASSERT_EQ(got.row, want.row);
    ASSERT_EQ(got.col, want.col);
    ASSERT_NEAR(got.distance, want.distance, 1e-12);
  }
}

TEST(FindBmuTest, DimensionMismatch) {
  Rng rng(3);
  SomMap map = RandomMap(4, 3, rng);
  const std::vector<double> x = {1.0, 2.0};
  EXPECT_FALSE(FindBmu(map, x).ok());
}

TEST(NeighborhoodTest, Gaussian) {
  EXPECT_EQ(NeighborhoodWeight(0.0, 0.7), 1.0);
  EXPECT_NEAR(NeighborhoodWeight(1.0, 0.7), std::exp(-1.0 / (2 * 0.49)), 1e-15);
}

TEST(DecayTest, Schedules) {
  EXPECT_EQ(DecayedRate(0.75, 0, 100, DecaySchedule::kInverseTime), 0.75);
  EXPECT_DOUBLE_EQ(DecayedRate(0.75, 50, 100, DecaySchedule::kInverseTime), 0.375);
  EXPECT_DOUBLE_EQ(DecayedRate(0.75, 100, 100, DecaySchedule::kInverseTime), 0.25);
  EXPECT_DOUBLE_EQ(DecayedRate(0.8, 50, 100, DecaySchedule::kLinear), 0.4);
}

TEST(UpdateTest, BmuMovesByAlpha) {
  SomMap map(2, 1, 0.7, 0.75, 0);
  const std::vector<double> x = {1.0};
  UpdateTowards(map, x, Bmu{0, 0, 1.0}, 0.5, 0.7);
  EXPECT_DOUBLE_EQ(map.prototype(0, 0)[0], 0.5);
  EXPECT_NEAR(map.prototype(0, 1)[0], 0.5 * std::exp(-1.0 / 0.98), 1e-15);
  EXPECT_NEAR(map.prototype(1, 1)[0], 0.5 * std::exp(-2.0 / 0.98), 1e-15);
}

TEST(TrainTest, SingleAttractor) {
  const Matrix x = Matrix::FromRows({{1.0, -2.0, 3.0}, {1.0, -2.0, 3.0}});
  TrainConfig cfg;
  cfg.k_override = 2;
  cfg.iterations = 100;
  cfg.init = InitMethod::kSampleRows;
  absl::StatusOr<SomMap> map = Train(x, cfg, 1);
  ASSERT_TRUE(map.ok()) << map.status();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      EXPECT_NEAR(map->prototype(r, c)[0], 1.0, 1e-6);
      EXPECT_NEAR(map->prototype(r, c)[2], 3.0, 1e-6);
    }
  }
  EXPECT_NEAR(*QuantizationError(*map, x), 0.0, 1e-6);
}

TEST(TrainTest, Deterministic) {
  Rng rng(4);
  const Matrix x = testing::RandomMatrix(120, 4, rng);
  TrainConfig cfg;
  cfg.k_override = 6;
  EXPECT_EQ(*Train(x, cfg, 9), *Train(x, cfg, 9));
  EXPECT_NE(Train(x, cfg, 9)->prototypes(), Train(x, cfg, 10)->prototypes());
}

TEST(TrainTest, PlantedClustersHalveQuantizationError) {
  Rng rng(5);
  const int d = 5;
  Matrix x(500, d);
  for (size_t i = 0; i < x.rows(); ++i) {
    const int g = static_cast<int>(i % 5);
    for (int j = 0; j < d; ++j) x(i, j) = (j == g ? 10.0 : 0.0) + rng.Normal();
  }
  TrainConfig cfg;
  cfg.k_override = 30;
  // Sampled-row prototypes already sit on data rows, so the comparison uses
  // the lattice init, which starts off the data.
  cfg.init = InitMethod::kPrincipalPlane;
  // One barely moving step leaves the map at its initialization.
  TrainConfig init = cfg;
  init.iterations = 1;
  init.alpha0 = 1e-12;
  const double before = *QuantizationError(*Train(x, init, 3), x);
  const double after = *QuantizationError(*Train(x, cfg, 3), x);
  EXPECT_LE(after, 0.5 * before) << before << " -> " << after;
}

TEST(TrainTest, InitMethodsAllTrain) {
  Rng rng(6);
  const Matrix x = testing::RandomMatrix(80, 3, rng);
  for (InitMethod m : {InitMethod::kSampleRows, InitMethod::kSampleRowsPrincipalOrder,
                       InitMethod::kPrincipalPlane}) {
    TrainConfig cfg;
    cfg.k_override = 5;
    cfg.init = m;
    absl::StatusOr<SomMap> map = Train(x, cfg, 1);
    ASSERT_TRUE(map.ok()) << map.status();
    EXPECT_TRUE(map->prototypes().AllFinite());
    EXPECT_EQ(map->iterations_run(), 800);
  }
}

TEST(TrainTest, RejectsBadInput) {
  TrainConfig cfg;
  EXPECT_FALSE(Train(Matrix(), cfg, 1).ok());
  Matrix x(3, 2, 1.0);
  x(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(Train(x, cfg, 1).ok());
  cfg.alpha0 = 0.0;
  EXPECT_FALSE(Train(Matrix(3, 2, 1.0), cfg, 1).ok());
}

TEST(DistanceMapTest, IdenticalPrototypesGiveZeros) {
  SomMap map(3, 2, 0.7, 0.75, 0);
  for (double& v : map.prototypes().data()) v = 4.0;
  const Matrix u = DistanceMap(map);
  for (double v : u.data()) EXPECT_EQ(v, 0.0);
}

TEST(DistanceMapTest, TwoByTwoHandTrace) {
  // (0) (1) / (1) (2): every unit sits 1 away from both of its neighbors.
  SomMap map(2, 1, 0.7, 0.75, 0);
  map.prototype(0, 0)[0] = 0;
  map.prototype(0, 1)[0] = 1;
  map.prototype(1, 0)[0] = 1;
  map.prototype(1, 1)[0] = 2;
  const Matrix u = DistanceMap(map);
  for (double v : u.data()) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(DistanceMapTest, ThreeByThreeHandTrace) {
  // Prototypes:   0 1 3 / 0 0 0 / 0 0 4
  // Raw means:    1/2 4/3 5/2 / 0 1/4 7/3 / 0 4/3 4
  SomMap map(3, 1, 0.7, 0.75, 0);
  const double p[3][3] = {{0, 1, 3}, {0, 0, 0}, {0, 0, 4}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) map.prototype(r, c)[0] = p[r][c];
  }
  const Matrix u = DistanceMap(map);
  const double want[3][3] = {{0.125, 1.0 / 3, 0.625}, {0, 0.0625, 7.0 / 12}, {0, 1.0 / 3, 1}};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(u(r, c), want[r][c], 1e-15);
  }
}

TEST(DistanceMapTest, TrainedMapMaxIsOne) {
  Rng rng(7);
  const Matrix x = testing::RandomMatrix(100, 3, rng);
  TrainConfig cfg;
  cfg.k_override = 8;
  const Matrix u = DistanceMap(*Train(x, cfg, 2));
  double max = 0.0;
  for (double v : u.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    max = std::max(max, v);
  }
  EXPECT_EQ(max, 1.0);
}

TEST(QuantizationErrorTest, Examples) {
  SomMap map(2, 2, 0.7, 0.75, 0);
  map.prototype(0, 0)[0] = 0;
  map.prototype(0, 0)[1] = 0;
  for (int u = 1; u < 4; ++u) map.prototypes()(u, 0) = 100.0 * u;
  EXPECT_EQ(*QuantizationError(map, Matrix::FromRows({{0, 0}})), 0.0);
  EXPECT_DOUBLE_EQ(*QuantizationError(map, Matrix::FromRows({{3, 0}})), 3.0);
  EXPECT_FALSE(QuantizationError(map, Matrix()).ok());
}

TEST(QuantizationErrorTest, MatchesBruteForceMean) {
  Rng rng(8);
  SomMap map = RandomMap(6, 3, rng);
  const Matrix x = testing::RandomMatrix(50, 3, rng);
  double sum = 0.0;
  for (size_t i = 0; i < x.rows(); ++i) sum += BruteForceBmu(map, x.row(i)).distance;
  EXPECT_NEAR(*QuantizationError(map, x), sum / 50.0, 1e-12);
}

TEST(SomMapIoTest, RoundTrip) {
  Rng rng(9);
  SomMap map = RandomMap(5, 3, rng);
  map.set_iterations_run(77);
  const auto path = (testing::TempDir() / "map.bin").string();
  ASSERT_TRUE(SaveSomMap(map, path).ok());
  absl::StatusOr<SomMap> back = LoadSomMap(path);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(*back, map);
}

TEST(SomMapIoTest, RejectsGarbage) {
  const auto path = testing::TempDir() / "bad.bin";
  testing::WriteFile(path, "not a map");
  EXPECT_FALSE(LoadSomMap(path.string()).ok());
  EXPECT_FALSE(LoadSomMap("/nonexistent/map.bin").ok());
}

}  // namespace
}  // namespace somaudit
