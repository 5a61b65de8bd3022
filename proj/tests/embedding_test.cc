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

#include "gtest/gtest.h"
#include "test_util.h"

namespace somaudit {
namespace {

SomMap RandomMap(int k, int d, Rng& rng) {
  SomMap map(k, d, 0.7, 0.75, 0);
  for (double& v : map.prototypes().data()) v = rng.Normal();
  return map;
}

TEST(EmbedTest, ColumnIsXRowIsY) {
  Rng rng(1);
  SomMap map = RandomMap(8, 3, rng);
  Matrix x(1, 3);
  for (int j = 0; j < 3; ++j) x(0, j) = map.prototype(2, 5)[j];
  absl::StatusOr<Embedding3D> emb = Embed(map, x);
  ASSERT_TRUE(emb.ok());
  EXPECT_EQ(emb->x(0), 5.0);
  EXPECT_EQ(emb->y(0), 2.0);
  EXPECT_EQ(emb->z(0), 0.0);
  EXPECT_EQ(emb->k, 8);
}

TEST(EmbedTest, ComposesFindBmu) {
  Rng rng(2);
  SomMap map = RandomMap(6, 4, rng);
  const Matrix x = testing::RandomMatrix(40, 4, rng);
  const Embedding3D emb = *Embed(map, x);
  for (size_t i = 0; i < x.rows(); ++i) {
    const Bmu b = *FindBmu(map, x.row(i));
    EXPECT_EQ(emb.x(i), b.col);
    EXPECT_EQ(emb.y(i), b.row);
    EXPECT_EQ(emb.z(i), b.distance);
  }
}

TEST(EmbedTest, RowPermutationPermutesOutput) {
  Rng rng(3);
  SomMap map = RandomMap(5, 2, rng);
  const Matrix x = testing::RandomMatrix(30, 2, rng);
  std::vector<size_t> perm = Iota(30);
  rng.Shuffle(std::span<size_t>(perm));
  const Embedding3D a = *Embed(map, x);
  const Embedding3D b = *Embed(map, x.SelectRows(perm));
  EXPECT_EQ(b.coords, a.coords.SelectRows(perm));
}

TEST(EmbedTest, DimensionMismatch) {
  Rng rng(4);
  SomMap map = RandomMap(4, 3, rng);
  EXPECT_FALSE(Embed(map, Matrix(2, 2)).ok());
}

TEST(EmbeddingCsvTest, RoundTrip) {
  Rng rng(5);
  SomMap map = RandomMap(7, 3, rng);
  const Embedding3D emb = *Embed(map, testing::RandomMatrix(25, 3, rng));
  const auto path = (testing::TempDir() / "emb.csv").string();
  ASSERT_TRUE(WriteEmbeddingCsv(path, emb).ok());
  const std::string text = testing::ReadFile(path);
  EXPECT_EQ(text.substr(0, text.find('\n')), "row_id,x,y,z");
  absl::StatusOr<Embedding3D> back = ReadEmbeddingCsv(path, 7);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->coords, emb.coords);
}

TEST(EmbeddingCsvTest, Malformed) {
  const auto dir = testing::TempDir();
  testing::WriteFile(dir / "a.csv", "row_id,x,y\n0,1,2\n");
  EXPECT_FALSE(ReadEmbeddingCsv((dir / "a.csv").string()).ok());
  testing::WriteFile(dir / "b.csv", "row_id,x,y,z\n0,1,two,3\n");
  EXPECT_FALSE(ReadEmbeddingCsv((dir / "b.csv").string()).ok());
  EXPECT_FALSE(ReadEmbeddingCsv((dir / "missing.csv").string()).ok());
}

}  // namespace
}  // namespace somaudit
