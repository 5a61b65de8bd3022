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

#include "somaudit/report_io.h"

#include "gtest/gtest.h"
#include "test_util.h"

namespace somaudit {
namespace {

LeakageReport Sample() {
  LeakageReport r;
  r.method_name = "SOM";
  r.dataset_tag = "toy";
  r.seed = 3;
  r.config_hash = "abc";
  r.per_axis = {{"x", 0.1, 0.2, 0.3, 10, false}, {"z", -0.5, -0.6, 1e-20, 10, true}};
  r.max_pearson_axis = 1;
  r.max_spearman_axis = 1;
  r.max_abs_pearson = -0.5;
  r.max_abs_spearman = -0.6;
  r.max_spearman_p = 1e-20;
  r.first_axis_spearman = 0.2;
  r.excluded_axes = {"y"};
  return r;
}

TEST(Fnv1aTest, KnownVectors) {
  EXPECT_EQ(Fnv1aHex(""), "cbf29ce484222325");
  EXPECT_EQ(Fnv1aHex("a"), "af63dc4c8601ec8c");
}

TEST(ReportJsonTest, RoundTrip) {
  const LeakageReport r = Sample();
  const Json j = ToJson(r);
  EXPECT_EQ(j["spearman_axis"], "z");
  EXPECT_EQ(j["p_below_eps"], true);
  absl::StatusOr<LeakageReport> back = LeakageReportFromJson(j);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->method_name, r.method_name);
  EXPECT_EQ(back->seed, r.seed);
  EXPECT_EQ(back->max_abs_spearman, r.max_abs_spearman);
  EXPECT_EQ(back->max_spearman_axis, 1);
  EXPECT_EQ(back->per_axis.size(), 2u);
  EXPECT_EQ(back->excluded_axes, r.excluded_axes);
  EXPECT_EQ(ToJson(*back).dump(), j.dump());
}

TEST(ReportJsonTest, MissingFieldIsError) {
  Json j = ToJson(Sample());
  j.erase("spearman");
  EXPECT_FALSE(LeakageReportFromJson(j).ok());
  Json wrong = ToJson(Sample());
  wrong["seed"] = "three";
  EXPECT_FALSE(LeakageReportFromJson(wrong).ok());
  EXPECT_FALSE(LeakageReportFromJson(Json::array()).ok());
}

TEST(ReportCsvTest, OneRowPerAxis) {
  const std::string csv = LeakageReportCsv(Sample());
  EXPECT_EQ(csv,
            "method,dataset,seed,axis,pearson,spearman,spearman_p,p_below_eps,n,"
            "is_max_pearson,is_max_spearman\n"
            "SOM,toy,3,x,0.1,0.2,0.3,0,10,0,0\n"
            "SOM,toy,3,z,-0.5,-0.6,1e-20,1,10,1,1\n");
}

TEST(AdjacencyModeTest, Names) {
  EXPECT_EQ(*ParseAdjacencyMode("strict"), AdjacencyMode::kStrict);
  EXPECT_EQ(*ParseAdjacencyMode("chain"), AdjacencyMode::kChain);
  EXPECT_FALSE(ParseAdjacencyMode("matching").ok());
  EXPECT_STREQ(AdjacencyModeName(AdjacencyMode::kStrict), "strict");
}

TEST(TrajectoryJsonTest, AccuracyOnlyWithLabels) {
  TrajectoryRun run;
  run.centroids.centroids = Matrix::FromRows({{1, 1, 0.1}, {2, 2, 0.2}});
  run.centroids.assignment = {0, 1, 1};
  run.graphs.push_back(*BuildAdjacency(run.centroids.centroids, 5, AdjacencyMode::kChain));
  run.orderings.push_back(ExtractOrderings(run.graphs[0]));
  Json j = ToJson(run);
  EXPECT_FALSE(j.contains("true_order"));
  EXPECT_FALSE(j["graphs"][0].contains("recovery_accuracy"));
  EXPECT_EQ(j["graphs"][0]["orderings"][0], Json({0, 1}));
  EXPECT_EQ(j["centroids"][1]["members"], 2);
  run.true_order = std::vector<int>{0, 1};
  run.accuracy = {1.0};
  j = ToJson(run);
  EXPECT_EQ(j["graphs"][0]["recovery_accuracy"], 1.0);
}

TEST(ErrorJsonTest, Shape) {
  const Json j = ErrorJson(absl::NotFoundError("cannot open file: a.csv"));
  EXPECT_EQ(j["error"]["code"], "NOT_FOUND");
  EXPECT_EQ(j["error"]["message"], "cannot open file: a.csv");
}

TEST(JsonFileTest, RoundTripAndMalformed) {
  const auto dir = testing::TempDir();
  const Json j = {{"a", 1}, {"b", {1, 2}}};
  ASSERT_TRUE(WriteJsonFile((dir / "a.json").string(), j).ok());
  EXPECT_EQ(*ReadJsonFile((dir / "a.json").string()), j);
  testing::WriteFile(dir / "bad.json", "{nope");
  EXPECT_FALSE(ReadJsonFile((dir / "bad.json").string()).ok());
  EXPECT_EQ(ReadJsonFile((dir / "none.json").string()).status().code(),
            absl::StatusCode::kNotFound);
}

}  // namespace
}  // namespace somaudit
