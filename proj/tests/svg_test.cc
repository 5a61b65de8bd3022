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

#include "somaudit/svg.h"

#include <set>
#include <string>

#include "gtest/gtest.h"

namespace somaudit {
namespace {

size_t Count(const std::string& text, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

std::set<std::string> CircleFills(const std::string& svg) {
  std::set<std::string> fills;
  for (size_t pos = svg.find("<circle"); pos != std::string::npos;
       pos = svg.find("<circle", pos + 1)) {
    const size_t f = svg.find("fill=\"", pos) + 6;
    fills.insert(svg.substr(f, svg.find('"', f) - f));
  }
  return fills;
}

Embedding3D ThreePoints() {
  Embedding3D emb;
  emb.k = 4;
  emb.coords = Matrix::FromRows({{0, 0, 0.5}, {3, 1, 1.0}, {2, 3, 0.0}});
  return emb;
}

TEST(SvgTest, OneMarkerPerPoint) {
  const std::string svg = *RenderScatterSvg(ThreePoints());
  EXPECT_EQ(Count(svg, "<circle"), 3u);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(SvgTest, NoGroupsSingleColor) {
  EXPECT_EQ(CircleFills(*RenderScatterSvg(ThreePoints())).size(), 1u);
}

TEST(SvgTest, GroupsGetColorsAndLegend) {
  const std::vector<double> groups = {1, 2, 1};
  const std::string svg = *RenderScatterSvg(ThreePoints(), groups);
  EXPECT_EQ(Count(svg, "<circle"), 3u);
  EXPECT_EQ(CircleFills(svg).size(), 2u);
}

TEST(SvgTest, Deterministic) {
  const std::vector<double> groups = {1, 2, 3};
  EXPECT_EQ(*RenderScatterSvg(ThreePoints(), groups),
            *RenderScatterSvg(ThreePoints(), groups));
}

TEST(SvgTest, Errors) {
  EXPECT_FALSE(RenderScatterSvg(Embedding3D{}).ok());
  const std::vector<double> groups = {1, 2};
  EXPECT_FALSE(RenderScatterSvg(ThreePoints(), groups).ok());
}

}  // namespace
}  // namespace somaudit
