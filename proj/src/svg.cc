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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace somaudit {
namespace {

constexpr double kPlotSize = 600.0;
constexpr double kMargin = 30.0;
constexpr double kLegendWidth = 120.0;
constexpr double kMinRadius = 1.5;
constexpr double kMaxRadius = 6.0;

// Tableau-like categorical palette.
constexpr const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                    "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                    "#9c755f", "#bab0ac"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string Num(double v) {
  // Two decimals keeps the file small and stable.
  const double r = std::round(v * 100.0) / 100.0;
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), r == 0.0 ? 0.0 : r);
  return std::string(buf, ptr);
}

}  // namespace

absl::StatusOr<std::string> RenderScatterSvg(const Embedding3D& emb,
                                             std::span<const double> groups) {
  const size_t n = emb.size();
  if (n == 0) return absl::InvalidArgumentError("empty embedding");
  if (!groups.empty() && groups.size() != n) {
    return absl::InvalidArgumentError(absl::StrCat(
        "group count ", groups.size(), " != embedding rows ", n));
  }
  const double side = std::max(1, emb.k - 1);
  double z_max = 0.0;
  for (size_t i = 0; i < n; ++i) z_max = std::max(z_max, emb.z(i));

  std::map<double, size_t> color_of;
  for (double g : groups) color_of.emplace(g, 0);
  size_t next = 0;
  for (auto& [value, color] : color_of) color = next++ % kPaletteSize;

  const double width = kPlotSize + 2 * kMargin + (groups.empty() ? 0 : kLegendWidth);
  const double height = kPlotSize + 2 * kMargin;
  std::string out = absl::StrCat(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"", Num(width),
      "\" height=\"", Num(height), "\" viewBox=\"0 0 ", Num(width), " ",
      Num(height), "\">\n",
      "<rect x=\"0\" y=\"0\" width=\"", Num(width), "\" height=\"", Num(height),
      "\" fill=\"white\"/>\n",
      "<rect x=\"", Num(kMargin), "\" y=\"", Num(kMargin), "\" width=\"",
      Num(kPlotSize), "\" height=\"", Num(kPlotSize),
      "\" fill=\"none\" stroke=\"#888\"/>\n<g fill-opacity=\"0.7\">\n");
  for (size_t i = 0; i < n; ++i) {
    const double cx = kMargin + emb.x(i) / side * kPlotSize;
    const double cy = kMargin + emb.y(i) / side * kPlotSize;
    const double t = z_max > 0.0 ? emb.z(i) / z_max : 0.0;
    const double r = kMinRadius + (kMaxRadius - kMinRadius) * t;
    const char* fill = groups.empty() ? kPalette[0] : kPalette[color_of[groups[i]]];
    absl::StrAppend(&out, "<circle cx=\"", Num(cx), "\" cy=\"", Num(cy),
                    "\" r=\"", Num(r), "\" fill=\"", fill, "\"/>\n");
  }
  absl::StrAppend(&out, "</g>\n");
  if (!groups.empty()) {
    double y = kMargin + 10;
    const double x = kPlotSize + 2 * kMargin;
    for (const auto& [value, color] : color_of) {
      absl::StrAppend(&out, "<rect x=\"", Num(x), "\" y=\"", Num(y - 8),
                      "\" width=\"10\" height=\"10\" fill=\"", kPalette[color],
                      "\"/><text x=\"", Num(x + 16), "\" y=\"", Num(y),
                      "\" font-size=\"12\" font-family=\"sans-serif\">",
                      Num(value), "</text>\n");
      y += 16;
    }
  }
  absl::StrAppend(&out, "</svg>\n");
  return out;
}

}  // namespace somaudit
