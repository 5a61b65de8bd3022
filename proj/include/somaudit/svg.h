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

#ifndef SOMAUDIT_SVG_H_
#define SOMAUDIT_SVG_H_

#include <span>
#include <string>

#include "absl/status/statusor.h"
#include "somaudit/embedding.h"

namespace somaudit {

// Scatter of BMU (x, y) with one <circle> per observation. Radius grows with
// z. With `groups`, each distinct value gets a palette color and a legend
// entry; without, every marker shares one color. Output depends only on the
// inputs.
absl::StatusOr<std::string> RenderScatterSvg(const Embedding3D& emb,
                                             std::span<const double> groups = {});

}  // namespace somaudit

#endif  // SOMAUDIT_SVG_H_
