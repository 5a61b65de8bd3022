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

#include "somaudit/pca.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace somaudit {

EigenDecomposition SymmetricEigen(const Matrix& symmetric) {
  const size_t n = symmetric.rows();
  Matrix a = symmetric;
  Matrix v(n, n);
  for (size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  double total = 0.0;
  for (double x : a.data()) total += x * x;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off <= 1e-30 * total || off == 0.0) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t i, size_t j) { return a(i, i) > a(j, j); });
  EigenDecomposition out;
  out.vectors = Matrix(n, n);
  for (size_t r = 0; r < n; ++r) {
    const size_t col = order[r];
    out.values.push_back(a(col, col));
    size_t argmax = 0;
    for (size_t k = 0; k < n; ++k) {
      if (std::fabs(v(k, col)) > std::fabs(v(argmax, col))) argmax = k;
    }
    const double sign = v(argmax, col) < 0.0 ? -1.0 : 1.0;
    for (size_t k = 0; k < n; ++k) out.vectors(r, k) = sign * v(k, col);
  }
  return out;
}

int DefaultPcaComponents(size_t n, size_t d) {
  const size_t cap = std::min(n > 0 ? n - 1 : 0, d);
  return static_cast<int>(std::min<size_t>(50, cap));
}

absl::StatusOr<PcaModel> PcaFit(const Matrix& x, int m) {
  const size_t n = x.rows();
  const size_t d = x.cols();
  if (n < 2 || d < 1) {
    return absl::InvalidArgumentError("PCA needs at least 2 rows and 1 column");
  }
  if (m < 1 || static_cast<size_t>(m) > std::min(n - 1, d)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "component count ", m, " outside [1, min(N-1, d) = ",
        std::min(n - 1, d), "]"));
  }
  if (!x.AllFinite()) {
    return absl::InvalidArgumentError("PCA input contains non-finite values");
  }
  PcaModel model;
  model.mean.assign(d, 0.0);
  for (size_t r = 0; r < n; ++r) {
    auto row = x.row(r);
    for (size_t c = 0; c < d; ++c) model.mean[c] += row[c];
  }
  for (double& v : model.mean) v /= static_cast<double>(n);

  Matrix cov(d, d);
  std::vector<double> centered(d);
  for (size_t r = 0; r < n; ++r) {
    auto row = x.row(r);
    for (size_t c = 0; c < d; ++c) centered[c] = row[c] - model.mean[c];
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = i; j < d; ++j) cov(i, j) += centered[i] * centered[j];
    }
  }
  for (size_t i = 0; i < d; ++i) {
    for (size_t j = i; j < d; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  }

  const EigenDecomposition eig = SymmetricEigen(cov);
  const double top = std::max(eig.values.front(), 0.0);
  const double tol = top * 1e-12 * static_cast<double>(d);
  size_t keep = 0;
  while (keep < static_cast<size_t>(m) && eig.values[keep] > tol) ++keep;
  if (keep == 0) {
    return absl::InvalidArgumentError("PCA input has zero variance");
  }
  if (keep < static_cast<size_t>(m)) {
    model.warnings.push_back(absl::StrCat("data rank ", keep,
                                          " is below requested ", m,
                                          " components; keeping ", keep));
  }
  model.components = Matrix(keep, d);
  for (size_t i = 0; i < keep; ++i) {
    model.explained_variance.push_back(eig.values[i]);
    auto src = eig.vectors.row(i);
    std::copy(src.begin(), src.end(), model.components.row(i).begin());
  }
  return model;
}

absl::StatusOr<Matrix> PcaTransform(const PcaModel& model, const Matrix& x) {
  const size_t d = model.mean.size();
  if (x.cols() != d) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", d, " columns, got ", x.cols()));
  }
  const size_t m = model.num_components();
  Matrix out(x.rows(), m);
  std::vector<double> centered(d);
  for (size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    for (size_t c = 0; c < d; ++c) centered[c] = row[c] - model.mean[c];
    for (size_t k = 0; k < m; ++k) {
      auto comp = model.components.row(k);
      double dot = 0.0;
      for (size_t c = 0; c < d; ++c) dot += centered[c] * comp[c];
      out(r, k) = dot;
    }
  }
  return out;
}

absl::StatusOr<Matrix> PcaInverseTransform(const PcaModel& model,
                                           const Matrix& scores) {
  const size_t m = model.num_components();
  if (scores.cols() != m) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected ", m, " score columns, got ", scores.cols()));
  }
  const size_t d = model.mean.size();
  Matrix out(scores.rows(), d);
  for (size_t r = 0; r < scores.rows(); ++r) {
    for (size_t c = 0; c < d; ++c) {
      double v = model.mean[c];
      for (size_t k = 0; k < m; ++k) v += scores(r, k) * model.components(k, c);
      out(r, c) = v;
    }
  }
  return out;
}

absl::StatusOr<LeakageReport> BaselineAudit(const Matrix& scores,
                                            std::span<const double> sensitive,
                                            const std::string& dataset_tag,
                                            uint64_t seed) {
  std::vector<std::string> names;
  for (size_t k = 0; k < scores.cols(); ++k) names.push_back(absl::StrCat("pc", k));
  return ComputeLeakageReport(scores, names, sensitive, "PCA", dataset_tag, seed);
}

}  // namespace somaudit
