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

#ifndef SOMAUDIT_MATRIX_H_
#define SOMAUDIT_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace somaudit {

// Dense row-major matrix of doubles. Rows are observations throughout the
// library, so row access hands out contiguous spans.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix FromRows(const std::vector<std::vector<double>>& rows);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double> column(size_t c) const;
  void set_column(size_t c, std::span<const double> values);

  // New matrix holding the listed columns, in the listed order.
  Matrix SelectColumns(std::span<const size_t> columns) const;
  Matrix SelectRows(std::span<const size_t> rows) const;

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool AllFinite() const;

  bool operator==(const Matrix& other) const = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

double SquaredDistance(std::span<const double> a, std::span<const double> b);
double EuclideanDistance(std::span<const double> a, std::span<const double> b);

}  // namespace somaudit

#endif  // SOMAUDIT_MATRIX_H_
