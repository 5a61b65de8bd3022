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

#ifndef SOMAUDIT_STATS_H_
#define SOMAUDIT_STATS_H_

#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace somaudit {

// Sample Pearson correlation. Requires equal lengths, n >= 3 and nonzero
// variance on both sides.
absl::StatusOr<double> Pearson(std::span<const double> x,
                               std::span<const double> y);

// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> AverageRanks(std::span<const double> values);

struct SpearmanResult {
  double rho = 0.0;
  // Two-sided p-value from the Student-t approximation with n - 2 degrees of
  // freedom. Exactly 0 when |rho| == 1.
  double p_value = 1.0;
};

absl::StatusOr<SpearmanResult> Spearman(std::span<const double> x,
                                        std::span<const double> y);

// Two-sided p-value of a correlation coefficient r over n samples under the
// t approximation.
double CorrelationPValue(double r, size_t n);

// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double StudentTTwoSidedP(double t, double dof);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double RegularizedIncompleteBeta(double a, double b, double x);

double Mean(std::span<const double> values);
// Population variance (divides by n).
double PopulationVariance(std::span<const double> values);
// Sample standard deviation (divides by n - 1); 0 for a single value.
double SampleStdDev(std::span<const double> values);

// Smallest positive p-value still displayed as a number; anything below is
// shown as "<= eps" in reports.
inline constexpr double kPValueDisplayFloor = 0x1.0p-52;

}  // namespace somaudit

#endif  // SOMAUDIT_STATS_H_
