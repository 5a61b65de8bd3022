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

#ifndef SOMAUDIT_SOM_H_
#define SOMAUDIT_SOM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "somaudit/matrix.h"

namespace somaudit {

enum class DecaySchedule {
  // rate(t) = rate0 / (1 + 2t/T)
  kInverseTime,
  // rate(t) = rate0 * (1 - t/T)
  kLinear,
};

enum class InitMethod {
  // Prototypes are training rows drawn uniformly with replacement, placed on
  // the lattice in draw order.
  kSampleRows,
  // Training rows drawn as above, then laid out so lattice position follows
  // the rows' coordinates on the two leading principal axes.
  kSampleRowsPrincipalOrder,
  // Regular grid spanning the training data's range on the plane of the two
  // leading principal axes.
  kPrincipalPlane,
};

struct TrainConfig {
  double sigma0 = 0.7;
  double alpha0 = 0.75;
  // Sample presentations; 10 * N when unset.
  std::optional<int64_t> iterations;
  DecaySchedule decay = DecaySchedule::kInverseTime;
  InitMethod init = InitMethod::kSampleRowsPrincipalOrder;
  std::optional<int> k_override;
  std::optional<int> k_cap;

  absl::Status Validate() const;
};

// K x K lattice of d-dimensional prototypes. Unit (row, col) is stored at
// prototype row `row * k + col`.
class SomMap {
 public:
  SomMap() = default;
  SomMap(int k, int d, double sigma0, double alpha0, uint64_t seed)
      : k_(k), d_(d), prototypes_(static_cast<size_t>(k) * k, d),
        sigma0_(sigma0), alpha0_(alpha0), seed_(seed) {}

  int k() const { return k_; }
  int d() const { return d_; }
  size_t num_units() const { return prototypes_.rows(); }
  double sigma0() const { return sigma0_; }
  double alpha0() const { return alpha0_; }
  uint64_t seed() const { return seed_; }
  int64_t iterations_run() const { return iterations_run_; }
  void set_iterations_run(int64_t n) { iterations_run_ = n; }

  std::span<const double> prototype(int row, int col) const {
    return prototypes_.row(static_cast<size_t>(row) * k_ + col);
  }
  std::span<double> prototype(int row, int col) {
    return prototypes_.row(static_cast<size_t>(row) * k_ + col);
  }
  const Matrix& prototypes() const { return prototypes_; }
  Matrix& prototypes() { return prototypes_; }

  absl::Status Validate() const;

  bool operator==(const SomMap& other) const = default;

 private:
  int k_ = 0;
  int d_ = 0;
  Matrix prototypes_;
  double sigma0_ = 0.7;
  double alpha0_ = 0.75;
  uint64_t seed_ = 0;
  int64_t iterations_run_ = 0;
};

// round(5 * n^0.54), at least 2.
int LatticeSize(int64_t n);

struct Bmu {
  int row = 0;
  int col = 0;
  double distance = 0.0;
};

// Exhaustive nearest-prototype search; ties go to the smallest row-major
// index.
absl::StatusOr<Bmu> FindBmu(const SomMap& map, std::span<const double> x);

// Gaussian neighborhood weight for a squared lattice distance.
double NeighborhoodWeight(double lattice_dist2, double sigma);

double DecayedRate(double rate0, int64_t t, int64_t total, DecaySchedule decay);

// One competitive-learning step: every unit moves toward x by
// alpha * h(unit, bmu).
void UpdateTowards(SomMap& map, std::span<const double> x, const Bmu& bmu,
                   double alpha, double sigma);

absl::StatusOr<SomMap> Train(const Matrix& features, const TrainConfig& config,
                             uint64_t seed);

// Lattice side Train would use for n rows under `config`.
int ResolveLatticeSize(int64_t n, const TrainConfig& config);

// U-matrix: mean distance from each unit to its 4-neighbors, scaled so the
// maximum is 1. All zeros when every prototype is identical.
Matrix DistanceMap(const SomMap& map);

// Mean BMU distance over the rows of x.
absl::StatusOr<double> QuantizationError(const SomMap& map, const Matrix& x);

// Binary layout: magic, k, d, seed, sigma0, alpha0, iterations_run, then
// K*K*d little-endian doubles in row-major unit order.
absl::Status SaveSomMap(const SomMap& map, const std::string& path);
absl::StatusOr<SomMap> LoadSomMap(const std::string& path);

}  // namespace somaudit

#endif  // SOMAUDIT_SOM_H_
