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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "somaudit/pca.h"
#include "somaudit/random.h"
#include "somaudit/status_macros.h"

namespace somaudit {
namespace {

// Units whose neighborhood factor along one lattice axis falls below this are
// left untouched in an update.
constexpr double kNeighborhoodCutoff = 1e-12;

constexpr char kMagic[8] = {'S', 'O', 'M', 'A', 'P', '0', '0', '1'};

void InitPrincipalOrder(const Matrix& features, std::vector<size_t>& picks,
                        int k) {
  absl::StatusOr<PcaModel> pca = PcaFit(features, std::min<int>(2, static_cast<int>(features.cols())));
  if (!pca.ok() || pca->num_components() < 2) return;
  const Matrix sampled = features.SelectRows(picks);
  const Matrix scores = PcaTransform(*pca, sampled).value();
  std::vector<size_t> order = Iota(picks.size());
  // Rows of the lattice follow the first axis, columns the second.
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores(a, 0) < scores(b, 0);
  });
  const size_t side = static_cast<size_t>(k);
  for (size_t r = 0; r < side; ++r) {
    auto begin = order.begin() + static_cast<std::ptrdiff_t>(r * side);
    std::stable_sort(begin, begin + static_cast<std::ptrdiff_t>(side),
                     [&](size_t a, size_t b) { return scores(a, 1) < scores(b, 1); });
  }
  std::vector<size_t> placed(picks.size());
  for (size_t i = 0; i < order.size(); ++i) placed[i] = picks[order[i]];
  picks = std::move(placed);
}

// Falls back to sampled rows when fewer than two principal axes exist.
bool InitPrincipalPlane(const Matrix& features, SomMap& map) {
  absl::StatusOr<PcaModel> pca =
      PcaFit(features, std::min<int>(2, static_cast<int>(features.cols())));
  if (!pca.ok() || pca->num_components() < 2) return false;
  const Matrix scores = PcaTransform(*pca, features).value();
  double lo[2] = {scores(0, 0), scores(0, 1)};
  double hi[2] = {lo[0], lo[1]};
  for (size_t i = 1; i < scores.rows(); ++i) {
    for (int a = 0; a < 2; ++a) {
      lo[a] = std::min(lo[a], scores(i, a));
      hi[a] = std::max(hi[a], scores(i, a));
    }
  }
  const int k = map.k();
  const size_t d = static_cast<size_t>(map.d());
  // One spacing for both lattice axes, so distances on the plane keep their
  // proportions; the second axis is centered on its range.
  const double step = std::max(hi[0] - lo[0], hi[1] - lo[1]) / (k - 1);
  const double start[2] = {0.5 * (lo[0] + hi[0]) - 0.5 * step * (k - 1),
                           0.5 * (lo[1] + hi[1]) - 0.5 * step * (k - 1)};
  for (int r = 0; r < k; ++r) {
    const double s0 = start[0] + step * r;
    for (int c = 0; c < k; ++c) {
      const double s1 = start[1] + step * c;
      std::span<double> w = map.prototype(r, c);
      for (size_t j = 0; j < d; ++j) {
        w[j] = pca->mean[j] + s0 * pca->components(0, j) +
               s1 * pca->components(1, j);
      }
    }
  }
  return true;
}

template <typename T>
void AppendRaw(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  out.append(buf, sizeof(T));
}

template <typename T>
bool ReadRaw(std::istream& in, T& value) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) return false;
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(buf, buf + sizeof(T));
  }
  std::memcpy(&value, buf, sizeof(T));
  return true;
}

}  // namespace

absl::Status TrainConfig::Validate() const {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    return absl::InvalidArgumentError("sigma0 must be positive");
  }
  if (!(alpha0 > 0.0 && alpha0 <= 1.0)) {
    return absl::InvalidArgumentError("alpha0 must lie in (0, 1]");
  }
  if (iterations && *iterations < 1) {
    return absl::InvalidArgumentError("iterations must be >= 1");
  }
  if (k_override && *k_override < 2) {
    return absl::InvalidArgumentError("k_override must be >= 2");
  }
  if (k_cap && *k_cap < 2) {
    return absl::InvalidArgumentError("k_cap must be >= 2");
  }
  return absl::OkStatus();
}

absl::Status SomMap::Validate() const {
  if (k_ < 2) return absl::InvalidArgumentError("lattice side must be >= 2");
  if (!(sigma0_ > 0.0)) return absl::InvalidArgumentError("sigma0 must be > 0");
  if (!(alpha0_ > 0.0 && alpha0_ <= 1.0)) {
    return absl::InvalidArgumentError("alpha0 must lie in (0, 1]");
  }
  if (prototypes_.rows() != static_cast<size_t>(k_) * k_ ||
      prototypes_.cols() != static_cast<size_t>(d_)) {
    return absl::InvalidArgumentError("prototype matrix shape mismatch");
  }
  if (!prototypes_.AllFinite()) {
    return absl::InternalError("non-finite prototype values");
  }
  return absl::OkStatus();
}

int LatticeSize(int64_t n) {
  const double k = std::round(5.0 * std::pow(static_cast<double>(n), 0.54));
  return std::max(2, static_cast<int>(k));
}

int ResolveLatticeSize(int64_t n, const TrainConfig& config) {
  if (config.k_override) return *config.k_override;
  int k = LatticeSize(n);
  if (config.k_cap) k = std::min(k, *config.k_cap);
  return k;
}

absl::StatusOr<Bmu> FindBmu(const SomMap& map, std::span<const double> x) {
  if (x.size() != static_cast<size_t>(map.d())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "dimension mismatch: map has d=", map.d(), ", input has ", x.size()));
  }
  const Matrix& protos = map.prototypes();
  size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (size_t u = 0; u < protos.rows(); ++u) {
    const double d2 = SquaredDistance(protos.row(u), x);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = u;
    }
  }
  const int k = map.k();
  return Bmu{static_cast<int>(best) / k, static_cast<int>(best) % k,
             std::sqrt(best_d2)};
}

double NeighborhoodWeight(double lattice_dist2, double sigma) {
  return std::exp(-lattice_dist2 / (2.0 * sigma * sigma));
}

double DecayedRate(double rate0, int64_t t, int64_t total, DecaySchedule decay) {
  const double frac = static_cast<double>(t) / static_cast<double>(total);
  switch (decay) {
    case DecaySchedule::kInverseTime:
      return rate0 / (1.0 + 2.0 * frac);
    case DecaySchedule::kLinear:
      return rate0 * (1.0 - frac);
  }
  return rate0;
}

void UpdateTowards(SomMap& map, std::span<const double> x, const Bmu& bmu,
                   double alpha, double sigma) {
  const int k = map.k();
  const size_t d = static_cast<size_t>(map.d());
  // Rows (and columns) beyond this lattice offset get a weight below the
  // cutoff along that axis alone.
  const double two_s2 = 2.0 * sigma * sigma;
  const int reach = static_cast<int>(
      std::ceil(std::sqrt(-two_s2 * std::log(kNeighborhoodCutoff))));
  const int r0 = std::max(0, bmu.row - reach);
  const int r1 = std::min(k - 1, bmu.row + reach);
  const int c0 = std::max(0, bmu.col - reach);
  const int c1 = std::min(k - 1, bmu.col + reach);
  for (int r = r0; r <= r1; ++r) {
    const double dr = r - bmu.row;
    for (int c = c0; c <= c1; ++c) {
      const double dc = c - bmu.col;
      const double step = alpha * NeighborhoodWeight(dr * dr + dc * dc, sigma);
      if (step < kNeighborhoodCutoff * alpha) continue;
      std::span<double> w = map.prototype(r, c);
      for (size_t j = 0; j < d; ++j) w[j] += step * (x[j] - w[j]);
    }
  }
}

absl::StatusOr<SomMap> Train(const Matrix& features, const TrainConfig& config,
                             uint64_t seed) {
  RETURN_IF_ERROR(config.Validate());
  const size_t n = features.rows();
  if (n < 2) return absl::InvalidArgumentError("training needs N >= 2 rows");
  if (features.cols() < 1) return absl::InvalidArgumentError("no features");
  if (!features.AllFinite()) {
    return absl::InvalidArgumentError("training data contains non-finite values");
  }
  const int k = ResolveLatticeSize(static_cast<int64_t>(n), config);
  const int d = static_cast<int>(features.cols());
  const int64_t total =
      config.iterations.value_or(10 * static_cast<int64_t>(n));

  SomMap map(k, d, config.sigma0, config.alpha0, seed);
  Rng rng(seed);
  const size_t units = map.num_units();
  std::vector<size_t> picks(units);
  for (size_t u = 0; u < units; ++u) picks[u] = rng.UniformInt(n);
  if (config.init == InitMethod::kSampleRowsPrincipalOrder) {
    InitPrincipalOrder(features, picks, k);
  }
  if (config.init != InitMethod::kPrincipalPlane ||
      !InitPrincipalPlane(features, map)) {
    for (size_t u = 0; u < units; ++u) {
      auto src = features.row(picks[u]);
      std::copy(src.begin(), src.end(), map.prototypes().row(u).begin());
    }
  }

  std::vector<size_t> order = Iota(n);
  size_t cursor = n;
  for (int64_t t = 0; t < total; ++t) {
    if (cursor == n) {
      rng.Shuffle(std::span<size_t>(order));
      cursor = 0;
    }
    auto x = features.row(order[cursor++]);
    const Bmu bmu = FindBmu(map, x).value();
    UpdateTowards(map, x, bmu, DecayedRate(config.alpha0, t, total, config.decay),
                  DecayedRate(config.sigma0, t, total, config.decay));
  }
  map.set_iterations_run(total);
  if (!map.prototypes().AllFinite()) {
    return absl::InternalError("training produced non-finite prototypes");
  }
  return map;
}

Matrix DistanceMap(const SomMap& map) {
  const int k = map.k();
  Matrix dmap(static_cast<size_t>(k), static_cast<size_t>(k));
  constexpr int kDr[4] = {-1, 1, 0, 0};
  constexpr int kDc[4] = {0, 0, -1, 1};
  double max_value = 0.0;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      double sum = 0.0;
      int count = 0;
      for (int i = 0; i < 4; ++i) {
        const int nr = r + kDr[i];
        const int nc = c + kDc[i];
        if (nr < 0 || nr >= k || nc < 0 || nc >= k) continue;
        sum += EuclideanDistance(map.prototype(r, c), map.prototype(nr, nc));
        ++count;
      }
      const double mean = count > 0 ? sum / count : 0.0;
      dmap(r, c) = mean;
      max_value = std::max(max_value, mean);
    }
  }
  if (max_value > 0.0) {
    for (double& v : dmap.data()) v /= max_value;
  }
  return dmap;
}

absl::StatusOr<double> QuantizationError(const SomMap& map, const Matrix& x) {
  if (x.rows() == 0) return absl::InvalidArgumentError("no rows");
  double sum = 0.0;
  for (size_t r = 0; r < x.rows(); ++r) {
    ASSIGN_OR_RETURN(Bmu bmu, FindBmu(map, x.row(r)));
    sum += bmu.distance;
  }
  return sum / static_cast<double>(x.rows());
}

absl::Status SaveSomMap(const SomMap& map, const std::string& path) {
  std::string buf(kMagic, sizeof(kMagic));
  AppendRaw<uint32_t>(buf, static_cast<uint32_t>(map.k()));
  AppendRaw<uint32_t>(buf, static_cast<uint32_t>(map.d()));
  AppendRaw<uint64_t>(buf, map.seed());
  AppendRaw<double>(buf, map.sigma0());
  AppendRaw<double>(buf, map.alpha0());
  AppendRaw<int64_t>(buf, map.iterations_run());
  for (double v : map.prototypes().data()) AppendRaw<double>(buf, v);
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::PermissionDeniedError(absl::StrCat("cannot write ", path));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<SomMap> LoadSomMap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open file: ", path));
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": not a SOM map file"));
  }
  uint32_t k = 0, d = 0;
  uint64_t seed = 0;
  double sigma0 = 0, alpha0 = 0;
  int64_t iterations = 0;
  if (!ReadRaw(in, k) || !ReadRaw(in, d) || !ReadRaw(in, seed) ||
      !ReadRaw(in, sigma0) || !ReadRaw(in, alpha0) || !ReadRaw(in, iterations)) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": truncated header"));
  }
  if (k < 2 || k > 65535 || d < 1 || d > 1u << 20) {
    return absl::InvalidArgumentError(absl::StrCat(path, ": implausible shape"));
  }
  SomMap map(static_cast<int>(k), static_cast<int>(d), sigma0, alpha0, seed);
  map.set_iterations_run(iterations);
  for (double& v : map.prototypes().data()) {
    if (!ReadRaw(in, v)) {
      return absl::InvalidArgumentError(absl::StrCat(path, ": truncated body"));
    }
  }
  RETURN_IF_ERROR(map.Validate());
  return map;
}

}  // namespace somaudit
