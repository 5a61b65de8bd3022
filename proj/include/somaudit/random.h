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

#ifndef SOMAUDIT_RANDOM_H_
#define SOMAUDIT_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace somaudit {

// Seeded generator with platform-independent distributions. The standard
// <random> distributions are implementation-defined, so everything that feeds
// a reproducible artifact goes through here instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  uint64_t UniformInt(uint64_t bound);

  // Standard normal via the polar Box-Muller method.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      const size_t j = UniformInt(i);
      std::swap(values[i - 1], values[j]);
    }
  }

  // Derives an independent stream for a sub-task (restart r of seed s, ...).
  static uint64_t Derive(uint64_t seed, uint64_t stream);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::vector<size_t> Iota(size_t n);

}  // namespace somaudit

#endif  // SOMAUDIT_RANDOM_H_
