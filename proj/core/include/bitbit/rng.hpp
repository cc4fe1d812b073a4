// Copyright 2026 The bitbit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace bitbit {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a run
/// seed so that every consumer of randomness is reproducible on its own.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator passed explicitly to everything that draws random numbers.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distributions below are implemented here rather than taken
/// from <random> because the standard distributions are implementation
/// defined, and runs must replay identically across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Unbiased (rejection sampling). n must be > 0.
  std::size_t index(std::size_t n);

  template <class T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

  /// k distinct indices drawn uniformly from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace bitbit
