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
#include <filesystem>
#include <span>
#include <vector>

#include "bitbit/matrix.hpp"
#include "bitbit/rng.hpp"

namespace bitbit {

/// Images as unit-interval rows with their digit labels.
struct RawDataset {
  Matrix images;
  std::vector<int> labels;
};

/// The four standard MNIST IDX files in `dir`, training then t10k rows.
RawDataset load_mnist(const std::filesystem::path& dir);

inline constexpr std::size_t kTestPerClass = 100;

struct DataSplit {
  std::vector<int> classes;  ///< sorted original labels; label i of the split is classes[i]
  Matrix train_x;
  std::vector<int> train_y;
  Matrix test_x;
  std::vector<int> test_y;
  std::vector<std::size_t> train_rows;  ///< indices into the raw dataset
  std::vector<std::size_t> test_rows;
};

/// Per class: 80% (rounded down) to training, then `test_per_class` rows
/// drawn from the rest.
DataSplit make_splits(const RawDataset& raw, std::span<const int> classes, Rng& rng,
                      std::size_t test_per_class = kTestPerClass);

}  // namespace bitbit
