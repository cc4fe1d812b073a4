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
#include <span>
#include <vector>

#include "bitbit/checkpoint.hpp"
#include "bitbit/dataset.hpp"
#include "bitbit/encoder.hpp"
#include "bitbit/subnet.hpp"
#include "bitbit/trainer.hpp"

namespace bitbit {

/// ceil(log2(n_classes)), at least 1.
std::size_t class_qubits(std::size_t n_classes);

/// A split dataset with its fitted encoder and unit-interval projections.
struct PreparedData {
  DataSplit split;
  std::size_t n_y = 0;
  Encoder encoder;
  ChainData chain;

  std::vector<double> train_pca1() const;
  std::vector<double> test_pca1() const;
  /// First unit-interval PCA coordinate of the training rows, per class.
  std::vector<std::vector<double>> class_pca1() const;
};

/// Split with the run seed, then fit the encoder on the training rows.
/// pca_dims == 0 uses min(d, 2 * max_bits).
PreparedData prepare_data(const RawDataset& raw, std::span<const int> classes,
                          std::uint64_t seed, std::size_t max_bits, std::size_t pca_dims = 0,
                          std::size_t n_bins = 0);

/// Split with the run seed and reuse a stored encoder.
PreparedData prepare_data(const RawDataset& raw, std::span<const int> classes,
                          std::uint64_t seed, const Encoder& encoder);

struct EncodedSplit {
  EncodedDataset train;
  EncodedDataset test;
};

EncodedSplit encode_split(const PreparedData& data, const BitAllocation& allocation);

Checkpoint make_checkpoint(const PreparedData& data, const BitAllocation& allocation,
                           const NetTopology& topology, const ParamVector& params,
                           std::vector<HistoryEntry> history, const TrainConfig& config);

}  // namespace bitbit
