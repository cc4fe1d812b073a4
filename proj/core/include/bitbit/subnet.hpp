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
#include <span>
#include <vector>

#include "bitbit/ansatz.hpp"
#include "bitbit/encoder.hpp"
#include "bitbit/matrix.hpp"
#include "bitbit/rng.hpp"
#include "bitbit/trainer.hpp"

namespace bitbit {

/// Continues the grant sequence of `old` up to `total_bits`. Throws if `old`
/// is not the allocation these scores produce.
BitAllocation grow_allocation(const BitAllocation& old, std::span<const double> scores,
                              std::size_t total_bits);

struct SubnetMapping {
  std::vector<std::size_t> qubit_map;  ///< old qubit -> new qubit
  std::vector<std::size_t> node_map;   ///< old node index -> new node index
  std::vector<std::size_t> param_map;  ///< old parameter -> new parameter
  std::vector<std::size_t> new_nodes;  ///< new node indices outside the image, ascending
};

SubnetMapping map_subnet(const NetTopology& old_topology, const NetTopology& new_topology);

enum class FillMode {
  Identity,   ///< every unmapped parameter is 0
  RandomNew,  ///< nodes on two new qubits draw from [0, kInitUpper)
};

ParamVector grow_params(const ParamVector& old_params, const SubnetMapping& mapping,
                        const NetTopology& new_topology, Rng& rng,
                        FillMode fill = FillMode::Identity);

/// Parameter indices of the unmapped nodes, in topology order.
std::vector<std::size_t> warmup_order(const NetTopology& new_topology,
                                      const SubnetMapping& mapping);

/// Data for a growth ladder. The encoder is fitted once; each size
/// re-binarizes the same unit projections with a longer allocation.
struct ChainData {
  std::vector<double> scores;
  Matrix train_unit;
  std::vector<int> train_labels;
  Matrix test_unit;
  std::vector<int> test_labels;
  std::size_t n_classes = 0;
};

struct ChainStage {
  std::size_t n_qubits = 0;
  BitAllocation allocation;
  NetTopology topology;
  ParamVector initial_params;
  ParamVector params;
  /// This size's history; update indices continue across sizes.
  std::vector<HistoryEntry> history;
  /// Exact test loss of the previous size's final model (first stage: of
  /// the random initialization).
  double inherited_test_loss = 0.0;
  /// Exact test loss of this size at initialization.
  double initial_test_loss = 0.0;
};

/// A trained model to grow from instead of training the first size.
struct ChainSeed {
  BitAllocation allocation;
  ParamVector params;
};

struct ChainOptions {
  FillMode fill = FillMode::Identity;
  /// When set, every ladder entry must exceed the seed's size and the first
  /// stage is grown from it.
  const ChainSeed* seed = nullptr;
};

std::vector<ChainStage> grow_and_train_chain(const ChainData& data,
                                             std::span<const std::size_t> qubit_ladder,
                                             std::size_t n_y, const TrainConfig& config,
                                             const ChainOptions& options = {});

}  // namespace bitbit
