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

#include "bitbit/subnet.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bitbit {

BitAllocation grow_allocation(const BitAllocation& old, std::span<const double> scores,
                              std::size_t total_bits) {
  if (old.total() == 0 || old.bits.size() != scores.size()) {
    throw std::invalid_argument("grow_allocation: allocation does not match the scores");
  }
  if (allocate_bits(scores, old.total()) != old) {
    throw std::invalid_argument(
        "grow_allocation: grant order is inconsistent with the score vector");
  }
  return extend_allocation(old, scores, total_bits);
}

namespace {

std::size_t target_layer(const NetTopology& old_topology, const NetTopology& new_topology,
                         std::size_t old_layer) {
  if (old_layer == 0) {
    return 0;
  }
  const std::size_t size = old_topology.layer_sizes()[old_layer];
  const auto& sizes = new_topology.layer_sizes();
  for (std::size_t l = 1; l < sizes.size(); ++l) {
    if (sizes[l] == size) {
      return l;
    }
  }
  throw std::invalid_argument("map_subnet: no layer of size " + std::to_string(size) +
                              " in the target net");
}

}  // namespace

SubnetMapping map_subnet(const NetTopology& old_topology, const NetTopology& new_topology) {
  if (old_topology.n_y() != new_topology.n_y()) {
    throw std::invalid_argument("map_subnet: class register sizes differ");
  }
  if (old_topology.n_x() > new_topology.n_x()) {
    throw std::invalid_argument("map_subnet: target net is smaller than the source");
  }

  SubnetMapping m;
  m.qubit_map.resize(old_topology.n_qubits());
  for (std::size_t q = 0; q < m.qubit_map.size(); ++q) {
    m.qubit_map[q] = q;
  }

  const auto& old_nodes = old_topology.nodes();
  m.node_map.reserve(old_nodes.size());
  std::size_t last_layer = 0;
  for (const Node& node : old_nodes) {
    const std::size_t layer = target_layer(old_topology, new_topology, node.layer);
    if (layer < last_layer) {
      throw std::invalid_argument("map_subnet: layer order is not preserved");
    }
    last_layer = layer;
    const std::size_t idx = new_topology.find_node(layer, m.qubit_map[node.qubit_a],
                                                   m.qubit_map[node.qubit_b]);
    if (idx == NetTopology::npos) {
      throw std::invalid_argument("map_subnet: node has no image in the target net");
    }
    if (!m.node_map.empty() && idx <= m.node_map.back()) {
      throw std::invalid_argument("map_subnet: node order is not preserved");
    }
    m.node_map.push_back(idx);
  }

  m.param_map.reserve(old_topology.parameter_count());
  for (std::size_t i = 0; i < old_nodes.size(); ++i) {
    for (std::size_t s = 0; s < 9; ++s) {
      m.param_map.push_back(new_topology.node_param_offset(m.node_map[i]) + s);
    }
  }
  for (std::size_t q = 0; q < old_topology.n_y(); ++q) {
    for (std::size_t r = 0; r < 3; ++r) {
      m.param_map.push_back(new_topology.final_param_offset(q) + r);
    }
  }

  std::vector<bool> used(new_topology.nodes().size(), false);
  for (std::size_t idx : m.node_map) {
    used[idx] = true;
  }
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) {
      m.new_nodes.push_back(i);
    }
  }
  return m;
}

ParamVector grow_params(const ParamVector& old_params, const SubnetMapping& mapping,
                        const NetTopology& new_topology, Rng& rng, FillMode fill) {
  if (old_params.size() != mapping.param_map.size()) {
    throw std::invalid_argument("grow_params: parameter vector does not match the mapping");
  }
  ParamVector out;
  out.values.assign(new_topology.parameter_count(), 0.0);
  for (std::size_t j = 0; j < old_params.size(); ++j) {
    const std::size_t target = mapping.param_map[j];
    if (target >= out.size()) {
      throw std::invalid_argument("grow_params: mapping points outside the target net");
    }
    out[target] = old_params[j];
  }
  if (fill == FillMode::RandomNew) {
    const std::size_t old_qubits = mapping.qubit_map.size();
    for (std::size_t idx : mapping.new_nodes) {
      const Node& node = new_topology.nodes()[idx];
      if (node.qubit_a < old_qubits || node.qubit_b < old_qubits) {
        continue;
      }
      const std::size_t offset = new_topology.node_param_offset(idx);
      for (std::size_t s = 0; s < 9; ++s) {
        out[offset + s] = rng.uniform(0.0, kInitUpper);
      }
    }
  }
  return out;
}

std::vector<std::size_t> warmup_order(const NetTopology& new_topology,
                                      const SubnetMapping& mapping) {
  std::vector<std::size_t> order;
  order.reserve(9 * mapping.new_nodes.size());
  for (std::size_t idx : mapping.new_nodes) {
    const std::size_t offset = new_topology.node_param_offset(idx);
    for (std::size_t s = 0; s < 9; ++s) {
      order.push_back(offset + s);
    }
  }
  return order;
}

namespace {

struct Encoded {
  EncodedDataset train;
  EncodedDataset test;
};

Encoded encode_pair(const ChainData& data, const BitAllocation& alloc) {
  return {encode_projected(data.train_unit, data.train_labels, alloc, data.n_classes),
          encode_projected(data.test_unit, data.test_labels, alloc, data.n_classes)};
}

}  // namespace

std::vector<ChainStage> grow_and_train_chain(const ChainData& data,
                                             std::span<const std::size_t> qubit_ladder,
                                             std::size_t n_y, const TrainConfig& config,
                                             const ChainOptions& options) {
  if (qubit_ladder.empty()) {
    throw std::invalid_argument("grow_and_train_chain: empty ladder");
  }
  for (std::size_t i = 0; i < qubit_ladder.size(); ++i) {
    if (qubit_ladder[i] <= n_y) {
      throw std::invalid_argument("grow_and_train_chain: ladder entry " +
                                  std::to_string(qubit_ladder[i]) +
                                  " leaves no data qubits");
    }
    if (i > 0 && qubit_ladder[i] <= qubit_ladder[i - 1]) {
      throw std::invalid_argument("grow_and_train_chain: ladder must be strictly ascending");
    }
  }
  if (options.seed != nullptr &&
      options.seed->allocation.total() + n_y >= qubit_ladder.front()) {
    throw std::invalid_argument(
        "grow_and_train_chain: ladder must start above the seed model's size");
  }

  const std::uint64_t training_seed = stream_seed(config.seed, SeedStream::Training);
  Rng fill_rng(stream_seed(config.seed, SeedStream::Init));

  std::vector<ChainStage> stages;
  // Previous model: allocation, topology, params and exact test loss.
  BitAllocation prev_alloc;
  NetTopology prev_topology;
  ParamVector prev_params;
  double prev_test_loss = 0.0;
  bool have_prev = false;
  if (options.seed != nullptr) {
    prev_alloc = grow_allocation(options.seed->allocation, data.scores,
                                 options.seed->allocation.total());
    prev_topology = build_topology(prev_alloc.total(), n_y);
    prev_params = options.seed->params;
    if (prev_params.size() != prev_topology.parameter_count()) {
      throw std::invalid_argument("grow_and_train_chain: seed parameters do not match its size");
    }
    const Encoded enc = encode_pair(data, prev_alloc);
    prev_test_loss = evaluate(prev_topology, prev_params, enc.test, config.threads).loss;
    have_prev = true;
  }

  std::size_t update_offset = 0;
  for (std::size_t k = 0; k < qubit_ladder.size(); ++k) {
    ChainStage stage;
    stage.n_qubits = qubit_ladder[k];
    const std::size_t bits = stage.n_qubits - n_y;
    stage.allocation = have_prev ? grow_allocation(prev_alloc, data.scores, bits)
                                 : allocate_bits(data.scores, bits);
    stage.topology = build_topology(bits, n_y);
    const Encoded enc = encode_pair(data, stage.allocation);

    std::vector<std::size_t> warmup;
    if (have_prev) {
      const SubnetMapping mapping = map_subnet(prev_topology, stage.topology);
      stage.initial_params =
          grow_params(prev_params, mapping, stage.topology, fill_rng, options.fill);
      warmup = warmup_order(stage.topology, mapping);
      stage.inherited_test_loss = prev_test_loss;
    } else {
      stage.initial_params = init_params(stage.topology, fill_rng);
    }
    stage.initial_test_loss =
        evaluate(stage.topology, stage.initial_params, enc.test, config.threads).loss;
    if (!have_prev) {
      stage.inherited_test_loss = stage.initial_test_loss;
    }

    Rng rng(k == 0 && options.seed == nullptr ? training_seed : mix_seed(training_seed, k + 1));
    TrainOutcome outcome = train_model(stage.topology, enc.train, enc.test, config,
                                       stage.initial_params, warmup, rng);
    stage.params = std::move(outcome.params);
    stage.history = std::move(outcome.history);
    for (HistoryEntry& row : stage.history) {
      row.update += update_offset;
    }
    update_offset = stage.history.back().update;

    prev_alloc = stage.allocation;
    prev_topology = stage.topology;
    prev_params = stage.params;
    prev_test_loss = evaluate(stage.topology, stage.params, enc.test, config.threads).loss;
    have_prev = true;
    stages.push_back(std::move(stage));
  }
  return stages;
}

}  // namespace bitbit
