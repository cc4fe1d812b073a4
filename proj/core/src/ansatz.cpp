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

#include "bitbit/ansatz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bitbit {

namespace {

std::size_t next_layer_size(std::size_t size) {
  // 2^(ceil(log2 size) - 1)
  const std::size_t ceil_log2 = std::bit_width(size - 1);
  return ceil_log2 == 0 ? 0 : std::size_t{1} << (ceil_log2 - 1);
}

ParamSlot make_slot(SlotKind kind, std::size_t owner, std::size_t position,
                    std::vector<Pauli> paulis, std::vector<std::size_t> support) {
  ParamSlot slot;
  slot.kind = kind;
  slot.owner = owner;
  slot.position = position;
  slot.paulis = std::move(paulis);
  slot.support = std::move(support);
  return slot;
}

}  // namespace

std::array<ParamSlot, 9> node_parameters(const Node& node, std::size_t node_index) {
  const std::size_t a = node.qubit_a;
  const std::size_t b = node.qubit_b;
  constexpr SlotKind k = SlotKind::NodeSlot;
  const std::size_t n = node_index;
  return {
      make_slot(k, n, 0, {Pauli::X}, {a}),
      make_slot(k, n, 1, {Pauli::Z}, {a}),
      make_slot(k, n, 2, {Pauli::X}, {a}),
      make_slot(k, n, 3, {Pauli::X}, {b}),
      make_slot(k, n, 4, {Pauli::Z}, {b}),
      make_slot(k, n, 5, {Pauli::X}, {b}),
      make_slot(k, n, 6, {Pauli::X, Pauli::X}, {a, b}),
      make_slot(k, n, 7, {Pauli::Y, Pauli::Y}, {a, b}),
      make_slot(k, n, 8, {Pauli::Z, Pauli::Z}, {a, b}),
  };
}

ClassRegister NetTopology::class_register() const {
  ClassRegister reg;
  for (std::size_t q = 0; q < n_y_; ++q) {
    reg.qubits.push_back(q);
  }
  return reg;
}

std::size_t NetTopology::find_node(std::size_t layer, std::size_t a, std::size_t b) const {
  if (a > b) {
    std::swap(a, b);
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.layer == layer && n.qubit_a == a && n.qubit_b == b) {
      return i;
    }
  }
  return npos;
}

NetTopology build_topology(std::size_t n_x, std::size_t n_y) {
  if (n_x < 1 || n_y < 1) {
    throw std::invalid_argument("build_topology: n_x and n_y must be >= 1");
  }
  const std::size_t n_qubits = n_x + n_y;
  if (n_qubits > kMaxQubits) {
    throw std::invalid_argument("build_topology: " + std::to_string(n_qubits) +
                                " qubits exceeds simulator limit");
  }

  NetTopology t;
  t.n_x_ = n_x;
  t.n_y_ = n_y;
  const std::size_t floor_size = std::max<std::size_t>(n_y, 2);
  t.layer_sizes_.push_back(n_qubits);
  for (;;) {
    const std::size_t next = next_layer_size(t.layer_sizes_.back());
    if (next < floor_size) {
      break;
    }
    t.layer_sizes_.push_back(next);
  }

  for (std::size_t layer = 0; layer < t.layer_sizes_.size(); ++layer) {
    const std::size_t size = t.layer_sizes_[layer];
    for (std::size_t a = 0; a < size; ++a) {
      for (std::size_t b = a + 1; b < size; ++b) {
        t.nodes_.push_back(Node{layer, a, b});
      }
    }
  }

  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    for (ParamSlot& slot : node_parameters(t.nodes_[i], i)) {
      t.slots_.push_back(std::move(slot));
    }
  }
  for (std::size_t q = 0; q < n_y; ++q) {
    t.slots_.push_back(make_slot(SlotKind::FinalEuler, q, 0, {Pauli::X}, {q}));
    t.slots_.push_back(make_slot(SlotKind::FinalEuler, q, 1, {Pauli::Z}, {q}));
    t.slots_.push_back(make_slot(SlotKind::FinalEuler, q, 2, {Pauli::X}, {q}));
  }

  t.compiled_.reserve(t.slots_.size());
  for (const ParamSlot& slot : t.slots_) {
    t.compiled_.push_back(PauliString::compile(slot.support, slot.paulis, n_qubits));
  }
  return t;
}

std::size_t parameter_count(const NetTopology& topology) {
  return 9 * topology.nodes().size() + 3 * topology.n_y();
}

void apply_net_range(StateVector& state, const NetTopology& topology,
                     std::span<const double> params, std::size_t first, std::size_t last) {
  if (state.n_qubits() != topology.n_qubits()) {
    throw std::invalid_argument("apply_net: state has " + std::to_string(state.n_qubits()) +
                                " qubits, topology expects " +
                                std::to_string(topology.n_qubits()));
  }
  if (params.size() != topology.parameter_count()) {
    throw std::invalid_argument("apply_net: expected " +
                                std::to_string(topology.parameter_count()) + " parameters, got " +
                                std::to_string(params.size()));
  }
  if (first > last || last > params.size()) {
    throw std::out_of_range("apply_net_range: bad slot range");
  }
  const std::vector<PauliString>& gates = topology.compiled();
  for (std::size_t j = first; j < last; ++j) {
    apply_pauli_rotation(state, gates[j], params[j]);
  }
}

void apply_net(StateVector& state, const NetTopology& topology, const ParamVector& params) {
  apply_net_range(state, topology, params.values, 0, params.size());
}

ParamVector init_params(const NetTopology& topology, Rng& rng) {
  ParamVector p;
  p.values.resize(topology.parameter_count());
  for (double& v : p.values) {
    v = rng.uniform(0.0, kInitUpper);
  }
  return p;
}

}  // namespace bitbit
