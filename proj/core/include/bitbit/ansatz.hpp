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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "bitbit/rng.hpp"
#include "bitbit/statevector.hpp"

namespace bitbit {

/// A two-qubit entangling block in layer `layer`, qubit_a < qubit_b.
struct Node {
  std::size_t layer = 0;
  std::size_t qubit_a = 0;
  std::size_t qubit_b = 0;

  friend bool operator==(const Node&, const Node&) = default;
};

enum class SlotKind { NodeSlot, FinalEuler };

/// One trainable rotation. `owner` is the node index for NodeSlot and the
/// class qubit for FinalEuler; `position` is 0..8 within a node, 0..2 within
/// a final Euler triple.
struct ParamSlot {
  SlotKind kind = SlotKind::NodeSlot;
  std::size_t owner = 0;
  std::size_t position = 0;
  std::vector<Pauli> paulis;
  std::vector<std::size_t> support;
};

/// The 9 rotations of a node in application order: Euler (X, Z, X) on
/// qubit_a, Euler (X, Z, X) on qubit_b, then XX, YY, ZZ on the pair.
std::array<ParamSlot, 9> node_parameters(const Node& node, std::size_t node_index = 0);

/// Cascading all-to-all entanglement net.
///
/// Layer 0 holds every qubit. Each following layer keeps the lowest
/// 2^(ceil(log2 size) - 1) qubits of the previous one, and the cascade stops
/// before a layer would drop below max(n_y, 2) qubits. Class qubits are
/// 0..n_y-1, data qubits n_y..n_y+n_x-1. Nodes within a layer cover every pair
/// once, in lexicographic order. Parameters are laid out node by node in
/// topology order followed by the final (X, Z, X) triple on each class qubit.
class NetTopology {
 public:
  NetTopology() = default;

  std::size_t n_x() const { return n_x_; }
  std::size_t n_y() const { return n_y_; }
  std::size_t n_qubits() const { return n_x_ + n_y_; }
  const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<ParamSlot>& slots() const { return slots_; }
  const std::vector<PauliString>& compiled() const { return compiled_; }
  std::size_t parameter_count() const { return slots_.size(); }
  ClassRegister class_register() const;

  /// Index of the first parameter of node `node_index`.
  std::size_t node_param_offset(std::size_t node_index) const { return 9 * node_index; }
  /// Index of the first final-Euler parameter of class qubit `q`.
  std::size_t final_param_offset(std::size_t q) const { return 9 * nodes_.size() + 3 * q; }

  /// Index into nodes() of the node on (a, b) in `layer`, or npos.
  std::size_t find_node(std::size_t layer, std::size_t a, std::size_t b) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  friend bool operator==(const NetTopology& l, const NetTopology& r) {
    return l.n_x_ == r.n_x_ && l.n_y_ == r.n_y_ && l.layer_sizes_ == r.layer_sizes_ &&
           l.nodes_ == r.nodes_;
  }

 private:
  friend NetTopology build_topology(std::size_t n_x, std::size_t n_y);

  std::size_t n_x_ = 0;
  std::size_t n_y_ = 0;
  std::vector<std::size_t> layer_sizes_;
  std::vector<Node> nodes_;
  std::vector<ParamSlot> slots_;
  std::vector<PauliString> compiled_;
};

NetTopology build_topology(std::size_t n_x, std::size_t n_y);

/// p = 9 * nodes + 3 * n_y.
std::size_t parameter_count(const NetTopology& topology);

/// Trainable angles, one per ParamSlot.
struct ParamVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t j) { return values[j]; }
  double operator[](std::size_t j) const { return values[j]; }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;
};

/// Apply every rotation of the net, then the final Euler rotations.
void apply_net(StateVector& state, const NetTopology& topology, const ParamVector& params);

/// Apply rotations [first, last) of the parameter layout.
void apply_net_range(StateVector& state, const NetTopology& topology,
                     std::span<const double> params, std::size_t first, std::size_t last);

/// Upper end of the initialization range (0.4 pi).
inline constexpr double kInitUpper = 0.4 * 3.14159265358979323846;

/// i.i.d. uniform angles on [0, 0.4 pi].
ParamVector init_params(const NetTopology& topology, Rng& rng);

}  // namespace bitbit
