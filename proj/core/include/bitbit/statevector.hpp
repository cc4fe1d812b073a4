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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bitbit/rng.hpp"

namespace bitbit {

using Complex = std::complex<double>;

/// Largest register the dense simulator accepts (2^20 amplitudes).
inline constexpr std::size_t kMaxQubits = 20;

enum class Pauli : std::uint8_t { X, Y, Z };

char to_char(Pauli p);

/// exp(-i * angle * P / 2) for a tensor product P of single-qubit Paulis.
struct PauliRotation {
  std::vector<std::size_t> support;
  std::vector<Pauli> paulis;
  double angle = 0.0;
};

/// Bitmask form of a Pauli string on a fixed register size.
///
/// P|x> = i^y_count * (-1)^popcount(x & sign_mask) |x ^ flip_mask>, with
/// qubit q stored at bit (n_qubits - 1 - q) of the amplitude index.
struct PauliString {
  std::uint64_t flip_mask = 0;
  std::uint64_t sign_mask = 0;
  unsigned y_count = 0;

  static PauliString compile(std::span<const std::size_t> support, std::span<const Pauli> paulis,
                             std::size_t n_qubits);
};

/// The N_y readout qubits. Readout is most-significant-first in listed order.
struct ClassRegister {
  std::vector<std::size_t> qubits;
};

/// Dense state over n qubits. Qubit 0 is the most significant bit of the
/// amplitude index.
class StateVector {
 public:
  /// |0...0> on n_qubits.
  explicit StateVector(std::size_t n_qubits);

  static StateVector basis(std::size_t n_qubits, std::uint64_t index);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }

  std::span<Complex> amplitudes() { return amplitudes_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }

  double norm_squared() const;

 private:
  std::size_t n_qubits_;
  std::vector<Complex> amplitudes_;
};

/// Basis state from a '0'/'1' string; bits[0] is qubit 0 (most significant).
StateVector new_basis_state(std::size_t n_qubits, std::string_view bits);

/// In-place exp(-i angle P / 2) |state>.
void apply_pauli_rotation(StateVector& state, const PauliRotation& gate);

/// Kernel entry point used by the ansatz. The Pauli string must already be
/// compiled for state.n_qubits().
void apply_pauli_rotation(StateVector& state, const PauliString& pauli, double angle);

/// Marginal distribution of the class register; entry k is the probability of
/// reading k (first listed qubit most significant).
std::vector<double> class_distribution(const StateVector& state, const ClassRegister& reg);

/// Multinomial draw of `shots` outcomes from `dist`.
std::vector<std::uint64_t> sample_register(std::span<const double> dist, std::uint64_t shots,
                                           Rng& rng);

}  // namespace bitbit
