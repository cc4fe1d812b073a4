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

#include "bitbit/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bitbit {

namespace {

void check_qubit_count(std::size_t n_qubits) {
  if (n_qubits == 0 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("StateVector: qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " + std::to_string(n_qubits));
  }
}

inline std::uint64_t qubit_bit(std::size_t qubit, std::size_t n_qubits) {
  return std::uint64_t{1} << (n_qubits - 1 - qubit);
}

inline bool odd_parity(std::uint64_t x) { return (std::popcount(x) & 1) != 0; }

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::X:
      return 'X';
    case Pauli::Y:
      return 'Y';
    case Pauli::Z:
      return 'Z';
  }
  return '?';
}

PauliString PauliString::compile(std::span<const std::size_t> support,
                                 std::span<const Pauli> paulis, std::size_t n_qubits) {
  if (support.size() != paulis.size()) {
    throw std::invalid_argument("PauliRotation: support and paulis differ in length");
  }
  PauliString out;
  std::uint64_t seen = 0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= n_qubits) {
      throw std::out_of_range("PauliRotation: qubit " + std::to_string(support[k]) +
                              " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    const std::uint64_t bit = qubit_bit(support[k], n_qubits);
    if (seen & bit) {
      throw std::invalid_argument("PauliRotation: repeated qubit " + std::to_string(support[k]));
    }
    seen |= bit;
    switch (paulis[k]) {
      case Pauli::X:
        out.flip_mask |= bit;
        break;
      case Pauli::Y:
        out.flip_mask |= bit;
        out.sign_mask |= bit;
        ++out.y_count;
        break;
      case Pauli::Z:
        out.sign_mask |= bit;
        break;
    }
  }
  return out;
}

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dimension()) {
    throw std::out_of_range("StateVector::basis: index out of range");
  }
  s.amplitudes_[0] = 0.0;
  s.amplitudes_[index] = 1.0;
  return s;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const Complex& a : amplitudes_) {
    total += std::norm(a);
  }
  return total;
}

StateVector new_basis_state(std::size_t n_qubits, std::string_view bits) {
  if (bits.size() != n_qubits) {
    throw std::invalid_argument("new_basis_state: expected " + std::to_string(n_qubits) +
                                " bits, got " + std::to_string(bits.size()));
  }
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("new_basis_state: bits must be '0' or '1'");
    }
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return StateVector::basis(n_qubits, index);
}

void apply_pauli_rotation(StateVector& state, const PauliRotation& gate) {
  const PauliString p = PauliString::compile(gate.support, gate.paulis, state.n_qubits());
  apply_pauli_rotation(state, p, gate.angle);
}

void apply_pauli_rotation(StateVector& state, const PauliString& pauli, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  std::span<Complex> a = state.amplitudes();
  const std::size_t dim = a.size();

  if (pauli.flip_mask == 0) {
    // Diagonal: eigenvalue +-1 picks c -/+ i s.
    const Complex plus{c, -s};
    const Complex minus{c, s};
    const std::uint64_t sign = pauli.sign_mask;
    for (std::size_t x = 0; x < dim; ++x) {
      a[x] *= odd_parity(x & sign) ? minus : plus;
    }
    return;
  }

  // m = -i s i^y_count; (P a)[x] = m' (-1)^{parity(y & sign)} a[y] with y = x ^ flip.
  static constexpr Complex kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex m = Complex{0.0, -s} * kIPow[pauli.y_count & 3u];
  const std::uint64_t flip = pauli.flip_mask;
  const std::uint64_t sign = pauli.sign_mask;
  const std::size_t step = std::size_t{1} << (std::bit_width(flip) - 1);

  for (std::size_t hi = 0; hi < dim; hi += 2 * step) {
    for (std::size_t x = hi; x < hi + step; ++x) {
      const std::size_t y = x ^ flip;
      const Complex ax = a[x];
      const Complex ay = a[y];
      const Complex my = odd_parity(y & sign) ? -m : m;
      const Complex mx = odd_parity(x & sign) ? -m : m;
      a[x] = c * ax + my * ay;
      a[y] = c * ay + mx * ax;
    }
  }
}

std::vector<double> class_distribution(const StateVector& state, const ClassRegister& reg) {
  const std::size_t n = state.n_qubits();
  if (reg.qubits.empty() || reg.qubits.size() > n) {
    throw std::invalid_argument("class_distribution: invalid register size");
  }
  std::uint64_t seen = 0;
  for (std::size_t q : reg.qubits) {
    if (q >= n) {
      throw std::out_of_range("class_distribution: register qubit out of range");
    }
    const std::uint64_t bit = qubit_bit(q, n);
    if (seen & bit) {
      throw std::invalid_argument("class_distribution: repeated register qubit");
    }
    seen |= bit;
  }

  std::vector<double> dist(std::size_t{1} << reg.qubits.size(), 0.0);
  std::span<const Complex> a = state.amplitudes();

  // Fast path: register is the leading qubits 0..k-1 in order, so the class
  // index is the top k bits of the amplitude index.
  bool leading = true;
  for (std::size_t k = 0; k < reg.qubits.size(); ++k) {
    leading = leading && reg.qubits[k] == k;
  }
  if (leading) {
    const std::size_t block = a.size() / dist.size();
    for (std::size_t k = 0; k < dist.size(); ++k) {
      double total = 0.0;
      for (std::size_t x = k * block; x < (k + 1) * block; ++x) {
        total += std::norm(a[x]);
      }
      dist[k] = total;
    }
    return dist;
  }

  for (std::size_t x = 0; x < a.size(); ++x) {
    std::size_t k = 0;
    for (std::size_t q : reg.qubits) {
      k = (k << 1) | static_cast<std::size_t>((x & qubit_bit(q, n)) != 0);
    }
    dist[k] += std::norm(a[x]);
  }
  return dist;
}

std::vector<std::uint64_t> sample_register(std::span<const double> dist, std::uint64_t shots,
                                           Rng& rng) {
  if (dist.empty()) {
    throw std::invalid_argument("sample_register: empty distribution");
  }
  if (shots == 0) {
    throw std::invalid_argument("sample_register: shots must be >= 1");
  }
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= -1e-15)) {
      throw std::invalid_argument("sample_register: negative probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("sample_register: distribution sums to " + std::to_string(total));
  }

  std::vector<double> cumulative(dist.size());
  std::partial_sum(dist.begin(), dist.end(), cumulative.begin());
  // Index of the last entry with nonzero mass absorbs rounding in the tail.
  std::size_t last = dist.size() - 1;
  while (last > 0 && dist[last] <= 0.0) {
    --last;
  }

  std::vector<std::uint64_t> counts(dist.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform01() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.begin() + last, u);
    ++counts[static_cast<std::size_t>(it - cumulative.begin())];
  }
  return counts;
}

}  // namespace bitbit
