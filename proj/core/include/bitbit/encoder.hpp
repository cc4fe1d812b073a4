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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bitbit/matrix.hpp"

namespace bitbit {

// ---------------------------------------------------------------------------
// PCA

/// Principal axes of the training data plus the range of the training
/// projection, used to map projections back onto [0, 1].
struct PcaModel {
  std::vector<double> mean;                ///< d
  Matrix components;                       ///< D x d, orthonormal rows
  std::vector<double> explained_variance;  ///< D, descending
  std::vector<double> min;                 ///< D, training projection minimum
  std::vector<double> max;                 ///< D, training projection maximum

  std::size_t input_dim() const { return mean.size(); }
  std::size_t dims() const { return components.rows(); }

  friend bool operator==(const PcaModel&, const PcaModel&) = default;
};

/// Fit a D-component PCA. Rows of the result are sorted by descending
/// variance; each row's largest-magnitude entry is made positive.
/// Throws std::invalid_argument for N < 2, D > min(N, d), or data with no
/// variance at all.
PcaModel fit_pca(const Matrix& x, std::size_t dims);

/// ((x - mean) . components^T - min) / (max - min), clipped to [0, 1].
std::vector<double> project_unit(const PcaModel& model, std::span<const double> x);

/// project_unit applied to every row.
Matrix project_unit(const PcaModel& model, const Matrix& x);

// ---------------------------------------------------------------------------
// Importance scores

/// ceil(sqrt(N)) capped at 64.
std::size_t default_bin_count(std::size_t n_samples);

/// Mutual information I(bin(X_i); Y) in bits for every column of `xp`, using
/// equal-frequency bins. Tied values always share a bin.
std::vector<double> mutual_information_scores(const Matrix& xp, std::span<const int> labels,
                                              std::size_t n_bins);

// ---------------------------------------------------------------------------
// Bit apportionment

/// Bits per PCA dimension together with the order in which they were granted.
/// The t-th granted bit occupies position t of every encoded bitstring.
struct BitAllocation {
  std::vector<std::size_t> bits;
  std::vector<std::size_t> grant_order;

  std::size_t total() const { return grant_order.size(); }

  friend bool operator==(const BitAllocation&, const BitAllocation&) = default;
};

/// Sainte-Lague apportionment: bits are granted one at a time to the
/// dimension maximizing score / (2 b + 1), ties to the lowest index. The grant
/// sequence for B is a prefix of the sequence for any larger B.
BitAllocation allocate_bits(std::span<const double> scores, std::size_t total_bits);

/// Continue the grant sequence of `from` up to `total_bits`.
BitAllocation extend_allocation(const BitAllocation& from, std::span<const double> scores,
                                std::size_t total_bits);

// ---------------------------------------------------------------------------
// Bitstrings

/// Fixed-length bitstring; position 0 is the most significant bit of `value`.
struct Bitstring {
  std::uint64_t value = 0;
  std::size_t length = 0;

  bool bit(std::size_t position) const { return ((value >> (length - 1 - position)) & 1u) != 0; }
  std::string to_string() const;
  static Bitstring from_string(const std::string& bits);

  friend auto operator<=>(const Bitstring&, const Bitstring&) = default;
};

/// Truncate each coordinate to its allotted bits (most significant first) and
/// scatter them to the positions where they were granted.
Bitstring binarize(std::span<const double> xp, const BitAllocation& alloc);

// ---------------------------------------------------------------------------
// Encoded datasets

struct EncodedSample {
  Bitstring z;
  int y = 0;
};

using ClassTable = std::map<Bitstring, int>;

/// Majority label per distinct bitstring, ties to the lowest label.
ClassTable build_class_table(std::span<const EncodedSample> samples);

/// Samples plus their empirical statistics.
class EncodedDataset {
 public:
  EncodedDataset() = default;
  EncodedDataset(std::vector<EncodedSample> samples, std::size_t bit_length,
                 std::size_t n_classes);

  std::size_t bit_length() const { return bit_length_; }
  std::size_t n_classes() const { return n_classes_; }
  std::size_t size() const { return samples_.size(); }
  const std::vector<EncodedSample>& samples() const { return samples_; }

  /// f(z).
  const std::map<Bitstring, double>& frequencies() const { return freq_; }
  /// f(z, y) as a per-z vector over labels.
  const std::map<Bitstring, std::vector<double>>& joint() const { return joint_; }
  /// C(z).
  const ClassTable& class_table() const { return class_table_; }

 private:
  std::vector<EncodedSample> samples_;
  std::size_t bit_length_ = 0;
  std::size_t n_classes_ = 0;
  std::map<Bitstring, double> freq_;
  std::map<Bitstring, std::vector<double>> joint_;
  ClassTable class_table_;
};

/// Fitted encoder state: the PCA basis and per-dimension scores. Together
/// with a BitAllocation this determines every bitstring.
struct Encoder {
  PcaModel pca;
  std::vector<double> scores;
  std::size_t n_bins = 0;

  friend bool operator==(const Encoder&, const Encoder&) = default;
};

/// min(d, 2B).
std::size_t default_pca_dims(std::size_t input_dim, std::size_t total_bits);

/// Steps 1 and 2: PCA then scoring of every retained dimension.
/// n_bins == 0 selects default_bin_count.
Encoder fit_encoder(const Matrix& x, std::span<const int> labels, std::size_t dims,
                    std::size_t n_bins = 0);

/// Binarize already-projected rows.
EncodedDataset encode_projected(const Matrix& unit, std::span<const int> labels,
                                const BitAllocation& alloc, std::size_t n_classes);

struct EncodingResult {
  Encoder encoder;
  BitAllocation allocation;
  EncodedDataset dataset;
};

/// The full pipeline on raw unit-interval features. dims == 0 selects
/// default_pca_dims, n_bins == 0 selects default_bin_count.
EncodingResult encode_dataset(const Matrix& x, std::span<const int> labels, std::size_t dims,
                              std::size_t total_bits, std::size_t n_bins = 0);

}  // namespace bitbit
