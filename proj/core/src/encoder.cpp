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

#include "bitbit/encoder.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace bitbit {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t class_count(std::span<const int> labels) {
  int top = -1;
  for (int y : labels) {
    if (y < 0) {
      throw std::invalid_argument("labels must be nonnegative class indices");
    }
    top = std::max(top, y);
  }
  return static_cast<std::size_t>(top + 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// PCA

PcaModel fit_pca(const Matrix& x, std::size_t dims) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n < 2) {
    throw std::invalid_argument("fit_pca: need at least 2 samples");
  }
  if (dims == 0 || dims > std::min(n, d)) {
    throw std::invalid_argument("fit_pca: dims must be in [1, min(N, d)], got " +
                                std::to_string(dims));
  }

  Eigen::Map<const RowMajor> data(x.data().data(), static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = data.colwise().mean();
  const RowMajor centered = data.rowwise() - mean;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d),
                                              static_cast<Eigen::Index>(d));
  cov.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose(),
                                                 1.0 / static_cast<double>(n - 1));
  cov.triangularView<Eigen::StrictlyUpper>() = cov.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("fit_pca: eigendecomposition failed");
  }
  const Eigen::VectorXd& values = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  if (values(values.size() - 1) <= 1e-14 * std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("fit_pca: data has zero variance in every direction");
  }

  PcaModel model;
  model.mean.assign(mean.data(), mean.data() + d);
  model.components = Matrix(dims, d);
  model.explained_variance.resize(dims);
  for (std::size_t k = 0; k < dims; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - k);
    Eigen::VectorXd v = vectors.col(col);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) {
      v = -v;
    }
    for (std::size_t c = 0; c < d; ++c) {
      model.components(k, c) = v(static_cast<Eigen::Index>(c));
    }
    model.explained_variance[k] = std::max(0.0, values(col));
  }

  Eigen::Map<const RowMajor> comps(model.components.data().data(),
                                   static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(d));
  const RowMajor projected = centered * comps.transpose();
  model.min.resize(dims);
  model.max.resize(dims);
  for (std::size_t k = 0; k < dims; ++k) {
    const auto column = projected.col(static_cast<Eigen::Index>(k));
    model.min[k] = column.minCoeff();
    model.max[k] = column.maxCoeff();
    if (!(model.max[k] > model.min[k])) {
      // Degenerate direction: every training point projects to the same value.
      model.max[k] = model.min[k] + 1.0;
    }
  }
  return model;
}

std::vector<double> project_unit(const PcaModel& model, std::span<const double> x) {
  if (x.size() != model.input_dim()) {
    throw std::invalid_argument("project_unit: input has " + std::to_string(x.size()) +
                                " features, model expects " + std::to_string(model.input_dim()));
  }
  std::vector<double> out(model.dims());
  for (std::size_t k = 0; k < model.dims(); ++k) {
    const auto comp = model.components.row(k);
    double dot = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      dot += (x[c] - model.mean[c]) * comp[c];
    }
    const double u = (dot - model.min[k]) / (model.max[k] - model.min[k]);
    out[k] = std::clamp(u, 0.0, 1.0);
  }
  return out;
}

Matrix project_unit(const PcaModel& model, const Matrix& x) {
  if (x.cols() != model.input_dim()) {
    throw std::invalid_argument("project_unit: feature count mismatch");
  }
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t dims = model.dims();
  Eigen::Map<const RowMajor> data(x.data().data(), static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(d));
  Eigen::Map<const Eigen::RowVectorXd> mean(model.mean.data(), static_cast<Eigen::Index>(d));
  Eigen::Map<const RowMajor> comps(model.components.data().data(),
                                   static_cast<Eigen::Index>(dims), static_cast<Eigen::Index>(d));
  const RowMajor projected = (data.rowwise() - mean) * comps.transpose();

  Matrix out(n, dims);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < dims; ++k) {
      const double u = (projected(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) -
                        model.min[k]) /
                       (model.max[k] - model.min[k]);
      out(r, k) = std::clamp(u, 0.0, 1.0);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Importance scores

std::size_t default_bin_count(std::size_t n_samples) {
  const auto root = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_samples))));
  return std::clamp<std::size_t>(root, 2, 64);
}

std::vector<double> mutual_information_scores(const Matrix& xp, std::span<const int> labels,
                                              std::size_t n_bins) {
  const std::size_t n = xp.rows();
  if (labels.size() != n) {
    throw std::invalid_argument("mutual_information_scores: label count mismatch");
  }
  if (n_bins < 2) {
    throw std::invalid_argument("mutual_information_scores: n_bins must be >= 2");
  }
  const std::size_t n_classes = class_count(labels);
  std::vector<double> class_mass(n_classes, 0.0);
  for (int y : labels) {
    class_mass[static_cast<std::size_t>(y)] += 1.0;
  }
  if (std::count_if(class_mass.begin(), class_mass.end(), [](double c) { return c > 0; }) < 2) {
    throw std::invalid_argument("mutual_information_scores: need at least two classes");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& m : class_mass) {
    m *= inv_n;
  }

  std::vector<double> scores(xp.cols(), 0.0);
  std::vector<std::size_t> order(n);
  std::vector<std::size_t> bin(n);
  std::vector<double> joint(n_bins * n_classes);
  std::vector<double> bin_mass(n_bins);

  for (std::size_t col = 0; col < xp.cols(); ++col) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xp(a, col) < xp(b, col); });
    // Equal-frequency bins by rank; a run of equal values takes the bin of
    // its first rank.
    std::size_t run_bin = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == 0 || xp(order[r], col) != xp(order[r - 1], col)) {
        run_bin = r * n_bins / n;
      }
      bin[order[r]] = run_bin;
    }

    std::fill(joint.begin(), joint.end(), 0.0);
    std::fill(bin_mass.begin(), bin_mass.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      joint[bin[i] * n_classes + static_cast<std::size_t>(labels[i])] += inv_n;
      bin_mass[bin[i]] += inv_n;
    }
    double info = 0.0;
    for (std::size_t b = 0; b < n_bins; ++b) {
      for (std::size_t y = 0; y < n_classes; ++y) {
        const double p = joint[b * n_classes + y];
        if (p > 0.0) {
          info += p * std::log2(p / (bin_mass[b] * class_mass[y]));
        }
      }
    }
    scores[col] = std::max(0.0, info);
  }
  return scores;
}

// ---------------------------------------------------------------------------
// Bit apportionment

BitAllocation extend_allocation(const BitAllocation& from, std::span<const double> scores,
                                std::size_t total_bits) {
  if (from.bits.size() != scores.size()) {
    throw std::invalid_argument("allocation and score vector have different dimensions");
  }
  if (total_bits < from.total()) {
    throw std::invalid_argument("cannot shrink an allocation");
  }
  bool any_positive = false;
  for (double s : scores) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("allocate_bits: scores must be finite and nonnegative");
    }
    any_positive = any_positive || s > 0.0;
  }
  if (!any_positive) {
    throw std::invalid_argument("allocate_bits: all scores are zero");
  }

  BitAllocation out = from;
  while (out.total() < total_bits) {
    // argmax s_i / (2 b_i + 1), compared as s_i (2 b_j + 1) > s_j (2 b_i + 1)
    // so that exact ties resolve to the lowest index.
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
      const double lhs = scores[i] * static_cast<double>(2 * out.bits[best] + 1);
      const double rhs = scores[best] * static_cast<double>(2 * out.bits[i] + 1);
      if (lhs > rhs) {
        best = i;
      }
    }
    ++out.bits[best];
    out.grant_order.push_back(best);
  }
  return out;
}

BitAllocation allocate_bits(std::span<const double> scores, std::size_t total_bits) {
  if (scores.empty()) {
    throw std::invalid_argument("allocate_bits: empty score vector");
  }
  if (total_bits < 1) {
    throw std::invalid_argument("allocate_bits: need at least one bit");
  }
  BitAllocation empty;
  empty.bits.assign(scores.size(), 0);
  return extend_allocation(empty, scores, total_bits);
}

// ---------------------------------------------------------------------------
// Bitstrings

std::string Bitstring::to_string() const {
  std::string s(length, '0');
  for (std::size_t t = 0; t < length; ++t) {
    s[t] = bit(t) ? '1' : '0';
  }
  return s;
}

Bitstring Bitstring::from_string(const std::string& bits) {
  if (bits.size() > 63) {
    throw std::invalid_argument("Bitstring: too long");
  }
  Bitstring b;
  b.length = bits.size();
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("Bitstring: expected '0' or '1'");
    }
    b.value = (b.value << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return b;
}

Bitstring binarize(std::span<const double> xp, const BitAllocation& alloc) {
  if (xp.size() != alloc.bits.size()) {
    throw std::invalid_argument("binarize: input has " + std::to_string(xp.size()) +
                                " dimensions, allocation has " +
                                std::to_string(alloc.bits.size()));
  }
  const std::size_t length = alloc.total();
  std::vector<std::uint64_t> truncated(xp.size(), 0);
  for (std::size_t i = 0; i < xp.size(); ++i) {
    const std::size_t b = alloc.bits[i];
    if (b == 0) {
      continue;
    }
    const double levels = std::ldexp(1.0, static_cast<int>(b));
    const double scaled = std::floor(std::clamp(xp[i], 0.0, 1.0) * levels);
    truncated[i] = static_cast<std::uint64_t>(std::min(scaled, levels - 1.0));
  }

  Bitstring z;
  z.length = length;
  std::vector<std::size_t> emitted(xp.size(), 0);
  for (std::size_t t = 0; t < length; ++t) {
    const std::size_t dim = alloc.grant_order[t];
    const std::size_t k = emitted[dim]++;  // k-th most significant bit of dim
    const std::uint64_t bit = (truncated[dim] >> (alloc.bits[dim] - 1 - k)) & 1u;
    z.value = (z.value << 1) | bit;
  }
  return z;
}

// ---------------------------------------------------------------------------
// Encoded datasets

ClassTable build_class_table(std::span<const EncodedSample> samples) {
  std::map<Bitstring, std::map<int, std::size_t>> counts;
  for (const EncodedSample& s : samples) {
    ++counts[s.z][s.y];
  }
  ClassTable table;
  for (const auto& [z, by_label] : counts) {
    int best = by_label.begin()->first;
    std::size_t best_count = 0;
    for (const auto& [y, c] : by_label) {  // ascending label order
      if (c > best_count) {
        best = y;
        best_count = c;
      }
    }
    table.emplace(z, best);
  }
  return table;
}

EncodedDataset::EncodedDataset(std::vector<EncodedSample> samples, std::size_t bit_length,
                               std::size_t n_classes)
    : samples_(std::move(samples)), bit_length_(bit_length), n_classes_(n_classes) {
  if (samples_.empty()) {
    throw std::invalid_argument("EncodedDataset: no samples");
  }
  const double w = 1.0 / static_cast<double>(samples_.size());
  for (const EncodedSample& s : samples_) {
    if (s.z.length != bit_length_) {
      throw std::invalid_argument("EncodedDataset: bitstring length mismatch");
    }
    if (s.y < 0 || static_cast<std::size_t>(s.y) >= n_classes_) {
      throw std::invalid_argument("EncodedDataset: label out of range");
    }
    freq_[s.z] += w;
    auto& row = joint_[s.z];
    row.resize(n_classes_, 0.0);
    row[static_cast<std::size_t>(s.y)] += w;
  }
  class_table_ = build_class_table(samples_);
}

std::size_t default_pca_dims(std::size_t input_dim, std::size_t total_bits) {
  return std::min(input_dim, 2 * total_bits);
}

Encoder fit_encoder(const Matrix& x, std::span<const int> labels, std::size_t dims,
                    std::size_t n_bins) {
  Encoder enc;
  enc.pca = fit_pca(x, dims);
  enc.n_bins = n_bins == 0 ? default_bin_count(x.rows()) : n_bins;
  enc.scores = mutual_information_scores(project_unit(enc.pca, x), labels, enc.n_bins);
  return enc;
}

EncodedDataset encode_projected(const Matrix& unit, std::span<const int> labels,
                                const BitAllocation& alloc, std::size_t n_classes) {
  if (unit.rows() != labels.size()) {
    throw std::invalid_argument("encode_projected: label count mismatch");
  }
  std::vector<EncodedSample> samples;
  samples.reserve(unit.rows());
  for (std::size_t r = 0; r < unit.rows(); ++r) {
    samples.push_back({binarize(unit.row(r), alloc), labels[r]});
  }
  return EncodedDataset(std::move(samples), alloc.total(), n_classes);
}

EncodingResult encode_dataset(const Matrix& x, std::span<const int> labels, std::size_t dims,
                              std::size_t total_bits, std::size_t n_bins) {
  if (x.rows() != labels.size()) {
    throw std::invalid_argument("encode_dataset: label count mismatch");
  }
  if (dims == 0) {
    dims = default_pca_dims(x.cols(), total_bits);
  }
  EncodingResult out;
  out.encoder = fit_encoder(x, labels, dims, n_bins);
  out.allocation = allocate_bits(out.encoder.scores, total_bits);
  const Matrix unit = project_unit(out.encoder.pca, x);
  out.dataset = encode_projected(unit, labels, out.allocation, class_count(labels));
  return out;
}

}  // namespace bitbit
