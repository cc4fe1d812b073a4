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

#include "bitbit/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace bitbit {

std::size_t class_qubits(std::size_t n_classes) {
  if (n_classes < 2) {
    throw std::invalid_argument("need at least two classes");
  }
  std::size_t n = 1;
  while ((std::size_t{1} << n) < n_classes) {
    ++n;
  }
  return n;
}

namespace {

std::vector<double> column(const Matrix& m, std::size_t c) {
  std::vector<double> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out[r] = m(r, c);
  }
  return out;
}

PreparedData finish(DataSplit split, Encoder encoder) {
  PreparedData d;
  d.n_y = class_qubits(split.classes.size());
  d.chain.scores = encoder.scores;
  d.chain.train_unit = project_unit(encoder.pca, split.train_x);
  d.chain.test_unit = project_unit(encoder.pca, split.test_x);
  d.chain.train_labels = split.train_y;
  d.chain.test_labels = split.test_y;
  d.chain.n_classes = split.classes.size();
  d.encoder = std::move(encoder);
  d.split = std::move(split);
  return d;
}

}  // namespace

std::vector<double> PreparedData::train_pca1() const { return column(chain.train_unit, 0); }

std::vector<double> PreparedData::test_pca1() const { return column(chain.test_unit, 0); }

std::vector<std::vector<double>> PreparedData::class_pca1() const {
  std::vector<std::vector<double>> out(chain.n_classes);
  for (std::size_t r = 0; r < chain.train_unit.rows(); ++r) {
    out[static_cast<std::size_t>(chain.train_labels[r])].push_back(chain.train_unit(r, 0));
  }
  return out;
}

PreparedData prepare_data(const RawDataset& raw, std::span<const int> classes,
                          std::uint64_t seed, std::size_t max_bits, std::size_t pca_dims,
                          std::size_t n_bins) {
  Rng rng(stream_seed(seed, SeedStream::Splits));
  DataSplit split = make_splits(raw, classes, rng);
  const std::size_t dims =
      pca_dims == 0 ? default_pca_dims(split.train_x.cols(), max_bits) : pca_dims;
  Encoder encoder = fit_encoder(split.train_x, split.train_y, dims, n_bins);
  return finish(std::move(split), std::move(encoder));
}

PreparedData prepare_data(const RawDataset& raw, std::span<const int> classes,
                          std::uint64_t seed, const Encoder& encoder) {
  Rng rng(stream_seed(seed, SeedStream::Splits));
  DataSplit split = make_splits(raw, classes, rng);
  if (split.train_x.cols() != encoder.pca.input_dim()) {
    throw std::invalid_argument("stored encoder expects " +
                                std::to_string(encoder.pca.input_dim()) +
                                " features, data has " + std::to_string(split.train_x.cols()));
  }
  return finish(std::move(split), encoder);
}

EncodedSplit encode_split(const PreparedData& data, const BitAllocation& allocation) {
  return {encode_projected(data.chain.train_unit, data.chain.train_labels, allocation,
                           data.chain.n_classes),
          encode_projected(data.chain.test_unit, data.chain.test_labels, allocation,
                           data.chain.n_classes)};
}

Checkpoint make_checkpoint(const PreparedData& data, const BitAllocation& allocation,
                           const NetTopology& topology, const ParamVector& params,
                           std::vector<HistoryEntry> history, const TrainConfig& config) {
  Checkpoint c;
  c.n_y = data.n_y;
  c.class_labels = data.split.classes;
  c.encoder = data.encoder;
  c.allocation = allocation;
  c.topology = topology;
  c.params = params;
  c.history = std::move(history);
  c.config = config;
  c.seeds = {{"run", config.seed},
             {"splits", stream_seed(config.seed, SeedStream::Splits)},
             {"init", stream_seed(config.seed, SeedStream::Init)},
             {"training", stream_seed(config.seed, SeedStream::Training)}};
  return c;
}

}  // namespace bitbit
