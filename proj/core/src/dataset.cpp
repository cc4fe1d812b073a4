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

#include "bitbit/dataset.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "bitbit/idx.hpp"

namespace bitbit {

RawDataset load_mnist(const std::filesystem::path& dir) {
  const Matrix train_x = read_idx_images(dir / "train-images-idx3-ubyte");
  const std::vector<int> train_y = read_idx_labels(dir / "train-labels-idx1-ubyte");
  const Matrix test_x = read_idx_images(dir / "t10k-images-idx3-ubyte");
  const std::vector<int> test_y = read_idx_labels(dir / "t10k-labels-idx1-ubyte");
  if (train_x.rows() != train_y.size() || test_x.rows() != test_y.size()) {
    throw std::runtime_error("MNIST image and label counts differ");
  }
  if (train_x.cols() != test_x.cols()) {
    throw std::runtime_error("MNIST training and test images differ in size");
  }

  RawDataset raw;
  raw.images = Matrix(train_x.rows() + test_x.rows(), train_x.cols());
  std::copy(train_x.data().begin(), train_x.data().end(), raw.images.data().begin());
  std::copy(test_x.data().begin(), test_x.data().end(),
            raw.images.data().begin() + static_cast<std::ptrdiff_t>(train_x.data().size()));
  raw.labels = train_y;
  raw.labels.insert(raw.labels.end(), test_y.begin(), test_y.end());
  return raw;
}

DataSplit make_splits(const RawDataset& raw, std::span<const int> classes, Rng& rng,
                      std::size_t test_per_class) {
  if (raw.images.rows() != raw.labels.size()) {
    throw std::invalid_argument("make_splits: image and label counts differ");
  }
  DataSplit split;
  split.classes.assign(classes.begin(), classes.end());
  std::sort(split.classes.begin(), split.classes.end());
  if (split.classes.size() < 2 ||
      std::adjacent_find(split.classes.begin(), split.classes.end()) != split.classes.end()) {
    throw std::invalid_argument("make_splits: need at least two distinct classes");
  }

  std::vector<std::size_t> train_label_of;
  std::vector<std::size_t> test_label_of;
  for (std::size_t c = 0; c < split.classes.size(); ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < raw.labels.size(); ++i) {
      if (raw.labels[i] == split.classes[c]) {
        rows.push_back(i);
      }
    }
    if (rows.empty()) {
      throw std::invalid_argument("make_splits: class " + std::to_string(split.classes[c]) +
                                  " has no samples");
    }
    rng.shuffle(std::span<std::size_t>(rows));
    const std::size_t n_train = rows.size() * 4 / 5;
    if (rows.size() - n_train < test_per_class) {
      throw std::invalid_argument("make_splits: class " + std::to_string(split.classes[c]) +
                                  " has only " + std::to_string(rows.size() - n_train) +
                                  " held-out samples, need " + std::to_string(test_per_class));
    }
    for (std::size_t k = 0; k < n_train; ++k) {
      split.train_rows.push_back(rows[k]);
      train_label_of.push_back(c);
    }
    // The held-out tail is already in random order.
    for (std::size_t k = 0; k < test_per_class; ++k) {
      split.test_rows.push_back(rows[n_train + k]);
      test_label_of.push_back(c);
    }
  }

  split.train_x = raw.images.select_rows(split.train_rows);
  split.test_x = raw.images.select_rows(split.test_rows);
  split.train_y.assign(train_label_of.begin(), train_label_of.end());
  split.test_y.assign(test_label_of.begin(), test_label_of.end());
  return split;
}

}  // namespace bitbit
