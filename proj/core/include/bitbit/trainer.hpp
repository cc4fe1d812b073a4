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
#include <cstdint>
#include <span>
#include <vector>

#include "bitbit/ansatz.hpp"
#include "bitbit/encoder.hpp"
#include "bitbit/rng.hpp"

namespace bitbit {

enum class EvalMode { Exact, Sampled };

/// PerSample: every distinct input gets `shots` shots per loss evaluation.
/// PerBatch: `shots` is the total per loss evaluation, spread over inputs by
/// their batch weight.
enum class ShotBudget { PerSample, PerBatch };

struct LossOptions {
  EvalMode mode = EvalMode::Exact;
  std::uint64_t shots = 0;
  ShotBudget budget = ShotBudget::PerSample;
  std::size_t threads = 1;
};

/// A distinct input bitstring and its share of the batch.
struct WeightedInput {
  Bitstring z;
  double weight = 0.0;
};

/// Distinct bitstrings of the listed samples with empirical weights, sorted
/// by bitstring.
std::vector<WeightedInput> make_batch(const EncodedDataset& data,
                                      std::span<const std::size_t> sample_indices);

/// Every sample of the dataset.
std::vector<WeightedInput> full_batch(const EncodedDataset& data);

/// 1 - sum_z w(z) P_{C(z), z}. Exact mode reads true probabilities; sampled
/// mode replaces each with a shot-frequency estimate.
double batch_loss(const NetTopology& topology, const ParamVector& params,
                  std::span<const WeightedInput> batch, const ClassTable& table,
                  const LossOptions& options, Rng& rng);

struct CoordinateUpdate {
  std::size_t coordinate = 0;
  double theta_before = 0.0;
  double theta_after = 0.0;
  /// L(theta), L(theta + pi/2), L(theta + pi).
  std::array<double, 3> losses{};
  /// K = sqrt(gamma^2 + sigma^2) of the coordinate's sinusoid.
  double amplitude = 0.0;
  /// Standard error of a single loss evaluation (0 in exact mode).
  double standard_error = 0.0;
  bool skipped = false;
  /// Loss at theta_after implied by the three evaluations.
  double predicted_loss = 0.0;
};

/// Closed-form minimizer of a sinusoid known at theta, theta + pi/2 and
/// theta + pi: theta - atan2(2 L(pi/2) - L(pi) - L(0), L(pi) - L(0)).
/// Exact batch loss with parameter j replaced by each of `angles`.
std::vector<double> coordinate_losses(const NetTopology& topology, const ParamVector& params,
                                      std::size_t j, std::span<const double> angles,
                                      std::span<const WeightedInput> batch,
                                      const ClassTable& table, std::size_t threads = 1);

double optimal_angle(double theta, const std::array<double, 3>& losses);

/// 0.5 * sqrt((L(pi) - L(0))^2 + (2 L(pi/2) - L(pi) - L(0))^2).
double sinusoid_amplitude(const std::array<double, 3>& losses);

/// Skip threshold on K in exact mode.
inline constexpr double kExactAmplitudeTolerance = 1e-12;

/// Evaluate the loss at the three shifted angles of coordinate j on one batch
/// (sharing shot seeds in sampled mode) and move theta_j to the minimizer.
/// Coordinates whose amplitude is below tolerance are left unchanged.
CoordinateUpdate coordinate_update(const NetTopology& topology, ParamVector& params,
                                   std::size_t j, std::span<const WeightedInput> batch,
                                   const ClassTable& table, const LossOptions& options, Rng& rng);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Smallest batch size (doubling, then bisection) whose random batch of
/// training values is within `threshold` KS distance of the test values.
std::size_t ks_batch_size(std::span<const double> train_pca1, std::span<const double> test_pca1,
                          double threshold, std::size_t max_batch, Rng& rng);

/// Wasserstein-1 distance between two empirical 1-D distributions.
double wasserstein1(std::span<const double> a, std::span<const double> b);

/// ceil(W^-2 / 100) * 100 for the minimum pairwise class distance W, capped
/// at max_shots.
std::uint64_t wasserstein_shot_budget(std::span<const std::vector<double>> class_pca1,
                                      std::uint64_t max_shots = 1'000'000);

struct TrainConfig {
  std::size_t batch_size = 150;  ///< 0 uses the whole training set
  double ks_threshold = 0.1;
  std::uint64_t initial_shots = 900;
  std::uint64_t shots_increment = 1000;
  std::size_t sweeps_per_size = 3;
  EvalMode mode = EvalMode::Sampled;
  ShotBudget budget = ShotBudget::PerSample;
  bool shuffle_order = false;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t test_every = 1;  ///< evaluate the test set every n updates

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// One row of the training metrics table. The row with coordinate == -1 is
/// the state before any update.
struct HistoryEntry {
  std::size_t update = 0;
  std::size_t n_qubits = 0;
  long coordinate = -1;
  double batch_loss = 0.0;
  double test_loss = 0.0;
  double test_accuracy = 0.0;
  std::uint64_t shots = 0;
  std::size_t batch_size = 0;
  double amplitude = 0.0;

  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

struct TrainerState {
  ParamVector params;
  std::size_t sweep_index = 0;
  std::size_t coordinate_cursor = 0;
  std::uint64_t shots_current = 0;
  std::size_t update_count = 0;
  std::vector<HistoryEntry> history;
};

struct Evaluation {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Exact loss 1 - sum_{z,y} f(z, y) P_{y,z} and argmax accuracy over the
/// dataset's valid classes (ties to the lowest class).
Evaluation evaluate(const NetTopology& topology, const ParamVector& params,
                    const EncodedDataset& data, std::size_t threads = 1);

/// Exact class-register distribution of the net on input |0...0>|z>.
std::vector<double> predict_distribution(const NetTopology& topology, const ParamVector& params,
                                         const Bitstring& z);

/// Record the pre-training row (batch loss of one fresh batch, test metrics).
void record_initial(const NetTopology& topology, TrainerState& state,
                    const EncodedDataset& train, const EncodedDataset& test,
                    const TrainConfig& config, Rng& rng);

/// One coordinate update per entry of `order`, each on a fresh random batch.
void sweep(const NetTopology& topology, TrainerState& state, const EncodedDataset& train,
           const EncodedDataset& test, const TrainConfig& config,
           std::span<const std::size_t> order, Rng& rng);

struct TrainOutcome {
  ParamVector params;
  std::vector<HistoryEntry> history;
};

/// sweeps_per_size sequential sweeps; sampled mode adds shots_increment shots
/// after every sweep.
TrainOutcome train_model(const NetTopology& topology, const EncodedDataset& train,
                         const EncodedDataset& test, const TrainConfig& config,
                         ParamVector initial_params);

/// Random-stream identifiers derived from the run seed.
/// As above with an explicit generator. `warmup` coordinates are swept once
/// at the initial shot count before the regular sweeps.
TrainOutcome train_model(const NetTopology& topology, const EncodedDataset& train,
                         const EncodedDataset& test, const TrainConfig& config,
                         ParamVector initial_params, std::span<const std::size_t> warmup,
                         Rng& rng);

enum class SeedStream : std::uint64_t { Splits = 1, Init = 2, Training = 3, Analysis = 4, Batch = 5 };

inline std::uint64_t stream_seed(std::uint64_t seed, SeedStream stream) {
  return mix_seed(seed, static_cast<std::uint64_t>(stream));
}

}  // namespace bitbit
