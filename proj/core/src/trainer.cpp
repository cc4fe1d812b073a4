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

#include "bitbit/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "parallel.hpp"

namespace bitbit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::size_t kNoCoordinate = static_cast<std::size_t>(-1);

StateVector input_state(const NetTopology& topology, const Bitstring& z) {
  if (z.length != topology.n_x()) {
    throw std::invalid_argument("input bitstring has " + std::to_string(z.length) +
                                " bits, net has " + std::to_string(topology.n_x()) +
                                " data qubits");
  }
  // Class qubits are the leading (most significant) qubits and start in |0>.
  return StateVector::basis(topology.n_qubits(), z.value);
}

/// Exact class distributions for every input and every angle substituted
/// for parameter j (j == kNoCoordinate: the net as given, one angle slot).
std::vector<std::vector<double>> class_distributions(const NetTopology& topology,
                                                     const ParamVector& params, std::size_t j,
                                                     std::span<const double> angles,
                                                     std::span<const WeightedInput> batch,
                                                     std::size_t threads) {
  if (params.size() != topology.parameter_count()) {
    throw std::invalid_argument("parameter vector length does not match topology");
  }
  const std::size_t n_angles = j == kNoCoordinate ? 1 : angles.size();
  const ClassRegister reg = topology.class_register();
  const std::size_t p = params.size();
  std::vector<std::vector<double>> out(batch.size() * n_angles);

  detail::parallel_for(batch.size(), threads, [&](std::size_t i) {
    StateVector state = input_state(topology, batch[i].z);
    if (j == kNoCoordinate) {
      apply_net(state, topology, params);
      out[i] = class_distribution(state, reg);
      return;
    }
    apply_net_range(state, topology, params.values, 0, j);
    for (std::size_t a = 0; a < n_angles; ++a) {
      StateVector shifted = state;
      apply_pauli_rotation(shifted, topology.compiled()[j], angles[a]);
      apply_net_range(shifted, topology, params.values, j + 1, p);
      out[i * n_angles + a] = class_distribution(shifted, reg);
    }
  });
  return out;
}

int target_of(const ClassTable& table, const Bitstring& z) {
  const auto it = table.find(z);
  if (it == table.end()) {
    throw std::invalid_argument("bitstring " + z.to_string() + " has no class table entry");
  }
  return it->second;
}

struct LossEstimate {
  double loss = 0.0;
  double standard_error = 0.0;
};

/// Loss for each angle slot from precomputed distributions. In sampled mode
/// every angle slot reuses the same shot seeds.
std::vector<LossEstimate> estimate_losses(const std::vector<std::vector<double>>& dists,
                                          std::size_t n_angles,
                                          std::span<const WeightedInput> batch,
                                          const ClassTable& table, const LossOptions& options,
                                          std::uint64_t shot_seed) {
  std::vector<std::size_t> targets(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    targets[i] = static_cast<std::size_t>(target_of(table, batch[i].z));
    if (targets[i] >= dists[i * n_angles].size()) {
      throw std::invalid_argument("class label does not fit the class register");
    }
  }

  std::vector<LossEstimate> out(n_angles);
  if (options.mode == EvalMode::Exact) {
    for (std::size_t a = 0; a < n_angles; ++a) {
      double hit = 0.0;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        hit += batch[i].weight * dists[i * n_angles + a][targets[i]];
      }
      out[a].loss = 1.0 - hit;
    }
    return out;
  }

  if (options.shots == 0) {
    throw std::invalid_argument("sampled mode needs at least one shot");
  }
  const auto shots = static_cast<double>(options.shots);

  if (options.budget == ShotBudget::PerSample) {
    for (std::size_t a = 0; a < n_angles; ++a) {
      double hit = 0.0;
      double variance = 0.0;
      for (std::size_t i = 0; i < batch.size(); ++i) {
        Rng rng(mix_seed(shot_seed, i));
        const auto counts = sample_register(dists[i * n_angles + a], options.shots, rng);
        const double p_hat = static_cast<double>(counts[targets[i]]) / shots;
        hit += batch[i].weight * p_hat;
        variance += batch[i].weight * batch[i].weight * p_hat * (1.0 - p_hat) / shots;
      }
      out[a].loss = 1.0 - hit;
      out[a].standard_error = std::sqrt(variance);
    }
    return out;
  }

  // PerBatch: split the shot total over inputs once, then sample outcomes.
  std::vector<double> weights(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    weights[i] = batch[i].weight;
  }
  Rng split_rng(shot_seed);
  const auto per_input = sample_register(weights, options.shots, split_rng);
  for (std::size_t a = 0; a < n_angles; ++a) {
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (per_input[i] == 0) {
        continue;
      }
      Rng rng(mix_seed(shot_seed, i + 1));
      hits += sample_register(dists[i * n_angles + a], per_input[i], rng)[targets[i]];
    }
    const double loss = 1.0 - static_cast<double>(hits) / shots;
    out[a].loss = loss;
    out[a].standard_error = std::sqrt(std::max(0.0, loss * (1.0 - loss)) / shots);
  }
  return out;
}

void check_batch(std::span<const WeightedInput> batch) {
  if (batch.empty()) {
    throw std::invalid_argument("empty loss batch");
  }
  double total = 0.0;
  for (const WeightedInput& w : batch) {
    total += w.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("batch weights must sum to 1");
  }
}

}  // namespace

std::vector<WeightedInput> make_batch(const EncodedDataset& data,
                                      std::span<const std::size_t> sample_indices) {
  if (sample_indices.empty()) {
    throw std::invalid_argument("make_batch: no samples");
  }
  std::map<Bitstring, std::size_t> counts;
  for (std::size_t idx : sample_indices) {
    ++counts[data.samples().at(idx).z];
  }
  std::vector<WeightedInput> batch;
  batch.reserve(counts.size());
  const double scale = 1.0 / static_cast<double>(sample_indices.size());
  for (const auto& [z, c] : counts) {
    batch.push_back({z, static_cast<double>(c) * scale});
  }
  return batch;
}

std::vector<WeightedInput> full_batch(const EncodedDataset& data) {
  std::vector<WeightedInput> batch;
  batch.reserve(data.frequencies().size());
  for (const auto& [z, f] : data.frequencies()) {
    batch.push_back({z, f});
  }
  return batch;
}

double batch_loss(const NetTopology& topology, const ParamVector& params,
                  std::span<const WeightedInput> batch, const ClassTable& table,
                  const LossOptions& options, Rng& rng) {
  check_batch(batch);
  const std::uint64_t seed = options.mode == EvalMode::Sampled ? rng.next_u64() : 0;
  const auto dists = class_distributions(topology, params, kNoCoordinate, {}, batch,
                                         options.threads);
  return estimate_losses(dists, 1, batch, table, options, seed).front().loss;
}

std::vector<double> coordinate_losses(const NetTopology& topology, const ParamVector& params,
                                      std::size_t j, std::span<const double> angles,
                                      std::span<const WeightedInput> batch,
                                      const ClassTable& table, std::size_t threads) {
  if (j >= params.size()) {
    throw std::out_of_range("coordinate_losses: coordinate out of range");
  }
  check_batch(batch);
  if (angles.empty()) {
    return {};
  }
  LossOptions options;
  options.threads = threads;
  const auto dists = class_distributions(topology, params, j, angles, batch, threads);
  const auto est = estimate_losses(dists, angles.size(), batch, table, options, 0);
  std::vector<double> out(est.size());
  for (std::size_t a = 0; a < est.size(); ++a) {
    out[a] = est[a].loss;
  }
  return out;
}

double optimal_angle(double theta, const std::array<double, 3>& losses) {
  const double numerator = 2.0 * losses[1] - losses[2] - losses[0];
  const double denominator = losses[2] - losses[0];
  return theta - std::atan2(numerator, denominator);
}

double sinusoid_amplitude(const std::array<double, 3>& losses) {
  const double numerator = 2.0 * losses[1] - losses[2] - losses[0];
  const double denominator = losses[2] - losses[0];
  return 0.5 * std::hypot(numerator, denominator);
}

CoordinateUpdate coordinate_update(const NetTopology& topology, ParamVector& params,
                                   std::size_t j, std::span<const WeightedInput> batch,
                                   const ClassTable& table, const LossOptions& options,
                                   Rng& rng) {
  if (j >= params.size()) {
    throw std::out_of_range("coordinate_update: coordinate " + std::to_string(j) +
                            " out of range");
  }
  check_batch(batch);
  const std::uint64_t seed = options.mode == EvalMode::Sampled ? rng.next_u64() : 0;

  CoordinateUpdate u;
  u.coordinate = j;
  u.theta_before = params[j];
  const std::array<double, 3> angles{u.theta_before, u.theta_before + kPi / 2.0,
                                     u.theta_before + kPi};
  const auto dists = class_distributions(topology, params, j, angles, batch, options.threads);
  const auto est = estimate_losses(dists, 3, batch, table, options, seed);
  for (std::size_t a = 0; a < 3; ++a) {
    u.losses[a] = est[a].loss;
    u.standard_error = std::max(u.standard_error, est[a].standard_error);
  }
  u.amplitude = sinusoid_amplitude(u.losses);

  const double tolerance = options.mode == EvalMode::Exact ? kExactAmplitudeTolerance
                                                           : 3.0 * u.standard_error;
  if (u.amplitude < tolerance || u.amplitude == 0.0) {
    u.skipped = true;
    u.theta_after = u.theta_before;
    u.predicted_loss = std::clamp(u.losses[0], 0.0, 1.0);
    return u;
  }
  u.theta_after = optimal_angle(u.theta_before, u.losses);
  u.predicted_loss = std::clamp(0.5 * (u.losses[0] + u.losses[2]) - u.amplitude, 0.0, 1.0);
  params[j] = u.theta_after;
  return u;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_statistic: empty sample");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0;
  std::size_t k = 0;
  double d = 0.0;
  while (i < x.size() && k < y.size()) {
    const double v = std::min(x[i], y[k]);
    while (i < x.size() && x[i] <= v) ++i;
    while (k < y.size() && y[k] <= v) ++k;
    const double fx = static_cast<double>(i) / static_cast<double>(x.size());
    const double fy = static_cast<double>(k) / static_cast<double>(y.size());
    d = std::max(d, std::abs(fx - fy));
  }
  return d;
}

std::size_t ks_batch_size(std::span<const double> train_pca1, std::span<const double> test_pca1,
                          double threshold, std::size_t max_batch, Rng& rng) {
  if (train_pca1.empty() || test_pca1.empty()) {
    throw std::invalid_argument("ks_batch_size: empty input");
  }
  const std::size_t cap = std::max<std::size_t>(1, std::min(max_batch, train_pca1.size()));
  auto passes = [&](std::size_t n) {
    const auto idx = rng.sample_without_replacement(train_pca1.size(), n);
    std::vector<double> batch(n);
    for (std::size_t i = 0; i < n; ++i) {
      batch[i] = train_pca1[idx[i]];
    }
    return ks_statistic(batch, test_pca1) <= threshold;
  };

  std::size_t failed = 0;
  std::size_t n = 1;
  for (;;) {
    if (passes(n)) {
      break;
    }
    if (n == cap) {
      return cap;
    }
    failed = n;
    n = std::min(2 * n, cap);
  }
  while (failed + 1 < n) {
    const std::size_t mid = failed + (n - failed) / 2;
    if (passes(mid)) {
      n = mid;
    } else {
      failed = mid;
    }
  }
  return n;
}

double wasserstein1(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("wasserstein1: empty sample");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::vector<double> grid;
  grid.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(grid));

  // Integrate |F_a - F_b| over the merged breakpoints.
  double total = 0.0;
  std::size_t i = 0;
  std::size_t k = 0;
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    while (i < x.size() && x[i] <= grid[g]) ++i;
    while (k < y.size() && y[k] <= grid[g]) ++k;
    const double fa = static_cast<double>(i) / static_cast<double>(x.size());
    const double fb = static_cast<double>(k) / static_cast<double>(y.size());
    total += std::abs(fa - fb) * (grid[g + 1] - grid[g]);
  }
  return total;
}

std::uint64_t wasserstein_shot_budget(std::span<const std::vector<double>> class_pca1,
                                      std::uint64_t max_shots) {
  if (class_pca1.size() < 2) {
    throw std::invalid_argument("wasserstein_shot_budget: need at least two classes");
  }
  double w_min = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < class_pca1.size(); ++a) {
    for (std::size_t b = a + 1; b < class_pca1.size(); ++b) {
      w_min = std::min(w_min, wasserstein1(class_pca1[a], class_pca1[b]));
    }
  }
  const std::uint64_t cap = (max_shots + 99) / 100 * 100;
  if (!(w_min > 0.0)) {
    return cap;
  }
  const double hundreds = std::ceil(1.0 / (w_min * w_min) / 100.0 - 1e-9);
  if (hundreds * 100.0 >= static_cast<double>(cap)) {
    return cap;
  }
  return static_cast<std::uint64_t>(std::max(1.0, hundreds)) * 100;
}

std::vector<double> predict_distribution(const NetTopology& topology, const ParamVector& params,
                                         const Bitstring& z) {
  StateVector state = input_state(topology, z);
  apply_net(state, topology, params);
  return class_distribution(state, topology.class_register());
}

Evaluation evaluate(const NetTopology& topology, const ParamVector& params,
                    const EncodedDataset& data, std::size_t threads) {
  std::vector<const std::pair<const Bitstring, std::vector<double>>*> rows;
  rows.reserve(data.joint().size());
  for (const auto& row : data.joint()) {
    rows.push_back(&row);
  }
  std::vector<std::vector<double>> dists(rows.size());
  detail::parallel_for(rows.size(), threads, [&](std::size_t i) {
    dists[i] = predict_distribution(topology, params, rows[i]->first);
  });

  const std::size_t n_classes = data.n_classes();
  double hit = 0.0;
  double correct = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::vector<double>& f = rows[i]->second;
    const std::vector<double>& p = dists[i];
    if (n_classes > p.size()) {
      throw std::invalid_argument("evaluate: more classes than the register can hold");
    }
    std::size_t predicted = 0;
    for (std::size_t y = 0; y < n_classes; ++y) {
      hit += f[y] * p[y];
      if (p[y] > p[predicted]) {
        predicted = y;
      }
    }
    correct += f[predicted];
  }
  return {std::clamp(1.0 - hit, 0.0, 1.0), correct};
}

namespace {

std::vector<WeightedInput> draw_batch(const EncodedDataset& train, std::size_t batch_size,
                                      Rng& rng) {
  if (batch_size == 0 || batch_size >= train.size()) {
    return full_batch(train);
  }
  const auto idx = rng.sample_without_replacement(train.size(), batch_size);
  return make_batch(train, idx);
}

std::size_t effective_batch(const EncodedDataset& train, std::size_t batch_size) {
  return batch_size == 0 ? train.size() : std::min(batch_size, train.size());
}

LossOptions loss_options(const TrainConfig& config, std::uint64_t shots) {
  LossOptions o;
  o.mode = config.mode;
  o.shots = shots;
  o.budget = config.budget;
  o.threads = config.threads;
  return o;
}

}  // namespace

void record_initial(const NetTopology& topology, TrainerState& state,
                    const EncodedDataset& train, const EncodedDataset& test,
                    const TrainConfig& config, Rng& rng) {
  const auto batch = draw_batch(train, config.batch_size, rng);
  HistoryEntry row;
  row.update = state.update_count;
  row.n_qubits = topology.n_qubits();
  row.coordinate = -1;
  row.batch_loss = std::clamp(
      batch_loss(topology, state.params, batch, train.class_table(),
                 loss_options(config, state.shots_current), rng),
      0.0, 1.0);
  const Evaluation e = evaluate(topology, state.params, test, config.threads);
  row.test_loss = e.loss;
  row.test_accuracy = e.accuracy;
  row.shots = config.mode == EvalMode::Sampled ? state.shots_current : 0;
  row.batch_size = effective_batch(train, config.batch_size);
  state.history.push_back(row);
}

void sweep(const NetTopology& topology, TrainerState& state, const EncodedDataset& train,
           const EncodedDataset& test, const TrainConfig& config,
           std::span<const std::size_t> order, Rng& rng) {
  if (state.params.size() != topology.parameter_count()) {
    throw std::invalid_argument("sweep: parameter vector does not match topology");
  }
  if (train.bit_length() != topology.n_x() || test.bit_length() != topology.n_x()) {
    throw std::invalid_argument("sweep: encoding width does not match data qubits");
  }
  if (config.mode == EvalMode::Sampled && state.shots_current == 0) {
    throw std::invalid_argument("sweep: sampled mode needs shots >= 1");
  }
  const LossOptions options = loss_options(config, state.shots_current);
  Evaluation last_test{};
  if (!state.history.empty()) {
    last_test = {state.history.back().test_loss, state.history.back().test_accuracy};
  }

  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t j = order[k];
    state.coordinate_cursor = k;
    const auto batch = draw_batch(train, config.batch_size, rng);
    const CoordinateUpdate u =
        coordinate_update(topology, state.params, j, batch, train.class_table(), options, rng);
    ++state.update_count;

    if (config.test_every > 0 && state.update_count % config.test_every == 0) {
      last_test = evaluate(topology, state.params, test, config.threads);
    }
    HistoryEntry row;
    row.update = state.update_count;
    row.n_qubits = topology.n_qubits();
    row.coordinate = static_cast<long>(j);
    row.batch_loss = u.predicted_loss;
    row.test_loss = last_test.loss;
    row.test_accuracy = last_test.accuracy;
    row.shots = config.mode == EvalMode::Sampled ? state.shots_current : 0;
    row.batch_size = effective_batch(train, config.batch_size);
    row.amplitude = u.amplitude;
    state.history.push_back(row);
  }
  state.coordinate_cursor = order.size();
}

TrainOutcome train_model(const NetTopology& topology, const EncodedDataset& train,
                         const EncodedDataset& test, const TrainConfig& config,
                         ParamVector initial_params) {
  Rng rng(stream_seed(config.seed, SeedStream::Training));
  return train_model(topology, train, test, config, std::move(initial_params), {}, rng);
}

TrainOutcome train_model(const NetTopology& topology, const EncodedDataset& train,
                         const EncodedDataset& test, const TrainConfig& config,
                         ParamVector initial_params, std::span<const std::size_t> warmup,
                         Rng& rng) {
  if (initial_params.size() != topology.parameter_count()) {
    throw std::invalid_argument("train_model: initial parameters do not match topology");
  }
  if (config.mode == EvalMode::Sampled && config.initial_shots == 0) {
    throw std::invalid_argument("train_model: sampled mode needs initial_shots >= 1");
  }
  TrainerState state;
  state.params = std::move(initial_params);
  state.shots_current = config.initial_shots;
  record_initial(topology, state, train, test, config, rng);
  if (!warmup.empty()) {
    sweep(topology, state, train, test, config, warmup, rng);
  }

  std::vector<std::size_t> order(topology.parameter_count());
  for (std::size_t s = 0; s < config.sweeps_per_size; ++s) {
    state.sweep_index = s;
    state.shots_current = config.initial_shots + s * config.shots_increment;
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (config.shuffle_order) {
      rng.shuffle(std::span<std::size_t>(order));
    }
    sweep(topology, state, train, test, config, order, rng);
  }
  return {std::move(state.params), std::move(state.history)};
}

}  // namespace bitbit
