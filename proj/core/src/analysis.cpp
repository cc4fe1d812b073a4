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

#include "bitbit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bitbit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double full_loss(const NetTopology& topology, const ParamVector& params,
                 std::span<const WeightedInput> batch, const ClassTable& table,
                 std::size_t threads) {
  LossOptions options;
  options.threads = threads;
  Rng unused(0);
  return batch_loss(topology, params, batch, table, options, unused);
}

}  // namespace

double CoordinateProfile::loss_at(double theta) const {
  return 1.0 - alpha - gamma * std::cos(theta) - sigma * std::sin(theta);
}

double CoordinateProfile::derivative_at(double theta) const {
  return gamma * std::sin(theta) - sigma * std::cos(theta);
}

CoordinateProfile profile_from_losses(std::size_t j, double theta,
                                      const std::array<double, 3>& losses) {
  // Constants in the frame centred on theta, then rotated back.
  const double gamma_local = 0.5 * (losses[2] - losses[0]);
  const double sigma_local = 0.5 * (losses[0] + losses[2]) - losses[1];
  const double c = std::cos(theta);
  const double s = std::sin(theta);

  CoordinateProfile p;
  p.j = j;
  p.alpha = 1.0 - 0.5 * (losses[0] + losses[2]);
  p.gamma = gamma_local * c - sigma_local * s;
  p.sigma = gamma_local * s + sigma_local * c;
  p.k = std::hypot(gamma_local, sigma_local);
  p.theta_star = optimal_angle(theta, losses);
  return p;
}

CoordinateProfile coordinate_profile(const NetTopology& topology, const ParamVector& params,
                                     std::size_t j, std::span<const WeightedInput> batch,
                                     const ClassTable& table, std::size_t threads) {
  if (j >= params.size()) {
    throw std::out_of_range("coordinate_profile: coordinate out of range");
  }
  const double theta = params[j];
  const std::array<double, 3> angles{theta, theta + kPi / 2.0, theta + kPi};
  const auto l = coordinate_losses(topology, params, j, angles, batch, table, threads);
  return profile_from_losses(j, theta, {l[0], l[1], l[2]});
}

CoordinateProfile coordinate_profile(const NetTopology& topology, const ParamVector& params,
                                     std::size_t j, const EncodedDataset& data,
                                     std::size_t threads) {
  const auto batch = full_batch(data);
  return coordinate_profile(topology, params, j, batch, data.class_table(), threads);
}

KjStatistics kj_statistics(const NetTopology& topology, const ParamVector& params,
                           const EncodedDataset& data, std::size_t n_coords, Rng& rng,
                           std::size_t threads) {
  if (n_coords == 0 || n_coords > params.size()) {
    throw std::invalid_argument("kj_statistics: need 1 <= n_coords <= parameter count");
  }
  const auto batch = full_batch(data);
  const auto coords = rng.sample_without_replacement(params.size(), n_coords);

  KjStatistics out;
  out.profiles.reserve(n_coords);
  double sum = 0.0;
  for (std::size_t j : coords) {
    out.profiles.push_back(
        coordinate_profile(topology, params, j, batch, data.class_table(), threads));
    sum += out.profiles.back().k;
    out.max = std::max(out.max, out.profiles.back().k);
  }
  out.mean = sum / static_cast<double>(n_coords);

  out.histogram.assign(kHistogramBins, 0);
  for (const CoordinateProfile& p : out.profiles) {
    std::size_t bin = 0;
    if (out.max > 0.0) {
      bin = static_cast<std::size_t>(p.k / out.max * static_cast<double>(kHistogramBins));
      bin = std::min(bin, kHistogramBins - 1);
    }
    ++out.histogram[bin];
  }
  return out;
}

double parameter_shift_gradient(const NetTopology& topology, const ParamVector& params,
                                std::size_t j, std::span<const WeightedInput> batch,
                                const ClassTable& table, std::size_t threads) {
  if (j >= params.size()) {
    throw std::out_of_range("parameter_shift_gradient: coordinate out of range");
  }
  const std::array<double, 2> angles{params[j] + kPi / 2.0, params[j] - kPi / 2.0};
  const auto l = coordinate_losses(topology, params, j, angles, batch, table, threads);
  return 0.5 * (l[0] - l[1]);
}

double parameter_shift_gradient(const NetTopology& topology, const ParamVector& params,
                                std::size_t j, const EncodedDataset& data,
                                std::size_t threads) {
  const auto batch = full_batch(data);
  return parameter_shift_gradient(topology, params, j, batch, data.class_table(), threads);
}

DescentCurve gradient_descent_baseline(const NetTopology& topology,
                                       const ParamVector& init_params,
                                       const EncodedDataset& data, double learning_rate,
                                       std::size_t steps, std::size_t threads) {
  if (init_params.size() != topology.parameter_count()) {
    throw std::invalid_argument("gradient_descent_baseline: parameter length mismatch");
  }
  const auto batch = full_batch(data);
  const ClassTable& table = data.class_table();
  ParamVector params = init_params;

  DescentCurve curve;
  std::size_t evaluations = 1;
  double loss = full_loss(topology, params, batch, table, threads);
  curve.points.push_back({0, evaluations, loss});

  std::vector<double> grad(params.size());
  for (std::size_t step = 1; step <= steps; ++step) {
    for (std::size_t j = 0; j < params.size(); ++j) {
      grad[j] = parameter_shift_gradient(topology, params, j, batch, table, threads);
    }
    evaluations += 2 * params.size();
    for (std::size_t j = 0; j < params.size(); ++j) {
      params[j] -= learning_rate * grad[j];
    }
    const double next = full_loss(topology, params, batch, table, threads);
    ++evaluations;
    if (next > loss + kDivergenceTolerance) {
      curve.divergent_steps.push_back(step);
    }
    loss = next;
    curve.points.push_back({step, evaluations, loss});
  }
  return curve;
}

DescentCurve coordinate_descent_curve(const NetTopology& topology,
                                      const ParamVector& init_params,
                                      const EncodedDataset& data, std::size_t updates,
                                      std::size_t threads) {
  if (init_params.size() != topology.parameter_count()) {
    throw std::invalid_argument("coordinate_descent_curve: parameter length mismatch");
  }
  const auto batch = full_batch(data);
  const ClassTable& table = data.class_table();
  ParamVector params = init_params;
  LossOptions options;
  options.threads = threads;
  Rng unused(0);

  DescentCurve curve;
  std::size_t evaluations = 1;
  double loss = full_loss(topology, params, batch, table, threads);
  curve.points.push_back({0, evaluations, loss});
  for (std::size_t step = 1; step <= updates; ++step) {
    const std::size_t j = (step - 1) % params.size();
    const CoordinateUpdate u = coordinate_update(topology, params, j, batch, table, options, unused);
    evaluations += 3;
    const double next = u.skipped ? u.losses[0] : 0.5 * (u.losses[0] + u.losses[2]) - u.amplitude;
    if (next > loss + kDivergenceTolerance) {
      curve.divergent_steps.push_back(step);
    }
    loss = next;
    curve.points.push_back({step, evaluations, loss});
  }
  return curve;
}

}  // namespace bitbit
