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

#include "bitbit/ansatz.hpp"
#include "bitbit/encoder.hpp"
#include "bitbit/rng.hpp"
#include "bitbit/trainer.hpp"

namespace bitbit {

/// L(theta) = 1 - alpha - gamma cos(theta) - sigma sin(theta) along one
/// coordinate, all other parameters held fixed.
struct CoordinateProfile {
  std::size_t j = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  double sigma = 0.0;
  double k = 0.0;
  double theta_star = 0.0;

  double loss_at(double theta) const;
  double derivative_at(double theta) const;
};

/// Profile from the three exact evaluations used by the coordinate update.
CoordinateProfile profile_from_losses(std::size_t j, double theta,
                                      const std::array<double, 3>& losses);

CoordinateProfile coordinate_profile(const NetTopology& topology, const ParamVector& params,
                                     std::size_t j, std::span<const WeightedInput> batch,
                                     const ClassTable& table, std::size_t threads = 1);

/// Full-dataset form.
CoordinateProfile coordinate_profile(const NetTopology& topology, const ParamVector& params,
                                     std::size_t j, const EncodedDataset& data,
                                     std::size_t threads = 1);

inline constexpr std::size_t kDefaultProfileCoords = 50;
inline constexpr std::size_t kHistogramBins = 30;

struct KjStatistics {
  double mean = 0.0;
  double max = 0.0;
  /// kHistogramBins uniform bins over [0, max].
  std::vector<std::size_t> histogram;
  std::vector<CoordinateProfile> profiles;
};

KjStatistics kj_statistics(const NetTopology& topology, const ParamVector& params,
                           const EncodedDataset& data, std::size_t n_coords, Rng& rng,
                           std::size_t threads = 1);

double parameter_shift_gradient(const NetTopology& topology, const ParamVector& params,
                                std::size_t j, std::span<const WeightedInput> batch,
                                const ClassTable& table, std::size_t threads = 1);

double parameter_shift_gradient(const NetTopology& topology, const ParamVector& params,
                                std::size_t j, const EncodedDataset& data,
                                std::size_t threads = 1);

struct CurvePoint {
  std::size_t step = 0;
  /// Loss evaluations spent so far, shifted evaluations included.
  std::size_t evaluations = 0;
  double loss = 0.0;
};

struct DescentCurve {
  std::vector<CurvePoint> points;
  /// Steps whose loss rose by more than the tolerance.
  std::vector<std::size_t> divergent_steps;

  bool diverged() const { return !divergent_steps.empty(); }
};

inline constexpr double kDivergenceTolerance = 1e-12;

/// Full-gradient descent with parameter-shift gradients.
DescentCurve gradient_descent_baseline(const NetTopology& topology,
                                       const ParamVector& init_params,
                                       const EncodedDataset& data, double learning_rate,
                                       std::size_t steps, std::size_t threads = 1);

/// Exact coordinate updates cycling through the coordinates in order.
DescentCurve coordinate_descent_curve(const NetTopology& topology,
                                      const ParamVector& init_params,
                                      const EncodedDataset& data, std::size_t updates,
                                      std::size_t threads = 1);

}  // namespace bitbit
