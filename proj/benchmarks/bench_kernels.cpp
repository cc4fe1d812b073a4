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

#include <benchmark/benchmark.h>

#include <vector>

#include "bitbit/ansatz.hpp"
#include "bitbit/encoder.hpp"
#include "bitbit/statevector.hpp"
#include "bitbit/trainer.hpp"

namespace {

using namespace bitbit;

void BM_PauliRotation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  StateVector s = StateVector::basis(n, 1);
  const std::vector<std::size_t> support{0, n - 1};
  const std::vector<Pauli> paulis{Pauli::X, Pauli::Y};
  const PauliString p = PauliString::compile(support, paulis, n);
  for (auto _ : state) {
    apply_pauli_rotation(s, p, 0.37);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.dimension()));
}
BENCHMARK(BM_PauliRotation)->DenseRange(4, 16, 4);

void BM_ApplyNet(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const NetTopology topo = build_topology(n - 2, 2);
  Rng rng(1);
  const ParamVector params = init_params(topo, rng);
  for (auto _ : state) {
    StateVector s = StateVector::basis(n, 3);
    apply_net(s, topo, params);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.counters["params"] = static_cast<double>(topo.parameter_count());
}
BENCHMARK(BM_ApplyNet)->DenseRange(4, 12, 2);

void BM_CoordinateUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t n_x = n - 2;
  const NetTopology topo = build_topology(n_x, 2);
  Rng rng(2);
  std::vector<EncodedSample> samples(150);
  for (EncodedSample& s : samples) {
    s.z = {rng.index(std::size_t{1} << n_x), n_x};
    s.y = static_cast<int>(rng.index(4));
  }
  const EncodedDataset data(samples, n_x, 4);
  const auto batch = full_batch(data);
  ParamVector params = init_params(topo, rng);
  LossOptions options;
  options.mode = state.range(1) ? EvalMode::Sampled : EvalMode::Exact;
  options.shots = 900;
  std::size_t j = 0;
  for (auto _ : state) {
    const CoordinateUpdate u =
        coordinate_update(topo, params, j, batch, data.class_table(), options, rng);
    benchmark::DoNotOptimize(u.amplitude);
    j = (j + 1) % params.size();
  }
}
BENCHMARK(BM_CoordinateUpdate)->ArgsProduct({{4, 6, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_AllocateBits(benchmark::State& state) {
  Rng rng(3);
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (double& s : scores) s = rng.uniform01();
  for (auto _ : state) {
    benchmark::DoNotOptimize(allocate_bits(scores, 32));
  }
}
BENCHMARK(BM_AllocateBits)->Arg(8)->Arg(64)->Arg(784);

}  // namespace
BENCHMARK_MAIN();
