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

#include "bitbit/metrics.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bitbit {

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_metrics(std::ostream& out, std::span<const HistoryEntry> history) {
  out << "update\tn_qubits\tcoordinate\tbatch_loss\ttest_loss\ttest_accuracy\tshots\t"
         "batch_size\tamplitude\n";
  for (const HistoryEntry& h : history) {
    out << h.update << '\t' << h.n_qubits << '\t' << h.coordinate << '\t' << real(h.batch_loss)
        << '\t' << real(h.test_loss) << '\t' << real(h.test_accuracy) << '\t' << h.shots << '\t'
        << h.batch_size << '\t' << real(h.amplitude) << '\n';
  }
}

void write_metrics(const std::filesystem::path& path, std::span<const HistoryEntry> history) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_metrics(out, history);
  if (!out) {
    throw std::runtime_error("write failed for " + path.string());
  }
}

}  // namespace bitbit
