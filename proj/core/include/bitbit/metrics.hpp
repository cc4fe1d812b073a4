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

#include <filesystem>
#include <ostream>
#include <span>

#include "bitbit/trainer.hpp"

namespace bitbit {

/// Tab-separated, one header line then one row per history entry. Columns:
/// update n_qubits coordinate batch_loss test_loss test_accuracy shots
/// batch_size amplitude.
void write_metrics(std::ostream& out, std::span<const HistoryEntry> history);
void write_metrics(const std::filesystem::path& path, std::span<const HistoryEntry> history);

}  // namespace bitbit
