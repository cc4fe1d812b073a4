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

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitbit/ansatz.hpp"
#include "bitbit/encoder.hpp"
#include "bitbit/trainer.hpp"

namespace bitbit {

inline constexpr int kCheckpointFormatVersion = 1;

/// Everything needed to evaluate, resume or grow a trained model.
struct Checkpoint {
  std::size_t n_y = 0;
  std::vector<int> class_labels;
  Encoder encoder;
  BitAllocation allocation;
  NetTopology topology;
  ParamVector params;
  std::vector<HistoryEntry> history;
  TrainConfig config;
  /// Named generator seeds used by the run.
  std::map<std::string, std::uint64_t> seeds;
};

class CheckpointError : public std::runtime_error {
 public:
  enum class Kind { Io, VersionMismatch, Schema, ParamLength };

  CheckpointError(Kind kind, std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        kind_(kind),
        line_(line) {}

  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

void write_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::string to_string(EvalMode mode);
std::string to_string(ShotBudget budget);
EvalMode parse_eval_mode(const std::string& text);
ShotBudget parse_shot_budget(const std::string& text);

}  // namespace bitbit
