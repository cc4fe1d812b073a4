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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitbit/matrix.hpp"

namespace bitbit {

inline constexpr std::uint32_t kIdxImageMagic = 2051;
inline constexpr std::uint32_t kIdxLabelMagic = 2049;

class IdxError : public std::runtime_error {
 public:
  enum class Kind { Io, BadMagic, Truncated, DimensionOverflow };

  IdxError(Kind kind, std::size_t offset, const std::string& what)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Unsigned-byte IDX payload with its dimension sizes.
struct IdxArray {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> data;
};

IdxArray parse_idx(std::span<const std::uint8_t> bytes, std::uint32_t expected_magic);

/// N x (rows*cols) matrix of pixels / 255.
Matrix parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

Matrix read_idx_images(const std::filesystem::path& path);
std::vector<int> read_idx_labels(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_idx(const IdxArray& array, std::uint32_t magic);
void write_idx(const std::filesystem::path& path, const IdxArray& array, std::uint32_t magic);

}  // namespace bitbit
