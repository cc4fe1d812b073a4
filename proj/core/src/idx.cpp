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

#include "bitbit/idx.hpp"

#include <fstream>
#include <iterator>
#include <limits>

namespace bitbit {

namespace {

constexpr std::size_t kMaxElements = std::size_t{1} << 34;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (bytes.size() < offset + 4) {
    throw IdxError(IdxError::Kind::Truncated, bytes.size(), "IDX header is truncated");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IdxError(IdxError::Kind::Io, 0, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

}  // namespace

IdxArray parse_idx(std::span<const std::uint8_t> bytes, std::uint32_t expected_magic) {
  const std::uint32_t magic = read_be32(bytes, 0);
  if (magic != expected_magic) {
    throw IdxError(IdxError::Kind::BadMagic, 0,
                   "IDX magic " + std::to_string(magic) + ", expected " +
                       std::to_string(expected_magic));
  }
  // The low byte of the magic is the rank; 0x08 in the third byte is uint8.
  const std::size_t rank = magic & 0xffu;
  IdxArray out;
  std::size_t count = 1;
  for (std::size_t i = 0; i < rank; ++i) {
    const std::size_t offset = 4 + 4 * i;
    const std::uint32_t d = read_be32(bytes, offset);
    if (d != 0 && count > kMaxElements / d) {
      throw IdxError(IdxError::Kind::DimensionOverflow, offset,
                     "IDX dimensions exceed the supported element count");
    }
    count *= d;
    out.dims.push_back(d);
  }
  const std::size_t header = 4 + 4 * rank;
  if (bytes.size() - header < count) {
    throw IdxError(IdxError::Kind::Truncated, bytes.size(),
                   "IDX payload has " + std::to_string(bytes.size() - header) +
                       " bytes, expected " + std::to_string(count));
  }
  out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header),
                  bytes.begin() + static_cast<std::ptrdiff_t>(header + count));
  return out;
}

Matrix parse_idx_images(std::span<const std::uint8_t> bytes) {
  IdxArray a = parse_idx(bytes, kIdxImageMagic);
  const std::size_t n = a.dims[0];
  const std::size_t d = static_cast<std::size_t>(a.dims[1]) * a.dims[2];
  Matrix m(n, d);
  const std::span<double> out = m.data();
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    out[i] = static_cast<double>(a.data[i]) / 255.0;
  }
  return m;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  IdxArray a = parse_idx(bytes, kIdxLabelMagic);
  return {a.data.begin(), a.data.end()};
}

Matrix read_idx_images(const std::filesystem::path& path) {
  return parse_idx_images(slurp(path));
}

std::vector<int> read_idx_labels(const std::filesystem::path& path) {
  return parse_idx_labels(slurp(path));
}

std::vector<std::uint8_t> serialize_idx(const IdxArray& array, std::uint32_t magic) {
  if ((magic & 0xffu) != array.dims.size()) {
    throw std::invalid_argument("serialize_idx: rank does not match the magic number");
  }
  std::size_t count = 1;
  for (std::uint32_t d : array.dims) {
    count *= d;
  }
  if (count != array.data.size()) {
    throw std::invalid_argument("serialize_idx: payload size does not match dimensions");
  }
  std::vector<std::uint8_t> out;
  out.reserve(4 + 4 * array.dims.size() + array.data.size());
  put_be32(out, magic);
  for (std::uint32_t d : array.dims) {
    put_be32(out, d);
  }
  out.insert(out.end(), array.data.begin(), array.data.end());
  return out;
}

void write_idx(const std::filesystem::path& path, const IdxArray& array, std::uint32_t magic) {
  const auto bytes = serialize_idx(array, magic);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IdxError(IdxError::Kind::Io, 0, "cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IdxError(IdxError::Kind::Io, 0, "write failed for " + path.string());
  }
}

}  // namespace bitbit
