// Copyright 2026 The mmtemb Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mnmt/features.hpp"

#include "numerics/binary.hpp"
#include "numerics/errors.hpp"
#include "pipeline/fileio.hpp"

namespace mmt {

namespace {
constexpr char kMagic[4] = {'M', 'M', 'T', 'F'};
}

FeatureSet::FeatureSet(std::uint32_t items, std::uint32_t rows_per_item, std::uint32_t dim)
    : items_(items), rows_(rows_per_item), dim_(dim),
      data_(static_cast<std::size_t>(items) * rows_per_item * dim, 0.0f) {}

Matrix FeatureSet::item(std::size_t i) const {
  if (i >= items_) throw ArgumentError("feature item " + std::to_string(i) + " out of range");
  Matrix m(rows_, dim_);
  const std::size_t base = i * rows_ * dim_;
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = static_cast<double>(data_[base + k]);
  return m;
}

Vector FeatureSet::global(std::size_t i) const {
  if (!is_global()) throw ConfigError("feature file holds spatial grids, not global vectors");
  return item(i).to_vector();
}

void FeatureSet::set_item(std::size_t i, const Matrix& block) {
  if (i >= items_) throw ArgumentError("feature item " + std::to_string(i) + " out of range");
  if (block.rows() != rows_ || block.cols() != dim_) {
    throw DimensionError("feature block " + block.shape_string() + " does not match " + std::to_string(rows_) + "x" +
                         std::to_string(dim_));
  }
  const std::size_t base = i * rows_ * dim_;
  for (std::size_t k = 0; k < block.size(); ++k) data_[base + k] = static_cast<float>(block[k]);
}

std::string FeatureSet::serialize() const {
  BinaryWriter w;
  w.bytes(std::string(kMagic, 4));
  w.put<std::uint32_t>(items_);
  w.put<std::uint32_t>(rows_);
  w.put<std::uint32_t>(dim_);
  for (float f : data_) w.put<float>(f);
  return w.str();
}

FeatureSet FeatureSet::deserialize(const std::string& bytes, const std::string& source) {
  BinaryReader r(bytes, source);
  if (r.bytes(4) != std::string(kMagic, 4)) throw ParseError(source + ": not a feature file (bad magic)");
  const auto items = r.get<std::uint32_t>();
  const auto rows = r.get<std::uint32_t>();
  const auto dim = r.get<std::uint32_t>();
  if (rows == 0 || dim == 0) throw ParseError(source + ": rows_per_item and dim must be positive");
  const std::size_t count = static_cast<std::size_t>(items) * rows * dim;
  if (r.remaining() != count * sizeof(float)) {
    throw ParseError(source + ": expected " + std::to_string(count) + " floats, found " +
                     std::to_string(r.remaining()) + " bytes");
  }
  FeatureSet fs(items, rows, dim);
  for (std::size_t k = 0; k < count; ++k) fs.data_[k] = r.get<float>();
  return fs;
}

void FeatureSet::save(const std::string& path) const { write_file_atomic(path, serialize()); }

FeatureSet FeatureSet::load(const std::string& path) { return deserialize(read_file(path), path); }

}  // namespace mmt
