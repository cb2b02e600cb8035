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

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "numerics/matrix.hpp"

namespace mmt {

/// Image feature container: "MMTF", then u32 item_count, u32 rows_per_item,
/// u32 dim, then item_count * rows_per_item * dim f32, all little-endian.
/// rows_per_item == 1 holds global (pool5) vectors; > 1 holds spatial grids.
class FeatureSet {
 public:
  FeatureSet() = default;
  FeatureSet(std::uint32_t items, std::uint32_t rows_per_item, std::uint32_t dim);

  std::uint32_t items() const { return items_; }
  std::uint32_t rows_per_item() const { return rows_; }
  std::uint32_t dim() const { return dim_; }
  bool is_global() const { return rows_ == 1; }

  /// rows_per_item x dim block of item i.
  Matrix item(std::size_t i) const;
  Vector global(std::size_t i) const;
  void set_item(std::size_t i, const Matrix& block);

  std::string serialize() const;
  static FeatureSet deserialize(const std::string& bytes, const std::string& source = "<bytes>");

  void save(const std::string& path) const;
  static FeatureSet load(const std::string& path);

 private:
  std::uint32_t items_ = 0;
  std::uint32_t rows_ = 0;
  std::uint32_t dim_ = 0;
  std::vector<float> data_;
};

}  // namespace mmt
