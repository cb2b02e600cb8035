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

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>

#include "numerics/errors.hpp"

namespace mmt {

// Little-endian primitives for the binary artifact formats.

template <typename T>
T to_little_endian(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class BinaryWriter {
 public:
  template <typename T>
  void put(T v) {
    v = to_little_endian(v);
    out_.append(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const std::string& s) { out_ += s; }
  const std::string& str() const { return out_; }

 private:
  std::string out_;
};

class BinaryReader {
 public:
  BinaryReader(const std::string& data, std::string source) : data_(data), source_(std::move(source)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return to_little_endian(v);
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }
  const std::string& source() const { return source_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw ParseError(source_ + ": truncated at byte " + std::to_string(pos_));
  }

  const std::string& data_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace mmt
