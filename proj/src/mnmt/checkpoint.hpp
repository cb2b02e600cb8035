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

#include <string>

#include "embedding/vocabulary.hpp"
#include "mnmt/params.hpp"

namespace mmt {

/// Trained model plus the vocabularies its embedding tables are indexed by.
struct Checkpoint {
  ModelParams params;
  Vocabulary source_vocab;
  Vocabulary target_vocab;
};

// Layout, little-endian:
//   "MMT1", u32 format version
//   config: u32 kind, u32 src_vocab, tgt_vocab, emb, hidden, attention,
//           spatial_dim, global_dim, shared_dim, f64 lambda, margin, rho,
//           u64 source vocab hash, u64 target vocab hash
//   u32 tensor count, then per tensor in declaration order:
//           u32 rows, u32 cols, rows*cols f32
//   vocabularies (source, target): u32 count, then per token
//           u32 byte length, bytes, u64 frequency
std::string serialize_checkpoint(const Checkpoint& ckpt);

/// Rejects bad magic, shape mismatches, and vocabularies whose hash differs
/// from the config block or from `expected_*` when given.
Checkpoint deserialize_checkpoint(const std::string& bytes, const std::string& source = "<bytes>",
                                  const Vocabulary* expected_source = nullptr,
                                  const Vocabulary* expected_target = nullptr);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path, const Vocabulary* expected_source = nullptr,
                           const Vocabulary* expected_target = nullptr);

}  // namespace mmt
