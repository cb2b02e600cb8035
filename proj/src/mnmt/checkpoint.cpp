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

#include "mnmt/checkpoint.hpp"

#include "numerics/binary.hpp"
#include "numerics/errors.hpp"
#include "pipeline/fileio.hpp"

namespace mmt {

namespace {

constexpr char kMagic[4] = {'M', 'M', 'T', '1'};
constexpr std::uint32_t kFormatVersion = 1;

void put_vocab(BinaryWriter& w, const Vocabulary& v) {
  w.put<std::uint32_t>(static_cast<std::uint32_t>(v.size()));
  for (int id = 0; id < static_cast<int>(v.size()); ++id) {
    const auto& tok = v.token(id);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(tok.size()));
    w.bytes(tok);
    w.put<std::uint64_t>(v.frequency(id));
  }
}

Vocabulary get_vocab(BinaryReader& r) {
  const auto count = r.get<std::uint32_t>();
  Vocabulary v;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = r.get<std::uint32_t>();
    std::string tok = r.bytes(len);
    const auto freq = r.get<std::uint64_t>();
    if (i < static_cast<std::uint32_t>(Vocabulary::kNumSpecials)) {
      if (tok != v.token(static_cast<int>(i))) throw ParseError(r.source() + ": vocabulary specials out of order");
      continue;
    }
    v.add(tok, freq);
  }
  return v;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  const auto& cfg = ckpt.params.config;
  BinaryWriter w;
  w.bytes(std::string(kMagic, 4));
  w.put<std::uint32_t>(kFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(cfg.kind));
  for (std::size_t v : {cfg.src_vocab, cfg.tgt_vocab, cfg.emb, cfg.hidden, cfg.attention, cfg.spatial_dim,
                        cfg.global_dim, cfg.shared_dim}) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(v));
  }
  w.put<double>(cfg.lambda);
  w.put<double>(cfg.margin);
  w.put<double>(cfg.rho);
  w.put<std::uint64_t>(ckpt.source_vocab.hash());
  w.put<std::uint64_t>(ckpt.target_vocab.hash());

  w.put<std::uint32_t>(static_cast<std::uint32_t>(ckpt.params.tensors.size()));
  for (const auto& t : ckpt.params.tensors) {
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.value.rows()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(t.value.cols()));
    for (double v : t.value.data()) w.put<float>(static_cast<float>(v));
  }
  put_vocab(w, ckpt.source_vocab);
  put_vocab(w, ckpt.target_vocab);
  return w.str();
}

Checkpoint deserialize_checkpoint(const std::string& bytes, const std::string& source,
                                  const Vocabulary* expected_source, const Vocabulary* expected_target) {
  BinaryReader r(bytes, source);
  if (r.bytes(4) != std::string(kMagic, 4)) throw ParseError(source + ": not a model checkpoint (bad magic)");
  if (const auto version = r.get<std::uint32_t>(); version != kFormatVersion) {
    throw ParseError(source + ": unsupported checkpoint version " + std::to_string(version));
  }
  ModelConfig cfg;
  const auto kind = r.get<std::uint32_t>();
  if (kind > static_cast<std::uint32_t>(ModelKind::vag)) throw ParseError(source + ": unknown model kind");
  cfg.kind = static_cast<ModelKind>(kind);
  for (std::size_t* field : {&cfg.src_vocab, &cfg.tgt_vocab, &cfg.emb, &cfg.hidden, &cfg.attention, &cfg.spatial_dim,
                             &cfg.global_dim, &cfg.shared_dim}) {
    *field = r.get<std::uint32_t>();
  }
  cfg.lambda = r.get<double>();
  cfg.margin = r.get<double>();
  cfg.rho = r.get<double>();
  const auto source_hash = r.get<std::uint64_t>();
  const auto target_hash = r.get<std::uint64_t>();

  Checkpoint ckpt;
  try {
    ckpt.params = make_model(cfg, 0);
  } catch (const ConfigError& e) {
    throw ParseError(source + ": invalid config block: " + e.what());
  }
  const auto count = r.get<std::uint32_t>();
  if (count != ckpt.params.tensors.size()) {
    throw ParseError(source + ": " + std::to_string(count) + " tensors, model kind declares " +
                     std::to_string(ckpt.params.tensors.size()));
  }
  for (auto& t : ckpt.params.tensors) {
    const auto rows = r.get<std::uint32_t>();
    const auto cols = r.get<std::uint32_t>();
    if (rows != t.value.rows() || cols != t.value.cols()) {
      throw ParseError(source + ": tensor " + t.name + " is " + std::to_string(rows) + "x" + std::to_string(cols) +
                       ", expected " + t.value.shape_string());
    }
    for (auto& v : t.value.data()) v = static_cast<double>(r.get<float>());
    t.zero_grad();
  }
  ckpt.source_vocab = get_vocab(r);
  ckpt.target_vocab = get_vocab(r);
  if (!r.done()) throw ParseError(source + ": trailing bytes after vocabularies");

  if (ckpt.source_vocab.hash() != source_hash || ckpt.target_vocab.hash() != target_hash) {
    throw ConfigError(source + ": stored vocabulary does not match its recorded hash");
  }
  if (ckpt.source_vocab.size() != cfg.src_vocab || ckpt.target_vocab.size() != cfg.tgt_vocab) {
    throw ParseError(source + ": vocabulary sizes disagree with the config block");
  }
  if (expected_source && expected_source->hash() != source_hash) {
    throw ConfigError(source + ": source vocabulary hash mismatch");
  }
  if (expected_target && expected_target->hash() != target_hash) {
    throw ConfigError(source + ": target vocabulary hash mismatch");
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  write_file_atomic(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::string& path, const Vocabulary* expected_source,
                           const Vocabulary* expected_target) {
  return deserialize_checkpoint(read_file(path), path, expected_source, expected_target);
}

}  // namespace mmt
