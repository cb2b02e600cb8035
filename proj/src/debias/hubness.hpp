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
#include <string>
#include <vector>

#include "debias/neighbors.hpp"

namespace mmt {

struct HubEntry {
  int id;
  std::string word;
  std::size_t n_k;
};

/// k-occurrence statistics: n_k(x) = |{w : x in kNN(w)}| over non-special words.
struct HubnessReport {
  std::size_t k = 0;
  Metric metric = Metric::cosine;
  std::vector<std::size_t> n_k;  // indexed by vocabulary id; specials stay 0
  double skewness = 0.0;          // population third standardized moment
  bool skewness_defined = true;   // false with fewer than 3 words; equal counts give 0
  std::vector<HubEntry> top_hubs; // n_k desc, id asc

  /// {"k", "metric", "skewness", "skewness_defined", "top_hubs": [{"word", "n_k"}]}
  std::string to_json(std::size_t top) const;
};

HubnessReport hubness_report(const EmbeddingTable& table, std::size_t k, Metric metric = Metric::cosine);

/// Population skewness; returns false via `defined` when it does not exist.
double population_skewness(const std::vector<double>& values, bool* defined = nullptr);

}  // namespace mmt
