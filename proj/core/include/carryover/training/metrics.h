// Copyright 2026 The Carryover Authors.
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

#ifndef CARRYOVER_TRAINING_METRICS_H_
#define CARRYOVER_TRAINING_METRICS_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace carryover {

// Counts for the carryover (positive) class.
struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  void add(bool predicted, bool gold);
  std::size_t total() const { return tp + fp + fn + tn; }
  double precision() const;
  double recall() const;
  // Harmonic mean of precision and recall; 0 when both are 0.
  double f1() const;
};

// Temporal-distance bins: the current turn (exactly 0 s), (0,15], (15,30],
// (30,60] and (60,inf). Every nonnegative distance falls in exactly one.
inline constexpr std::size_t kBinCount = 5;
inline constexpr std::array<std::string_view, kBinCount> kBinNames = {
    "0", "(0,15]", "(15,30]", "(30,60]", "(60,inf)"};
std::size_t temporal_bin(double seconds);

struct ScoredCandidate {
  double score = 0.0;
  bool positive = false;
  double temporal_distance = 0.0;
};

struct BinReport {
  std::string name;
  Confusion confusion;
};

struct EvalReport {
  double threshold = 0.5;
  Confusion overall;
  std::vector<BinReport> bins;

  std::size_t count() const { return overall.total(); }
  // Tab-separated table, one row per scope ("overall" then each bin).
  std::string to_tsv() const;
  nlohmann::json to_json() const;
};

EvalReport evaluate_scored(std::span<const ScoredCandidate> scored, double threshold);

struct ThresholdChoice {
  double threshold = 0.5;
  double f1 = 0.0;
};

// Sweeps the threshold over the distinct scores and keeps the one with the
// highest F1, preferring the smallest on ties. Throws DataError when empty.
ThresholdChoice tune_threshold_scored(std::span<const ScoredCandidate> scored);

}  // namespace carryover

#endif  // CARRYOVER_TRAINING_METRICS_H_
