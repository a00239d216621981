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

#ifndef CARRYOVER_TRAINING_TRAINER_H_
#define CARRYOVER_TRAINING_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "carryover/model/carryover_model.h"
#include "carryover/training/examples.h"
#include "carryover/training/metrics.h"

namespace carryover {

struct TrainConfig {
  double learning_rate = 1e-3;
  std::size_t batch_size = 32;
  std::size_t max_epochs = 30;
  std::size_t patience = 5;
  double clip_norm = 5.0;
  std::uint64_t seed = 1;
  // Verifies every parameter is finite after each optimizer step.
  bool checked = false;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
// Missing keys keep their defaults.
TrainConfig train_config_from_json(const nlohmann::json& j);

struct EpochLog {
  std::size_t epoch = 0;  // 0 is the untrained model
  double loss = 0.0;      // mean BCE over training candidates
  double dev_f1 = 0.0;    // at threshold 0.5
};

// "epoch\tloss\tdev_f1" with fixed precision.
std::string format_log_line(const EpochLog& entry);

using EpochCallback = std::function<void(const EpochLog&)>;

struct TrainingSummary {
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  double best_dev_f1 = 0.0;
};

// Trains `model` in place with Adam on shuffled minibatches of windows,
// stopping early on dev F1 and restoring the best-dev parameters. Throws
// DataError if either set has no candidates.
TrainingSummary train_model(CarryoverModel& model, std::span<const WindowExample> train,
                            std::span<const WindowExample> dev, const TrainConfig& config,
                            const EpochCallback& on_epoch = {});

struct TrainingResult {
  CarryoverModel model;
  TrainingSummary summary;
};

// Builds vocabulary and domains from the "train" split, then trains with the
// "dev" split for model selection.
TrainingResult train(std::span<const Dialogue> corpus, const ModelConfig& model_config,
                     const TrainConfig& train_config, const EpochCallback& on_epoch = {});

// Scores every candidate; work is split across hardware threads and the
// result order does not depend on the split.
std::vector<ScoredCandidate> score_examples(const CarryoverModel& model,
                                            std::span<const PreparedExample> examples);
std::vector<ScoredCandidate> score_examples(const CarryoverModel& model,
                                            std::span<const WindowExample> examples);

ThresholdChoice tune_threshold(const CarryoverModel& model, std::span<const WindowExample> dev);
EvalReport evaluate(const CarryoverModel& model, std::span<const WindowExample> test,
                    double threshold);

}  // namespace carryover

#endif  // CARRYOVER_TRAINING_TRAINER_H_
