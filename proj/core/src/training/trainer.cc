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

#include "carryover/training/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "carryover/error.h"
#include "carryover/numeric/tensor.h"
#include "carryover/random.h"
#include "carryover/training/optimizer.h"

namespace carryover {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw RangeError("learning_rate must be positive");
  if (batch_size == 0) throw RangeError("batch_size must be positive");
  if (max_epochs == 0) throw RangeError("max_epochs must be positive");
  if (patience == 0) throw RangeError("patience must be at least 1");
  if (!(clip_norm > 0.0)) throw RangeError("clip_norm must be positive");
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"learning_rate", c.learning_rate}, {"batch_size", c.batch_size},
          {"max_epochs", c.max_epochs},       {"patience", c.patience},
          {"clip_norm", c.clip_norm},         {"seed", c.seed},
          {"checked", c.checked}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  try {
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.patience = j.value("patience", c.patience);
    c.clip_norm = j.value("clip_norm", c.clip_norm);
    c.seed = j.value("seed", c.seed);
    c.checked = j.value("checked", c.checked);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad training config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string format_log_line(const EpochLog& e) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu\t%.9f\t%.6f", e.epoch, e.loss, e.dev_f1);
  return buf;
}

std::vector<ScoredCandidate> score_examples(const CarryoverModel& model,
                                            std::span<const PreparedExample> examples) {
  std::vector<std::vector<double>> probs(examples.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      probs[i] = model.score_prepared(examples[i].window, examples[i].candidates);
    }
  };
  const std::size_t threads =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), examples.size());
  if (threads <= 1) {
    work(0, examples.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (examples.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < examples.size(); begin += chunk) {
      pool.emplace_back(work, begin, std::min(examples.size(), begin + chunk));
    }
  }
  std::vector<ScoredCandidate> out;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& cands = examples[i].candidates;
    for (std::size_t k = 0; k < cands.size(); ++k) {
      out.push_back({probs[i][k], cands[k].label > 0.5, cands[k].temporal_distance});
    }
  }
  return out;
}

std::vector<ScoredCandidate> score_examples(const CarryoverModel& model,
                                            std::span<const WindowExample> examples) {
  const auto prepared = prepare_examples(model, examples, true);
  return score_examples(model, std::span<const PreparedExample>(prepared));
}

ThresholdChoice tune_threshold(const CarryoverModel& model, std::span<const WindowExample> dev) {
  const auto scored = score_examples(model, dev);
  return tune_threshold_scored(scored);
}

EvalReport evaluate(const CarryoverModel& model, std::span<const WindowExample> test,
                    double threshold) {
  return evaluate_scored(score_examples(model, test), threshold);
}

namespace {

using Snapshot = std::vector<std::vector<double>>;

Snapshot snapshot(const numeric::ParameterSet& params) {
  Snapshot s;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto d = params[i].value.data();
    s.emplace_back(d.begin(), d.end());
  }
  return s;
}

void restore(numeric::ParameterSet& params, const Snapshot& s) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    std::copy(s[i].begin(), s[i].end(), params[i].value.data().begin());
  }
}

void check_parameters(const numeric::ParameterSet& params) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i].value.all_finite()) {
      throw NumericError("parameter '" + params[i].name + "' became non-finite");
    }
  }
}

double mean_loss(const CarryoverModel& model, std::span<const PreparedExample> examples) {
  const auto scored = score_examples(model, examples);
  double total = 0.0;
  for (const auto& s : scored) {
    total += bce(s.score, s.positive ? Label::kCarryover : Label::kNoCarryover);
  }
  return total / static_cast<double>(scored.size());
}

double dev_f1(const CarryoverModel& model, std::span<const PreparedExample> dev) {
  return evaluate_scored(score_examples(model, dev), 0.5).overall.f1();
}

std::size_t count_candidates(std::span<const PreparedExample> examples) {
  std::size_t n = 0;
  for (const auto& ex : examples) n += ex.candidates.size();
  return n;
}

}  // namespace

TrainingSummary train_model(CarryoverModel& model, std::span<const WindowExample> train,
                            std::span<const WindowExample> dev, const TrainConfig& config,
                            const EpochCallback& on_epoch) {
  config.validate();
  const auto train_set = prepare_examples(model, train, true);
  const auto dev_set = prepare_examples(model, dev, true);
  if (count_candidates(train_set) == 0) throw DataError("training split has no candidates");
  if (count_candidates(dev_set) == 0) throw DataError("dev split has no candidates");

  numeric::ParameterSet& params = model.parameters();
  Adam adam(params, {.learning_rate = config.learning_rate});
  Rng rng(config.seed);

  TrainingSummary summary;
  auto record = [&](EpochLog entry) {
    summary.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  };

  record({0, mean_loss(model, train_set), dev_f1(model, dev_set)});
  summary.best_epoch = 0;
  summary.best_dev_f1 = summary.log.back().dev_f1;
  Snapshot best = snapshot(params);
  std::size_t stale = 0;

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    // Fisher-Yates with the project Rng keeps the order platform independent.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.integer(0, i - 1))]);
    }
    double epoch_loss = 0.0;
    std::size_t epoch_count = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      numeric::Gradients grads;
      std::size_t batch_count = 0;
      for (std::size_t b = begin; b < end; ++b) {
        const PreparedExample& ex = train_set[order[b]];
        if (ex.candidates.empty()) continue;
        numeric::Tape tape;
        const auto probs = model.forward(tape, ex.window, ex.candidates);
        std::vector<numeric::Var> losses;
        losses.reserve(probs.size());
        for (std::size_t k = 0; k < probs.size(); ++k) {
          losses.push_back(numeric::bce_loss(probs[k], ex.candidates[k].label));
        }
        const numeric::Var total = numeric::sum(numeric::concat(losses));
        epoch_loss += total.item();
        tape.backward(total, &grads);
        batch_count += probs.size();
      }
      if (batch_count == 0) continue;
      epoch_count += batch_count;
      grads.scale(1.0 / static_cast<double>(batch_count));
      clip_gradients(grads, params, config.clip_norm);
      adam.step(grads);
      if (config.checked) check_parameters(params);
    }

    const double f1 = dev_f1(model, dev_set);
    record({epoch, epoch_loss / static_cast<double>(epoch_count), f1});
    if (f1 > summary.best_dev_f1) {
      summary.best_dev_f1 = f1;
      summary.best_epoch = epoch;
      best = snapshot(params);
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
    if (summary.best_dev_f1 >= 1.0) break;  // cannot improve further
  }
  restore(params, best);
  return summary;
}

TrainingResult train(std::span<const Dialogue> corpus, const ModelConfig& model_config,
                     const TrainConfig& train_config, const EpochCallback& on_epoch) {
  const auto train_dialogues = select_split(corpus, "train");
  const auto dev_dialogues = select_split(corpus, "dev");
  if (train_dialogues.empty()) throw DataError("corpus has no 'train' split");
  if (dev_dialogues.empty()) throw DataError("corpus has no 'dev' split");

  CarryoverModel model(model_config, build_vocabulary(train_dialogues),
                       collect_domains(train_dialogues));
  const auto train_examples = build_examples(train_dialogues, model_config.max_history);
  const auto dev_examples = build_examples(dev_dialogues, model_config.max_history);
  auto summary = train_model(model, train_examples, dev_examples, train_config, on_epoch);
  return {std::move(model), std::move(summary)};
}

}  // namespace carryover
