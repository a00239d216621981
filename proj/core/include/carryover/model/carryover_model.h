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

#ifndef CARRYOVER_MODEL_CARRYOVER_MODEL_H_
#define CARRYOVER_MODEL_CARRYOVER_MODEL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "carryover/dialogue/candidates.h"
#include "carryover/encoders/encoders.h"
#include "carryover/model/config.h"
#include "carryover/numeric/tape.h"
#include "carryover/temporal/tda.h"
#include "carryover/temporal/time_mask.h"

namespace carryover {

// A context window with tokens already mapped to vocabulary ids.
struct PreparedWindow {
  std::size_t current_index = 0;
  std::vector<std::size_t> current_ids;
  std::vector<std::size_t> intent_ids;
  std::vector<std::size_t> user_history_ids;    // joined with separators
  std::vector<std::size_t> system_history_ids;  // joined with separators
  std::vector<std::vector<std::size_t>> user_turn_ids;
  std::vector<std::vector<std::size_t>> system_turn_ids;
  std::vector<double> user_gaps;    // seconds, per user history turn
  std::vector<double> system_gaps;  // seconds, per system history turn
  std::string domain;
};

struct PreparedCandidate {
  std::vector<std::size_t> key_ids;
  std::vector<std::size_t> value_ids;
  int distance_offset = 0;
  double temporal_distance = 0.0;
  double label = 0.0;
};

// Scores candidate slots: encodes the current turn and both histories,
// applies the variant's temporal path, and feeds the concatenated features
// through a tanh hidden layer and a sigmoid output.
class CarryoverModel {
 public:
  // `domains` fixes the one-hot layout for the domain-conditioned mask.
  CarryoverModel(ModelConfig config, Vocabulary vocab, std::vector<std::string> domains);

  CarryoverModel(const CarryoverModel&) = delete;
  CarryoverModel& operator=(const CarryoverModel&) = delete;
  CarryoverModel(CarryoverModel&&) = default;
  CarryoverModel& operator=(CarryoverModel&&) = default;

  const ModelConfig& config() const { return config_; }
  void set_threshold(double tau);
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<std::string>& domains() const { return domains_; }
  numeric::ParameterSet& parameters() { return params_; }
  const numeric::ParameterSet& parameters() const { return params_; }
  EmbeddingTable embeddings() const { return {&vocab_, embedding_}; }

  const std::optional<TimeMaskParams>& time_mask() const { return time_mask_; }
  const std::optional<TdaParams>& tda() const { return tda_; }

  struct DecoderParams {
    const numeric::Parameter* hidden_weight = nullptr;  // decoder_dim x input
    const numeric::Parameter* hidden_bias = nullptr;
    const numeric::Parameter* output_weight = nullptr;  // 1 x decoder_dim
    const numeric::Parameter* output_bias = nullptr;    // 1
  };
  const DecoderParams& decoder() const { return decoder_; }
  const LstmAttentionParams& current_encoder() const { return current_encoder_; }
  const LstmAttentionParams& user_encoder() const { return user_encoder_; }
  const LstmAttentionParams& system_encoder() const { return system_encoder_; }

  PreparedWindow prepare_window(const ContextWindow& window) const;
  PreparedCandidate prepare_candidate(const Candidate& candidate) const;

  // Records the forward pass for every candidate of one window; window
  // encodings are shared across candidates. Returns one probability each.
  std::vector<numeric::Var> forward(numeric::Tape& tape, const PreparedWindow& window,
                                    std::span<const PreparedCandidate> candidates) const;

  // Carryover probability. Throws ContractError if the candidate was not
  // drawn from `window`.
  double score_candidate(const ContextWindow& window, const Candidate& candidate) const;
  std::vector<double> score_window(const ContextWindow& window,
                                   std::span<const Candidate> candidates) const;
  std::vector<double> score_prepared(const PreparedWindow& window,
                                     std::span<const PreparedCandidate> candidates) const;

 private:
  struct WindowEncoding {
    numeric::Var current, user, system, intent;
    std::optional<numeric::Var> domain;
  };
  WindowEncoding encode_window(numeric::Tape& tape, const PreparedWindow& window) const;
  numeric::Var history_with_decay(numeric::Tape& tape,
                                  const std::vector<std::vector<std::size_t>>& turns,
                                  const std::vector<double>& gaps,
                                  const LstmAttentionParams& encoder) const;

  ModelConfig config_;
  Vocabulary vocab_;
  std::vector<std::string> domains_;
  numeric::ParameterSet params_;
  const numeric::Parameter* embedding_ = nullptr;
  LstmAttentionParams current_encoder_;
  LstmAttentionParams user_encoder_;
  LstmAttentionParams system_encoder_;
  DecoderParams decoder_;
  std::optional<TimeMaskParams> time_mask_;
  std::optional<TdaParams> tda_;
};

// Collects tokens from words, acts, and slots, in first-seen order.
Vocabulary build_vocabulary(std::span<const Dialogue> dialogues);
// Distinct turn domains, sorted.
std::vector<std::string> collect_domains(std::span<const Dialogue> dialogues);

// Carryover iff p >= tau. Throws RangeError outside [0, 1].
Label decide(double p, double tau);

// -[y ln p + (1 - y) ln(1 - p)] with p clamped to [1e-7, 1 - 1e-7].
double bce(double p, Label label);

// Final per-slot decision after merging repeated (key, value) occurrences by
// their maximum probability.
struct SlotDecision {
  Slot slot;
  double probability = 0.0;
  Label decision = Label::kNoCarryover;
};
std::vector<SlotDecision> reduce_duplicates(std::span<const Candidate> candidates,
                                            std::span<const double> probabilities, double tau);

}  // namespace carryover

#endif  // CARRYOVER_MODEL_CARRYOVER_MODEL_H_
