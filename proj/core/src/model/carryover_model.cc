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

#include "carryover/model/carryover_model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "carryover/error.h"

namespace carryover {

using numeric::Tape;
using numeric::Tensor;
using numeric::Var;

namespace {

std::vector<std::size_t> act_ids(const std::string& act, const Vocabulary& vocab) {
  auto tokens = tokenize(act);
  if (tokens.empty()) return {Vocabulary::kUnknownIndex};
  std::vector<std::size_t> ids;
  for (const auto& t : tokens) ids.push_back(vocab.index(t));
  return ids;
}

std::vector<std::size_t> word_ids(const std::vector<std::string>& words, const Vocabulary& vocab) {
  std::vector<std::size_t> ids;
  ids.reserve(words.size());
  for (const auto& w : words) ids.push_back(vocab.index(w));
  return ids;
}

}  // namespace

CarryoverModel::CarryoverModel(ModelConfig config, Vocabulary vocab,
                               std::vector<std::string> domains)
    : config_(std::move(config)), vocab_(std::move(vocab)), domains_(std::move(domains)) {
  config_.validate();
  Rng rng(config_.seed);
  const double r = config_.init_range;
  const std::size_t E = config_.word_dim, H = config_.hidden_dim;

  // Registration order is shared by all variants so that equal seeds give
  // equal values for the common parameters; temporal parameters come last.
  embedding_ = &add_embedding_matrix(params_, "embedding", vocab_.size(), E, rng, r);
  current_encoder_ = add_lstm_attention_params(params_, "encoder.current", E, H, rng, r);
  user_encoder_ = add_lstm_attention_params(params_, "encoder.user", E, H, rng, r);
  system_encoder_ = add_lstm_attention_params(params_, "encoder.system", E, H, rng, r);

  auto uniform = [&](numeric::Shape shape) {
    std::vector<double> data(numeric::shape_size(shape));
    for (double& v : data) v = rng.uniform(-r, r);
    return Tensor(std::move(shape), std::move(data));
  };
  const std::size_t in = config_.decoder_input_dim(), hid = config_.decoder_dim;
  decoder_.hidden_weight = &params_.add("decoder.hidden.w", uniform({hid, in}));
  decoder_.hidden_bias = &params_.add("decoder.hidden.b", uniform({hid}));
  decoder_.output_weight = &params_.add("decoder.output.w", uniform({1, hid}));
  decoder_.output_bias = &params_.add("decoder.output.b", uniform({1}));

  if (auto mv = mask_variant_of(config_.variant)) {
    std::size_t cond = 0;
    if (*mv == MaskVariant::kIntent) cond = config_.intent_dim();
    if (*mv == MaskVariant::kDomain) cond = domains_.size();
    time_mask_ = add_time_mask_params(params_, "time_mask", *mv, config_.time_dim, cond,
                                      config_.slot_dim(), rng, r);
  } else if (config_.variant == ModelVariant::kTda) {
    tda_ = add_tda_params(params_, "tda");
  }
}

void CarryoverModel::set_threshold(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw RangeError("threshold must lie in [0, 1]");
  config_.threshold = tau;
}

PreparedWindow CarryoverModel::prepare_window(const ContextWindow& window) const {
  PreparedWindow p;
  p.current_index = window.current_index;
  p.current_ids = word_ids(window.current.words, vocab_);
  p.intent_ids = act_ids(window.current.act, vocab_);
  p.domain = window.current.domain;
  const EmbeddingTable table = embeddings();
  p.user_history_ids = history_token_ids(window.user_history, table);
  p.system_history_ids = history_token_ids(window.system_history, table);
  const double now = window.current.wall_clock;
  for (const auto& t : window.user_history) {
    p.user_turn_ids.push_back(word_ids(t.words, vocab_));
    p.user_gaps.push_back(round_to_millis(now - t.wall_clock));
  }
  for (const auto& t : window.system_history) {
    p.system_turn_ids.push_back(word_ids(t.words, vocab_));
    p.system_gaps.push_back(round_to_millis(now - t.wall_clock));
  }
  return p;
}

PreparedCandidate CarryoverModel::prepare_candidate(const Candidate& candidate) const {
  PreparedCandidate p;
  p.key_ids = word_ids(tokenize(candidate.slot.key), vocab_);
  p.value_ids = word_ids(tokenize(candidate.slot.value), vocab_);
  if (p.key_ids.empty() || p.value_ids.empty()) {
    throw ContractError("candidate slot has an empty key or value");
  }
  p.distance_offset = candidate.distance_offset;
  p.temporal_distance = candidate.temporal_distance;
  p.label = candidate.label ? label_value(*candidate.label) : 0.0;
  return p;
}

Var CarryoverModel::history_with_decay(Tape& tape,
                                       const std::vector<std::vector<std::size_t>>& turns,
                                       const std::vector<double>& gaps,
                                       const LstmAttentionParams& encoder) const {
  if (turns.empty()) return tape.constant(Tensor::zeros({config_.hidden_dim}));
  const EmbeddingTable table = embeddings();
  std::vector<Var> encoded;
  encoded.reserve(turns.size());
  for (const auto& ids : turns) encoded.push_back(lstm_attention_encode(tape, ids, encoder, table).output);
  std::vector<double> scaled;
  scaled.reserve(gaps.size());
  for (double g : gaps) scaled.push_back(config_.time_scale.apply(g));
  Var weights = tda_weights(tape, scaled, *tda_);
  return numeric::matvec(numeric::transpose(numeric::stack(encoded)), weights);
}

CarryoverModel::WindowEncoding CarryoverModel::encode_window(Tape& tape,
                                                             const PreparedWindow& window) const {
  const EmbeddingTable table = embeddings();
  WindowEncoding enc;
  enc.current = lstm_attention_encode(tape, window.current_ids, current_encoder_, table).output;
  if (tda_) {
    enc.user = history_with_decay(tape, window.user_turn_ids, window.user_gaps, user_encoder_);
    enc.system =
        history_with_decay(tape, window.system_turn_ids, window.system_gaps, system_encoder_);
  } else {
    enc.user = encode_history_ids(tape, window.user_history_ids, user_encoder_, table);
    enc.system = encode_history_ids(tape, window.system_history_ids, system_encoder_, table);
  }
  enc.intent = embed_average(tape, window.intent_ids, table);
  if (time_mask_ && time_mask_->variant == MaskVariant::kDomain && !domains_.empty()) {
    enc.domain = tape.constant(domain_one_hot(window.domain, domains_));
  }
  return enc;
}

std::vector<Var> CarryoverModel::forward(Tape& tape, const PreparedWindow& window,
                                         std::span<const PreparedCandidate> candidates) const {
  std::vector<Var> out;
  if (candidates.empty()) return out;
  out.reserve(candidates.size());
  const EmbeddingTable table = embeddings();
  const WindowEncoding enc = encode_window(tape, window);
  Var w1 = tape.param(*decoder_.hidden_weight);
  Var b1 = tape.param(*decoder_.hidden_bias);
  Var w2 = tape.param(*decoder_.output_weight);
  Var b2 = tape.param(*decoder_.output_bias);
  const int max_history = static_cast<int>(config_.max_history);

  for (const auto& cand : candidates) {
    Var slot = numeric::concat(
        {embed_average(tape, cand.key_ids, table), embed_average(tape, cand.value_ids, table)});
    if (time_mask_) {
      TimeConditioner cond{time_mask_->variant, std::nullopt};
      if (time_mask_->variant == MaskVariant::kIntent) cond.features = enc.intent;
      if (time_mask_->variant == MaskVariant::kDomain) cond.features = enc.domain;
      Var emb = time_embedding(tape, cand.temporal_distance, cond, *time_mask_, config_.time_scale);
      slot = apply_time_mask(slot, compute_time_mask(tape, emb, *time_mask_));
    }
    Var recency = tape.constant(recency_one_hot(cand.distance_offset, max_history));
    Var features = numeric::concat({enc.current, enc.user, enc.system, slot, enc.intent, recency});
    Var hidden = numeric::tanh(numeric::add(numeric::matvec(w1, features), b1));
    out.push_back(numeric::sigmoid(numeric::add(numeric::matvec(w2, hidden), b2)));
  }
  return out;
}

std::vector<double> CarryoverModel::score_prepared(
    const PreparedWindow& window, std::span<const PreparedCandidate> candidates) const {
  Tape tape;
  auto probs = forward(tape, window, candidates);
  std::vector<double> out;
  out.reserve(probs.size());
  for (const auto& p : probs) out.push_back(p.item());
  return out;
}

std::vector<double> CarryoverModel::score_window(const ContextWindow& window,
                                                 std::span<const Candidate> candidates) const {
  std::vector<PreparedCandidate> prepared;
  prepared.reserve(candidates.size());
  for (const auto& c : candidates) {
    const Turn* source = nullptr;
    if (c.source_turn == window.current_index) {
      source = &window.current;
    } else {
      for (std::size_t i = 0; i < window.user_history_index.size(); ++i) {
        if (window.user_history_index[i] == c.source_turn) source = &window.user_history[i];
      }
      for (std::size_t i = 0; i < window.system_history_index.size(); ++i) {
        if (window.system_history_index[i] == c.source_turn) source = &window.system_history[i];
      }
    }
    if (source == nullptr) {
      throw ContractError("candidate source turn " + std::to_string(c.source_turn) +
                          " is outside the context window");
    }
    if (std::find(source->slots.begin(), source->slots.end(), c.slot) == source->slots.end()) {
      throw ContractError("candidate slot " + c.slot.key + "=" + c.slot.value +
                          " does not occur in its source turn");
    }
    const double expected_gap = c.source_turn == window.current_index
                                    ? 0.0
                                    : round_to_millis(window.current.wall_clock - source->wall_clock);
    if (std::abs(expected_gap - c.temporal_distance) > 5e-4 ||
        c.distance_offset < 0 || c.distance_offset > static_cast<int>(config_.max_history) ||
        (c.distance_offset == 0) != (c.source_turn == window.current_index)) {
      throw ContractError("candidate features do not match the context window");
    }
    prepared.push_back(prepare_candidate(c));
  }
  return score_prepared(prepare_window(window), prepared);
}

double CarryoverModel::score_candidate(const ContextWindow& window,
                                       const Candidate& candidate) const {
  return score_window(window, std::span<const Candidate>(&candidate, 1)).front();
}

Vocabulary build_vocabulary(std::span<const Dialogue> dialogues) {
  Vocabulary vocab;
  for (const auto& d : dialogues) {
    for (const auto& turn : d.turns) {
      for (const auto& w : turn.words) vocab.add(w);
      for (const auto& t : tokenize(turn.act)) vocab.add(t);
      for (const auto& s : turn.slots) {
        for (const auto& t : tokenize(s.key)) vocab.add(t);
        for (const auto& t : tokenize(s.value)) vocab.add(t);
      }
    }
  }
  return vocab;
}

std::vector<std::string> collect_domains(std::span<const Dialogue> dialogues) {
  std::set<std::string> seen;
  for (const auto& d : dialogues) {
    for (const auto& turn : d.turns) {
      if (!turn.domain.empty()) seen.insert(turn.domain);
    }
  }
  return {seen.begin(), seen.end()};
}

Label decide(double p, double tau) {
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("probability must lie in [0, 1]");
  if (!(tau >= 0.0 && tau <= 1.0)) throw RangeError("threshold must lie in [0, 1]");
  return p >= tau ? Label::kCarryover : Label::kNoCarryover;
}

double bce(double p, Label label) {
  const double y = label_value(label);
  const double pc = std::clamp(p, numeric::kProbabilityClamp, 1.0 - numeric::kProbabilityClamp);
  return -(y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc));
}

std::vector<SlotDecision> reduce_duplicates(std::span<const Candidate> candidates,
                                            std::span<const double> probabilities, double tau) {
  if (candidates.size() != probabilities.size()) {
    throw DimensionError("reduce_duplicates: candidate and probability counts differ");
  }
  std::vector<SlotDecision> out;
  std::map<Slot, std::size_t> position;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto [it, inserted] = position.try_emplace(candidates[i].slot, out.size());
    if (inserted) {
      out.push_back({candidates[i].slot, probabilities[i], Label::kNoCarryover});
    } else {
      out[it->second].probability = std::max(out[it->second].probability, probabilities[i]);
    }
  }
  for (auto& d : out) d.decision = decide(d.probability, tau);
  return out;
}

}  // namespace carryover
