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

#ifndef CARRYOVER_ENCODERS_ENCODERS_H_
#define CARRYOVER_ENCODERS_ENCODERS_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "carryover/dialogue/dialogue.h"
#include "carryover/encoders/vocabulary.h"
#include "carryover/numeric/tape.h"
#include "carryover/random.h"

namespace carryover {

// Vocabulary plus its V x E embedding matrix.
struct EmbeddingTable {
  const Vocabulary* vocab = nullptr;
  const numeric::Parameter* matrix = nullptr;

  std::size_t dim() const { return matrix->value.shape()[1]; }
  std::vector<std::size_t> lookup(const std::vector<std::string>& tokens) const;
};

// Registers a V x E matrix drawn uniformly from [-range, range].
numeric::Parameter& add_embedding_matrix(numeric::ParameterSet& params, const std::string& name,
                                         std::size_t vocab_size, std::size_t dim, Rng& rng,
                                         double range);

// Overwrites rows for tokens found in a text file with lines of the form
// "token v1 ... vE". Unknown tokens are skipped. Returns rows written.
// Throws DataError on malformed lines or a dimension mismatch.
std::size_t load_pretrained_embeddings(const std::filesystem::path& path,
                                       const Vocabulary& vocab, numeric::Parameter& matrix);

// Single-layer LSTM followed by dot-product attention with a learned
// projection vector.
struct LstmAttentionParams {
  std::size_t input_dim = 0;   // E
  std::size_t hidden_dim = 0;  // H
  // Gate order: input, forget, output, candidate.
  const numeric::Parameter* w[4] = {};  // H x E
  const numeric::Parameter* u[4] = {};  // H x H
  const numeric::Parameter* b[4] = {};  // H
  const numeric::Parameter* attention = nullptr;  // H
};

LstmAttentionParams add_lstm_attention_params(numeric::ParameterSet& params,
                                              const std::string& prefix, std::size_t input_dim,
                                              std::size_t hidden_dim, Rng& rng, double range);

struct AttentionEncoding {
  numeric::Var output;   // H
  numeric::Var weights;  // one per step, sums to 1
  std::vector<numeric::Var> hidden;
};

// Mean of the embedding rows. Throws ContractError on an empty sequence.
numeric::Var embed_average(numeric::Tape& tape, std::span<const std::size_t> ids,
                           const EmbeddingTable& table);
numeric::Var embed_average(numeric::Tape& tape, const std::vector<std::string>& tokens,
                           const EmbeddingTable& table);

// embed_average(key tokens) followed by embed_average(value tokens); length 2E.
numeric::Var encode_slot(numeric::Tape& tape, const Slot& slot, const EmbeddingTable& table);

AttentionEncoding lstm_attention_encode(numeric::Tape& tape, std::span<const std::size_t> ids,
                                        const LstmAttentionParams& params,
                                        const EmbeddingTable& table);
AttentionEncoding lstm_attention_encode(numeric::Tape& tape,
                                        const std::vector<std::string>& tokens,
                                        const LstmAttentionParams& params,
                                        const EmbeddingTable& table);

// Token ids of the turns joined oldest to newest with the separator token.
std::vector<std::size_t> history_token_ids(std::span<const Turn> turns,
                                           const EmbeddingTable& table);

// Encodes the joined history; an empty history yields a zero vector of length H.
numeric::Var encode_history(numeric::Tape& tape, std::span<const Turn> turns,
                            const LstmAttentionParams& params, const EmbeddingTable& table);
numeric::Var encode_history_ids(numeric::Tape& tape, std::span<const std::size_t> joined_ids,
                                const LstmAttentionParams& params, const EmbeddingTable& table);

}  // namespace carryover

#endif  // CARRYOVER_ENCODERS_ENCODERS_H_
