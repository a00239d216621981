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

#include "carryover/encoders/encoders.h"

#include <fstream>
#include <sstream>

#include "carryover/error.h"

namespace carryover {

using numeric::Parameter;
using numeric::Tape;
using numeric::Tensor;
using numeric::Var;

namespace {

Tensor uniform_tensor(numeric::Shape shape, Rng& rng, double range) {
  std::vector<double> data(numeric::shape_size(shape));
  for (double& v : data) v = rng.uniform(-range, range);
  return Tensor(std::move(shape), std::move(data));
}

}  // namespace

std::vector<std::size_t> EmbeddingTable::lookup(const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab->index(t));
  return ids;
}

Parameter& add_embedding_matrix(numeric::ParameterSet& params, const std::string& name,
                                std::size_t vocab_size, std::size_t dim, Rng& rng, double range) {
  return params.add(name, uniform_tensor({vocab_size, dim}, rng, range));
}

std::size_t load_pretrained_embeddings(const std::filesystem::path& path, const Vocabulary& vocab,
                                       Parameter& matrix) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path.string());
  const std::size_t dim = matrix.value.shape()[1];
  std::size_t written = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    double v;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": malformed number");
    }
    if (values.size() != dim) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " values, got " + std::to_string(values.size()));
    }
    if (!vocab.contains(token)) continue;
    const std::size_t r = vocab.index(token);
    for (std::size_t j = 0; j < dim; ++j) matrix.value[r * dim + j] = values[j];
    ++written;
  }
  return written;
}

LstmAttentionParams add_lstm_attention_params(numeric::ParameterSet& params,
                                              const std::string& prefix, std::size_t input_dim,
                                              std::size_t hidden_dim, Rng& rng, double range) {
  static constexpr const char* kGates[4] = {"input", "forget", "output", "cell"};
  LstmAttentionParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  for (int g = 0; g < 4; ++g) {
    const std::string base = prefix + "." + kGates[g];
    p.w[g] = &params.add(base + ".w", uniform_tensor({hidden_dim, input_dim}, rng, range));
    p.u[g] = &params.add(base + ".u", uniform_tensor({hidden_dim, hidden_dim}, rng, range));
    p.b[g] = &params.add(base + ".b", uniform_tensor({hidden_dim}, rng, range));
  }
  p.attention = &params.add(prefix + ".attention", uniform_tensor({hidden_dim}, rng, range));
  return p;
}

Var embed_average(Tape& tape, std::span<const std::size_t> ids, const EmbeddingTable& table) {
  if (ids.empty()) throw ContractError("embed_average: empty token sequence");
  Var matrix = tape.param(*table.matrix);
  Var total = numeric::row(matrix, ids[0]);
  for (std::size_t i = 1; i < ids.size(); ++i) total = numeric::add(total, numeric::row(matrix, ids[i]));
  if (ids.size() == 1) return total;
  return numeric::scale(total, 1.0 / static_cast<double>(ids.size()));
}

Var embed_average(Tape& tape, const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  if (tokens.empty()) throw ContractError("embed_average: empty token sequence");
  const auto ids = table.lookup(tokens);
  return embed_average(tape, ids, table);
}

Var encode_slot(Tape& tape, const Slot& slot, const EmbeddingTable& table) {
  Var key = embed_average(tape, tokenize(slot.key), table);
  Var value = embed_average(tape, tokenize(slot.value), table);
  return numeric::concat({key, value});
}

AttentionEncoding lstm_attention_encode(Tape& tape, std::span<const std::size_t> ids,
                                        const LstmAttentionParams& params,
                                        const EmbeddingTable& table) {
  if (ids.empty()) throw ContractError("lstm_attention_encode: empty token sequence");
  if (table.dim() != params.input_dim) {
    throw DimensionError("lstm_attention_encode: embedding dim " + std::to_string(table.dim()) +
                         " vs encoder input dim " + std::to_string(params.input_dim));
  }
  Var matrix = tape.param(*table.matrix);
  Var w[4], u[4], b[4];
  for (int g = 0; g < 4; ++g) {
    w[g] = tape.param(*params.w[g]);
    u[g] = tape.param(*params.u[g]);
    b[g] = tape.param(*params.b[g]);
  }

  AttentionEncoding enc;
  enc.hidden.reserve(ids.size());
  Var h, c;
  for (std::size_t step = 0; step < ids.size(); ++step) {
    Var x = numeric::row(matrix, ids[step]);
    Var pre[4];
    for (int g = 0; g < 4; ++g) {
      pre[g] = numeric::add(numeric::matvec(w[g], x), b[g]);
      // The initial state is zero, so the recurrent term vanishes at step 0.
      if (step > 0) pre[g] = numeric::add(pre[g], numeric::matvec(u[g], h));
    }
    Var in_gate = numeric::sigmoid(pre[0]);
    Var forget_gate = numeric::sigmoid(pre[1]);
    Var out_gate = numeric::sigmoid(pre[2]);
    Var cand = numeric::tanh(pre[3]);
    Var fresh = numeric::hadamard(in_gate, cand);
    c = step == 0 ? fresh : numeric::add(numeric::hadamard(forget_gate, c), fresh);
    h = numeric::hadamard(out_gate, numeric::tanh(c));
    enc.hidden.push_back(h);
  }

  Var states = numeric::stack(enc.hidden);  // T x H
  Var scores = numeric::matvec(states, tape.param(*params.attention));
  enc.weights = numeric::softmax(scores);
  enc.output = numeric::matvec(numeric::transpose(states), enc.weights);
  return enc;
}

AttentionEncoding lstm_attention_encode(Tape& tape, const std::vector<std::string>& tokens,
                                        const LstmAttentionParams& params,
                                        const EmbeddingTable& table) {
  if (tokens.empty()) throw ContractError("lstm_attention_encode: empty token sequence");
  const auto ids = table.lookup(tokens);
  return lstm_attention_encode(tape, ids, params, table);
}

std::vector<std::size_t> history_token_ids(std::span<const Turn> turns,
                                           const EmbeddingTable& table) {
  std::vector<std::size_t> ids;
  for (std::size_t i = 0; i < turns.size(); ++i) {
    if (i > 0) ids.push_back(Vocabulary::kSeparatorIndex);
    for (const auto& w : turns[i].words) ids.push_back(table.vocab->index(w));
  }
  return ids;
}

Var encode_history_ids(Tape& tape, std::span<const std::size_t> joined_ids,
                       const LstmAttentionParams& params, const EmbeddingTable& table) {
  if (joined_ids.empty()) return tape.constant(Tensor::zeros({params.hidden_dim}));
  return lstm_attention_encode(tape, joined_ids, params, table).output;
}

Var encode_history(Tape& tape, std::span<const Turn> turns, const LstmAttentionParams& params,
                   const EmbeddingTable& table) {
  const auto ids = history_token_ids(turns, table);
  return encode_history_ids(tape, ids, params, table);
}

}  // namespace carryover
