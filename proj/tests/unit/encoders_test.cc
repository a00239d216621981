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

#include <filesystem>
#include <fstream>
#include <vector>

#include <gtest/gtest.h>

#include "carryover/encoders/encoders.h"
#include "carryover/encoders/vocabulary.h"
#include "carryover/error.h"
#include "carryover/numeric/gradcheck.h"
#include "oracle.h"
#include "test_util.h"

namespace carryover {
namespace {

using numeric::Parameter;
using numeric::ParameterSet;
using numeric::Tape;
using numeric::Tensor;

struct Fixture {
  Vocabulary vocab;
  ParameterSet params;
  Parameter* matrix = nullptr;
  LstmAttentionParams lstm;

  Fixture(std::size_t E, std::size_t H, std::uint64_t seed) {
    for (const char* t : {"how", "far", "is", "issaquah", "city", "the", "weather"}) vocab.add(t);
    Rng rng(seed);
    matrix = &add_embedding_matrix(params, "embedding", vocab.size(), E, rng, 0.5);
    lstm = add_lstm_attention_params(params, "enc", E, H, rng, 0.5);
  }
  EmbeddingTable table() const { return {&vocab, matrix}; }
};

oracle::Lstm oracle_of(const LstmAttentionParams& p) {
  oracle::Lstm o;
  for (int g = 0; g < 4; ++g) {
    o.w[g] = oracle::to_mat(p.w[g]->value);
    o.u[g] = oracle::to_mat(p.u[g]->value);
    o.b[g] = oracle::to_vec(p.b[g]->value);
  }
  o.attention = oracle::to_vec(p.attention->value);
  return o;
}

oracle::Vec row_of(const Parameter& m, std::size_t r) {
  oracle::Vec v(m.value.cols());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = m.value.at(r, c);
  return v;
}

TEST(Vocabulary, ReservedTokensAndLookup) {
  Vocabulary v;
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.index(Vocabulary::kUnknown), Vocabulary::kUnknownIndex);
  EXPECT_EQ(v.index(Vocabulary::kSeparator), Vocabulary::kSeparatorIndex);
  const auto city = v.add("city");
  EXPECT_EQ(v.add("city"), city);
  EXPECT_EQ(v.index("nowhere"), Vocabulary::kUnknownIndex);
  EXPECT_EQ(Vocabulary::from_tokens(v.tokens()).tokens(), v.tokens());
  EXPECT_THROW(Vocabulary::from_tokens({"city"}), Error);
  EXPECT_EQ(tokenize("  how far\tis \n issaquah "),
            (std::vector<std::string>{"how", "far", "is", "issaquah"}));
}

TEST(EmbedAverage, SingleTwoAndManyTokens) {
  Fixture f(4, 3, 1);
  const EmbeddingTable table = f.table();
  Tape tape;
  const auto one = embed_average(tape, std::vector<std::string>{"far"}, table);
  EXPECT_EQ(one.value().values(), row_of(*f.matrix, f.vocab.index("far")));

  const auto two = embed_average(tape, std::vector<std::string>{"how", "is"}, table);
  const auto r1 = row_of(*f.matrix, f.vocab.index("how")), r2 = row_of(*f.matrix, f.vocab.index("is"));
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(two.value()[k], (r1[k] + r2[k]) / 2, 1e-15);

  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> ids;
    for (int i = 0; i < 5; ++i) ids.push_back(static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(f.vocab.size()) - 1)));
    const auto avg = embed_average(tape, ids, table);
    for (std::size_t k = 0; k < 4; ++k) {
      double s = 0.0;
      for (auto id : ids) s += f.matrix->value.at(id, k);
      EXPECT_NEAR(avg.value()[k], s / 5.0, 1e-12);
    }
  }
}

TEST(EmbedAverage, UnknownTokensAndEmptyInput) {
  Fixture f(3, 2, 2);
  Tape tape;
  const auto v = embed_average(tape, std::vector<std::string>{"zanzibar"}, f.table());
  EXPECT_EQ(v.value().values(), row_of(*f.matrix, Vocabulary::kUnknownIndex));
  EXPECT_THROW(embed_average(tape, std::vector<std::string>{}, f.table()), ContractError);
}

TEST(EncodeSlot, ConcatenatesKeyAndValueAverages) {
  Fixture f(3, 2, 3);
  Tape tape;
  const auto enc = encode_slot(tape, {"city", "issaquah"}, f.table());
  ASSERT_EQ(enc.size(), 6u);
  const auto key = row_of(*f.matrix, f.vocab.index("city"));
  const auto value = row_of(*f.matrix, f.vocab.index("issaquah"));
  EXPECT_EQ(enc.value().values(), oracle::join({key, value}));
  EXPECT_EQ(encode_slot(tape, {"city", "issaquah"}, f.table()).value(), enc.value());
  EXPECT_EQ(encode_slot(tape, {"the weather", "how far is"}, f.table()).size(), 6u);
}

TEST(LstmAttention, SingleTokenEqualsItsHiddenState) {
  Fixture f(3, 4, 4);
  Tape tape;
  const auto enc = lstm_attention_encode(tape, std::vector<std::string>{"far"}, f.lstm, f.table());
  ASSERT_EQ(enc.hidden.size(), 1u);
  EXPECT_EQ(enc.weights.value().values(), std::vector<double>{1.0});
  EXPECT_EQ(enc.output.value(), enc.hidden[0].value());
  EXPECT_THROW(lstm_attention_encode(tape, std::vector<std::string>{}, f.lstm, f.table()),
               ContractError);
}

TEST(LstmAttention, AttentionWeightsNormalized) {
  Rng rng(12);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Fixture f(3, 3, seed);
    std::vector<std::size_t> ids(static_cast<std::size_t>(rng.integer(1, 9)));
    for (auto& id : ids) id = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(f.vocab.size()) - 1));
    Tape tape;
    const auto enc = lstm_attention_encode(tape, ids, f.lstm, f.table());
    ASSERT_EQ(enc.weights.size(), ids.size());
    double sum = 0.0;
    for (double w : enc.weights.value().values()) {
      EXPECT_GE(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(LstmAttention, HandFixedWeightsMatchOracle) {
  Fixture f(2, 2, 5);
  // Overwrite every parameter with fixed, hand-chosen values.
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    auto data = f.params[i].value.data();
    for (std::size_t k = 0; k < data.size(); ++k) {
      data[k] = 0.25 * static_cast<double>((i + 2 * k) % 7) - 0.6;
    }
  }
  const std::vector<std::string> tokens = {"how", "far", "issaquah"};
  Tape tape;
  const auto enc = lstm_attention_encode(tape, tokens, f.lstm, f.table());
  std::vector<oracle::Vec> inputs;
  for (const auto& t : tokens) inputs.push_back(row_of(*f.matrix, f.vocab.index(t)));
  oracle::Vec weights;
  const auto expected = oracle::lstm_attention(oracle_of(f.lstm), inputs, &weights);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(enc.output.value()[k], expected[k], 1e-10);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_NEAR(enc.weights.value()[t], weights[t], 1e-10);
}

TEST(EncodeHistory, EmptyOneAndTwoTurns) {
  Fixture f(2, 3, 6);
  const auto table = f.table();
  Tape tape;
  EXPECT_EQ(encode_history(tape, std::span<const Turn>(), f.lstm, table).value(),
            Tensor::zeros({3}));

  const Turn a = testing::make_turn(Speaker::kUser, "Ask", {"how", "far", "is"}, {}, 0.0);
  const Turn b = testing::make_turn(Speaker::kUser, "Ask", {"the", "weather"}, {}, 5.0);
  const std::vector<Turn> one = {a};
  EXPECT_EQ(encode_history(tape, one, f.lstm, table).value(),
            lstm_attention_encode(tape, a.words, f.lstm, table).output.value());

  const std::vector<Turn> two = {a, b};
  const auto got = encode_history(tape, two, f.lstm, table);
  std::vector<oracle::Vec> inputs;
  for (const auto& w : a.words) inputs.push_back(row_of(*f.matrix, f.vocab.index(w)));
  inputs.push_back(row_of(*f.matrix, Vocabulary::kSeparatorIndex));
  for (const auto& w : b.words) inputs.push_back(row_of(*f.matrix, f.vocab.index(w)));
  const auto expected = oracle::lstm_attention(oracle_of(f.lstm), inputs);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(got.value()[k], expected[k], 1e-10);
}

TEST(Encoders, GradientsOverSeeds) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Fixture f(3, 3, seed);
    const auto table = f.table();
    const std::vector<std::size_t> ids = {2, 3, 1, 4, 0};
    auto fn = [&](Tape& tape) {
      const auto enc = lstm_attention_encode(tape, ids, f.lstm, table);
      const auto slot = embed_average(tape, std::vector<std::size_t>{5, 6}, table);
      return numeric::sum(numeric::tanh(numeric::concat({enc.output, slot})));
    };
    auto ptrs = f.params.pointers();
    EXPECT_LT(numeric::finite_diff_check(fn, ptrs, 1e-6), 1e-4) << "seed " << seed;
  }
}

TEST(PretrainedEmbeddings, LoadsKnownRowsAndRejectsMalformed) {
  Fixture f(3, 2, 7);
  const auto dir = std::filesystem::temp_directory_path() / "carryover_emb_test";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.txt";
  std::ofstream(good) << "city 1 2 3\nunknownword 4 5 6\nfar 0.5 -0.5 0\n";
  EXPECT_EQ(load_pretrained_embeddings(good, f.vocab, *f.matrix), 2u);
  EXPECT_EQ(row_of(*f.matrix, f.vocab.index("city")), (oracle::Vec{1, 2, 3}));
  EXPECT_EQ(row_of(*f.matrix, f.vocab.index("far")), (oracle::Vec{0.5, -0.5, 0}));

  const auto short_row = dir / "short.txt";
  std::ofstream(short_row) << "city 1 2\n";
  EXPECT_THROW(load_pretrained_embeddings(short_row, f.vocab, *f.matrix), DataError);
  const auto junk = dir / "junk.txt";
  std::ofstream(junk) << "city 1 two 3\n";
  EXPECT_THROW(load_pretrained_embeddings(junk, f.vocab, *f.matrix), DataError);
  EXPECT_THROW(load_pretrained_embeddings(dir / "missing.txt", f.vocab, *f.matrix), DataError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace carryover
