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

#ifndef CARRYOVER_ENCODERS_VOCABULARY_H_
#define CARRYOVER_ENCODERS_VOCABULARY_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace carryover {

// Token to row-index map. Index 0 is the unknown token and index 1 the turn
// separator; both are always present.
class Vocabulary {
 public:
  static constexpr std::string_view kUnknown = "<unk>";
  static constexpr std::string_view kSeparator = "<sep>";
  static constexpr std::size_t kUnknownIndex = 0;
  static constexpr std::size_t kSeparatorIndex = 1;

  Vocabulary();

  // Adds `token` if missing and returns its index.
  std::size_t add(std::string_view token);
  // Index of `token`, or kUnknownIndex.
  std::size_t index(std::string_view token) const;
  bool contains(std::string_view token) const;

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Rebuilds from an ordered token list whose first two entries must be the
  // reserved tokens.
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Splits on ASCII whitespace.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace carryover

#endif  // CARRYOVER_ENCODERS_VOCABULARY_H_
