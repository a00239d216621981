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

#ifndef CARRYOVER_TRAINING_EXAMPLES_H_
#define CARRYOVER_TRAINING_EXAMPLES_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carryover/dialogue/candidates.h"
#include "carryover/model/carryover_model.h"

namespace carryover {

// One decision point: a user turn, its context window and its candidates.
struct WindowExample {
  std::string dialogue_id;
  std::size_t user_turn = 0;
  ContextWindow window;
  std::vector<Candidate> candidates;  // labeled when gold states exist
};

// Every user turn of every dialogue. Candidates are labeled from the gold
// state when the dialogue carries one per user turn.
std::vector<WindowExample> build_examples(std::span<const Dialogue> dialogues,
                                          std::size_t max_history);

// Dialogues whose split tag equals `split`.
std::vector<Dialogue> select_split(std::span<const Dialogue> dialogues, std::string_view split);

std::size_t candidate_count(std::span<const WindowExample> examples);

struct PreparedExample {
  PreparedWindow window;
  std::vector<PreparedCandidate> candidates;
};

// Maps tokens through the model vocabulary. Throws ContractError for an
// unlabeled candidate when `require_labels` is set.
std::vector<PreparedExample> prepare_examples(const CarryoverModel& model,
                                              std::span<const WindowExample> examples,
                                              bool require_labels);

}  // namespace carryover

#endif  // CARRYOVER_TRAINING_EXAMPLES_H_
