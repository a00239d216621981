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

#include "carryover/training/examples.h"

#include "carryover/error.h"

namespace carryover {

std::vector<WindowExample> build_examples(std::span<const Dialogue> dialogues,
                                          std::size_t max_history) {
  std::vector<WindowExample> out;
  for (const Dialogue& d : dialogues) {
    const std::size_t users = user_turn_indices(d).size();
    const bool labeled = d.gold_states.size() == users;
    for (std::size_t t = 0; t < users; ++t) {
      WindowExample ex;
      ex.dialogue_id = d.id;
      ex.user_turn = t;
      ex.window = make_context_window(d, t, max_history);
      ex.candidates = build_candidate_set(d, t, max_history);
      if (labeled) ex.candidates = label_candidates(std::move(ex.candidates), d.gold_states[t]);
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<Dialogue> select_split(std::span<const Dialogue> dialogues, std::string_view split) {
  std::vector<Dialogue> out;
  for (const Dialogue& d : dialogues) {
    if (d.split == split) out.push_back(d);
  }
  return out;
}

std::size_t candidate_count(std::span<const WindowExample> examples) {
  std::size_t n = 0;
  for (const auto& ex : examples) n += ex.candidates.size();
  return n;
}

std::vector<PreparedExample> prepare_examples(const CarryoverModel& model,
                                              std::span<const WindowExample> examples,
                                              bool require_labels) {
  std::vector<PreparedExample> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    PreparedExample p;
    p.window = model.prepare_window(ex.window);
    for (const auto& c : ex.candidates) {
      if (require_labels && !c.label) {
        throw ContractError("unlabeled candidate in dialogue '" + ex.dialogue_id + "'");
      }
      p.candidates.push_back(model.prepare_candidate(c));
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace carryover
