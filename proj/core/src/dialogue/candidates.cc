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

#include "carryover/dialogue/candidates.h"

#include <algorithm>

#include "carryover/error.h"

namespace carryover {
namespace {

std::size_t current_turn_index(const Dialogue& dialogue, std::size_t t) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    if (dialogue.turns[i].speaker != Speaker::kUser) continue;
    if (seen == t) return i;
    ++seen;
  }
  throw IndexError("user turn " + std::to_string(t) + " out of range (dialogue '" + dialogue.id +
                   "' has " + std::to_string(seen) + " user turns)");
}

}  // namespace

ContextWindow make_context_window(const Dialogue& dialogue, std::size_t t,
                                  std::size_t max_history) {
  if (max_history == 0) throw ContractError("context window needs max_history >= 1");
  const std::size_t cur = current_turn_index(dialogue, t);
  ContextWindow window;
  window.max_history = max_history;
  window.current_index = cur;
  window.current = dialogue.turns[cur];
  for (std::size_t i = cur; i-- > 0;) {
    const Turn& turn = dialogue.turns[i];
    const bool user = turn.speaker == Speaker::kUser;
    auto& history = user ? window.user_history : window.system_history;
    auto& index = user ? window.user_history_index : window.system_history_index;
    if (history.size() < max_history) {
      history.push_back(turn);
      index.push_back(i);
    }
    if (window.user_history.size() == max_history && window.system_history.size() == max_history) {
      break;
    }
  }
  std::reverse(window.user_history.begin(), window.user_history.end());
  std::reverse(window.system_history.begin(), window.system_history.end());
  std::reverse(window.user_history_index.begin(), window.user_history_index.end());
  std::reverse(window.system_history_index.begin(), window.system_history_index.end());
  return window;
}

std::vector<Candidate> build_candidate_set(const Dialogue& dialogue, std::size_t t,
                                           std::size_t max_history) {
  if (max_history == 0) throw ContractError("candidate set needs max_history >= 1");
  const std::size_t cur = current_turn_index(dialogue, t);
  const double now = dialogue.turns[cur].wall_clock;

  // Walk back from the current turn; `offset` counts user turns in (i, cur].
  std::size_t first = cur;
  std::vector<int> offsets(cur + 1, 0);
  int offset = 0;
  for (std::size_t i = cur + 1; i-- > 0;) {
    offsets[i] = offset;
    if (offset > static_cast<int>(max_history)) break;
    first = i;
    if (dialogue.turns[i].speaker == Speaker::kUser) ++offset;
  }

  std::vector<Candidate> out;
  for (std::size_t i = first; i <= cur; ++i) {
    const Turn& turn = dialogue.turns[i];
    if (offsets[i] > static_cast<int>(max_history)) continue;
    for (const Slot& slot : turn.slots) {
      Candidate c;
      c.slot = slot;
      c.source_turn = i;
      c.source_speaker = turn.speaker;
      c.distance_offset = offsets[i];
      c.temporal_distance = i == cur ? 0.0 : round_to_millis(now - turn.wall_clock);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Candidate> label_candidates(std::vector<Candidate> candidates,
                                        const std::vector<Slot>& gold_state) {
  for (auto& c : candidates) {
    const bool hit = std::find(gold_state.begin(), gold_state.end(), c.slot) != gold_state.end();
    c.label = hit ? Label::kCarryover : Label::kNoCarryover;
  }
  return candidates;
}

numeric::Tensor recency_one_hot(int offset, int max_history) {
  if (max_history < 0 || offset < 0 || offset > max_history) {
    throw RangeError("recency offset " + std::to_string(offset) + " outside [0, " +
                     std::to_string(max_history) + "]");
  }
  auto v = numeric::Tensor::zeros({static_cast<std::size_t>(max_history) + 1});
  v[static_cast<std::size_t>(offset)] = 1.0;
  return v;
}

}  // namespace carryover
