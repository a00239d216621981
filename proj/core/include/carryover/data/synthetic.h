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

#ifndef CARRYOVER_DATA_SYNTHETIC_H_
#define CARRYOVER_DATA_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "carryover/dialogue/dialogue.h"

namespace carryover {

struct SlotVocabulary {
  std::string key;
  std::vector<std::string> values;
};

struct DomainSpec {
  std::string name;
  // User-to-user gaps are log-normal: ln(gap) ~ N(ln(gap_median), gap_sigma^2).
  double gap_median = 10.0;
  double gap_sigma = 1.0;
  // A context slot at gap g seconds carries over with probability exp(-g / decay).
  double decay = 30.0;
  // When set, every candidate (current turn included) carries over with
  // this fixed probability instead.
  std::optional<double> constant_rate;
  // The opening user turn draws from `intents` and `user_templates`; later
  // user turns draw from the follow-up lists.
  std::vector<std::string> intents;
  std::vector<std::string> user_templates;
  std::vector<std::string> followup_intents;
  std::vector<std::string> followup_templates;
  std::vector<std::string> system_templates;
  std::vector<SlotVocabulary> slots;

  double mean_gap() const;
  // Carryover probability for a candidate at offset `offset` and gap `gap`.
  double carryover_probability(int offset, double gap) const;
};

struct SyntheticSpec {
  std::vector<DomainSpec> domains;
  std::size_t dialogues = 6000;
  std::uint64_t seed = 7;
  std::size_t min_user_turns = 3;
  std::size_t max_user_turns = 6;
  std::size_t min_first_slots = 2;
  std::size_t max_first_slots = 3;
  // Probability that a follow-up user turn introduces one new slot.
  double followup_slot_prob = 0.5;
  // Probability that a system turn introduces one new slot.
  double system_slot_prob = 0.0;
  // The system answers after U(lo, hi) seconds, capped at half the next gap.
  double system_delay_lo = 1.0;
  double system_delay_hi = 3.0;
  std::size_t max_history = 2;
  // Dialogue i goes to train, dev or test by i mod 10 against these.
  double train_fraction = 0.8;
  double dev_fraction = 0.1;

  void validate() const;
  const DomainSpec& domain(const std::string& name) const;
};

// Three domains with distinct gap scales and decay constants. Only the
// opening turn is lexically domain specific; follow-up and system turns share
// one neutral phrasing across domains.
SyntheticSpec default_synthetic_spec();

nlohmann::json to_json(const SyntheticSpec& spec);
// Missing keys take the default spec's values. Throws DataError.
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

// Ground truth behind one generated candidate.
struct SyntheticDraw {
  std::size_t domain = 0;  // index into SyntheticSpec::domains
  int distance_offset = 0;
  double temporal_distance = 0.0;
  double probability = 0.0;
  bool carried = false;
};

// Deterministic in the spec. If `draws` is given it receives one record per
// candidate, in dialogue, user turn and candidate order.
std::vector<Dialogue> generate_synthetic(const SyntheticSpec& spec,
                                         std::vector<SyntheticDraw>* draws = nullptr);

}  // namespace carryover

#endif  // CARRYOVER_DATA_SYNTHETIC_H_
