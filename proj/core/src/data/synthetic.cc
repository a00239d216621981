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

#include "carryover/data/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "carryover/dialogue/candidates.h"
#include "carryover/encoders/vocabulary.h"
#include "carryover/error.h"
#include "carryover/random.h"

namespace carryover {

double DomainSpec::mean_gap() const {
  return gap_median * std::exp(0.5 * gap_sigma * gap_sigma);
}

double DomainSpec::carryover_probability(int offset, double gap) const {
  if (constant_rate) return *constant_rate;
  if (offset == 0) return 1.0;
  return std::exp(-gap / decay);
}

void SyntheticSpec::validate() const {
  if (domains.empty()) throw RangeError("synthetic spec needs at least one domain");
  std::set<std::string> names;
  for (const auto& d : domains) {
    const std::string at = "domain '" + d.name + "': ";
    if (d.name.empty()) throw RangeError("domain with empty name");
    if (!names.insert(d.name).second) throw RangeError(at + "duplicate name");
    if (!(d.gap_median > 0.0) || !std::isfinite(d.gap_median)) {
      throw RangeError(at + "gap_median must be positive");
    }
    if (!(d.gap_sigma >= 0.0) || !std::isfinite(d.gap_sigma)) {
      throw RangeError(at + "gap_sigma must be nonnegative");
    }
    if (!(d.decay > 0.0)) throw RangeError(at + "decay must be positive");
    if (d.constant_rate && !(*d.constant_rate >= 0.0 && *d.constant_rate <= 1.0)) {
      throw RangeError(at + "constant_rate must lie in [0, 1]");
    }
    if (d.intents.empty() || d.user_templates.empty() || d.followup_intents.empty() ||
        d.followup_templates.empty() || d.system_templates.empty()) {
      throw RangeError(at + "intents and templates must be nonempty");
    }
    if (d.slots.empty()) throw RangeError(at + "slot vocabulary must be nonempty");
    for (const auto& s : d.slots) {
      if (s.key.empty() || s.values.empty()) throw RangeError(at + "empty slot vocabulary entry");
    }
  }
  if (dialogues == 0) throw RangeError("dialogue count must be positive");
  if (min_user_turns == 0 || min_user_turns > max_user_turns) {
    throw RangeError("user turn range must satisfy 1 <= min <= max");
  }
  if (min_first_slots > max_first_slots) throw RangeError("first-turn slot range is empty");
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(followup_slot_prob) || !prob(system_slot_prob)) {
    throw RangeError("slot probabilities must lie in [0, 1]");
  }
  if (!(system_delay_lo > 0.0) || system_delay_hi < system_delay_lo) {
    throw RangeError("system delay range must satisfy 0 < lo <= hi");
  }
  if (max_history == 0) throw RangeError("max_history must be positive");
  if (!prob(train_fraction) || !prob(dev_fraction) || train_fraction + dev_fraction > 1.0) {
    throw RangeError("split fractions must lie in [0, 1] and sum to at most 1");
  }
}

const DomainSpec& SyntheticSpec::domain(const std::string& name) const {
  for (const auto& d : domains) {
    if (d.name == name) return d;
  }
  throw IndexError("no synthetic domain '" + name + "'");
}

SyntheticSpec default_synthetic_spec() {
  const std::vector<SlotVocabulary> slots = {
      {"city", {"seattle", "boston", "austin", "denver", "miami", "chicago"}},
      {"date", {"today", "tomorrow", "monday", "friday", "weekend"}},
      {"time", {"morning", "noon", "evening", "tonight"}},
      {"name", {"adele", "queen", "starbucks", "costco", "beyonce", "target"}},
      {"type", {"jazz", "rock", "coffee", "pizza", "pharmacy"}},
  };
  const std::vector<std::string> followup_intents = {"FollowUp", "Refine"};
  const std::vector<std::string> followup_templates = {
      "what about", "and how about", "ok what about that", "and for", "change it to"};
  const std::vector<std::string> system_templates = {
      "here is what i found", "ok", "sure", "let me check that"};
  SyntheticSpec spec;
  spec.domains = {
      {"weather", 6.0, 1.55, 15.0, std::nullopt,
       {"GetWeather", "GetForecast", "GetTemperature"},
       {"what is the weather", "will it rain", "how cold is it", "show me the forecast"},
       followup_intents, followup_templates, system_templates, slots},
      {"music", 20.0, 1.55, 70.0, std::nullopt,
       {"PlayMusic", "PlayPlaylist", "AddToQueue"},
       {"play some music", "put on a song", "queue this track", "play my playlist"},
       followup_intents, followup_templates, system_templates, slots},
      {"localsearch", 33.0, 1.55, 110.0, std::nullopt,
       {"FindPlace", "GetDirections", "GetHours"},
       {"find a place nearby", "how do i get there", "when does it open",
        "show me restaurants"},
       followup_intents, followup_templates, system_templates, slots},
  };
  return spec;
}

namespace {

nlohmann::json domain_to_json(const DomainSpec& d) {
  nlohmann::json slots = nlohmann::json::array();
  for (const auto& s : d.slots) slots.push_back({{"key", s.key}, {"values", s.values}});
  nlohmann::json j = {{"name", d.name},
                      {"gap_median", d.gap_median},
                      {"gap_sigma", d.gap_sigma},
                      {"decay", d.decay},
                      {"intents", d.intents},
                      {"user_templates", d.user_templates},
                      {"followup_intents", d.followup_intents},
                      {"followup_templates", d.followup_templates},
                      {"system_templates", d.system_templates},
                      {"slots", slots}};
  if (d.constant_rate) j["constant_rate"] = *d.constant_rate;
  return j;
}

DomainSpec domain_from_json(const nlohmann::json& j, const DomainSpec& base) {
  DomainSpec d = base;
  d.name = j.at("name").get<std::string>();
  d.gap_median = j.value("gap_median", d.gap_median);
  d.gap_sigma = j.value("gap_sigma", d.gap_sigma);
  d.decay = j.value("decay", d.decay);
  if (j.contains("constant_rate") && !j.at("constant_rate").is_null()) {
    d.constant_rate = j.at("constant_rate").get<double>();
  }
  d.intents = j.value("intents", d.intents);
  d.user_templates = j.value("user_templates", d.user_templates);
  d.followup_intents = j.value("followup_intents", d.followup_intents);
  d.followup_templates = j.value("followup_templates", d.followup_templates);
  d.system_templates = j.value("system_templates", d.system_templates);
  if (j.contains("slots")) {
    d.slots.clear();
    for (const auto& s : j.at("slots")) {
      d.slots.push_back({s.at("key").get<std::string>(),
                         s.at("values").get<std::vector<std::string>>()});
    }
  }
  return d;
}

}  // namespace

nlohmann::json to_json(const SyntheticSpec& spec) {
  nlohmann::json domains = nlohmann::json::array();
  for (const auto& d : spec.domains) domains.push_back(domain_to_json(d));
  return {{"dialogues", spec.dialogues},
          {"seed", spec.seed},
          {"min_user_turns", spec.min_user_turns},
          {"max_user_turns", spec.max_user_turns},
          {"min_first_slots", spec.min_first_slots},
          {"max_first_slots", spec.max_first_slots},
          {"followup_slot_prob", spec.followup_slot_prob},
          {"system_slot_prob", spec.system_slot_prob},
          {"system_delay_lo", spec.system_delay_lo},
          {"system_delay_hi", spec.system_delay_hi},
          {"max_history", spec.max_history},
          {"train_fraction", spec.train_fraction},
          {"dev_fraction", spec.dev_fraction},
          {"domains", domains}};
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  const SyntheticSpec defaults = default_synthetic_spec();
  SyntheticSpec spec = defaults;
  try {
    spec.dialogues = j.value("dialogues", spec.dialogues);
    spec.seed = j.value("seed", spec.seed);
    spec.min_user_turns = j.value("min_user_turns", spec.min_user_turns);
    spec.max_user_turns = j.value("max_user_turns", spec.max_user_turns);
    spec.min_first_slots = j.value("min_first_slots", spec.min_first_slots);
    spec.max_first_slots = j.value("max_first_slots", spec.max_first_slots);
    spec.followup_slot_prob = j.value("followup_slot_prob", spec.followup_slot_prob);
    spec.system_slot_prob = j.value("system_slot_prob", spec.system_slot_prob);
    spec.system_delay_lo = j.value("system_delay_lo", spec.system_delay_lo);
    spec.system_delay_hi = j.value("system_delay_hi", spec.system_delay_hi);
    spec.max_history = j.value("max_history", spec.max_history);
    spec.train_fraction = j.value("train_fraction", spec.train_fraction);
    spec.dev_fraction = j.value("dev_fraction", spec.dev_fraction);
    if (j.contains("domains")) {
      spec.domains.clear();
      for (const auto& dj : j.at("domains")) {
        // A domain named like a default one inherits its unspecified fields.
        DomainSpec base = defaults.domains.front();
        for (const auto& d : defaults.domains) {
          if (d.name == dj.value("name", std::string())) base = d;
        }
        base.constant_rate.reset();
        spec.domains.push_back(domain_from_json(dj, base));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad synthetic spec: ") + e.what());
  }
  try {
    spec.validate();
  } catch (const RangeError& e) {
    throw DataError(std::string("bad synthetic spec: ") + e.what());
  }
  return spec;
}

namespace {

// Minimum user-to-user gap; keeps millisecond timestamps strictly ordered.
constexpr double kMinGap = 0.01;

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(items.size()) - 1))];
}

// Draws a (key, value) pair not yet used in the dialogue; gives up after a
// bounded number of attempts.
std::optional<Slot> fresh_slot(Rng& rng, const DomainSpec& dom, std::set<Slot>& used) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const SlotVocabulary& v = pick(rng, dom.slots);
    Slot s{v.key, pick(rng, v.values)};
    if (used.insert(s).second) return s;
  }
  return std::nullopt;
}

Turn make_turn(Speaker speaker, std::string act, const std::string& text, std::vector<Slot> slots,
               double wall_clock, const std::string& domain) {
  Turn t;
  t.speaker = speaker;
  t.act = std::move(act);
  t.words = tokenize(text);
  for (const auto& s : slots) {
    for (auto& w : tokenize(s.value)) t.words.push_back(std::move(w));
  }
  t.slots = std::move(slots);
  t.wall_clock = wall_clock;
  t.domain = domain;
  return t;
}

}  // namespace

std::vector<Dialogue> generate_synthetic(const SyntheticSpec& spec,
                                         std::vector<SyntheticDraw>* draws) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<Dialogue> out;
  out.reserve(spec.dialogues);
  for (std::size_t i = 0; i < spec.dialogues; ++i) {
    const auto dom_index = static_cast<std::size_t>(
        rng.integer(0, static_cast<std::int64_t>(spec.domains.size()) - 1));
    const DomainSpec& dom = spec.domains[dom_index];
    const auto users = static_cast<std::size_t>(rng.integer(
        static_cast<std::int64_t>(spec.min_user_turns), static_cast<std::int64_t>(spec.max_user_turns)));

    std::vector<double> user_time(users, 0.0);
    for (std::size_t k = 1; k < users; ++k) {
      const double gap =
          std::max(kMinGap, rng.lognormal(std::log(dom.gap_median), dom.gap_sigma));
      user_time[k] = round_to_millis(user_time[k - 1] + gap);
    }

    Dialogue d;
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i);
    d.id = id;
    d.domain = dom.name;
    std::set<Slot> used;
    for (std::size_t k = 0; k < users; ++k) {
      std::vector<Slot> slots;
      const std::size_t n =
          k == 0 ? static_cast<std::size_t>(
                       rng.integer(static_cast<std::int64_t>(spec.min_first_slots),
                                   static_cast<std::int64_t>(spec.max_first_slots)))
                 : (rng.bernoulli(spec.followup_slot_prob) ? 1 : 0);
      for (std::size_t s = 0; s < n; ++s) {
        if (auto slot = fresh_slot(rng, dom, used)) slots.push_back(std::move(*slot));
      }
      const bool opening = k == 0;
      const std::string intent = pick(rng, opening ? dom.intents : dom.followup_intents);
      const std::string& text = pick(rng, opening ? dom.user_templates : dom.followup_templates);
      d.turns.push_back(
          make_turn(Speaker::kUser, intent, text, std::move(slots), user_time[k], dom.name));

      double delay = rng.uniform(spec.system_delay_lo, spec.system_delay_hi);
      if (k + 1 < users) delay = std::min(delay, 0.5 * (user_time[k + 1] - user_time[k]));
      std::vector<Slot> system_slots;
      if (rng.bernoulli(spec.system_slot_prob)) {
        if (auto slot = fresh_slot(rng, dom, used)) system_slots.push_back(std::move(*slot));
      }
      const std::string act = system_slots.empty() ? "system_ack" : "system_inform";
      d.turns.push_back(make_turn(Speaker::kSystem, act, pick(rng, dom.system_templates),
                                  std::move(system_slots), round_to_millis(user_time[k] + delay),
                                  dom.name));
    }

    for (std::size_t t = 0; t < users; ++t) {
      std::vector<Slot> gold;
      for (const Candidate& c : build_candidate_set(d, t, spec.max_history)) {
        const double q = dom.carryover_probability(c.distance_offset, c.temporal_distance);
        const bool carried = rng.bernoulli(q);
        if (carried) gold.push_back(c.slot);
        if (draws) draws->push_back({dom_index, c.distance_offset, c.temporal_distance, q, carried});
      }
      std::sort(gold.begin(), gold.end());
      gold.erase(std::unique(gold.begin(), gold.end()), gold.end());
      d.gold_states.push_back(std::move(gold));
    }

    const double r = (static_cast<double>(i % 10) + 0.5) / 10.0;
    d.split = r < spec.train_fraction ? "train"
              : r < spec.train_fraction + spec.dev_fraction ? "dev"
                                                            : "test";
    validate_dialogue(d);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace carryover
