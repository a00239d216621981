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

#include "carryover/data/corpus_io.h"

#include <fstream>
#include <istream>
#include <ostream>

#include "carryover/error.h"

namespace carryover {
namespace {

nlohmann::ordered_json slots_to_json(const std::vector<Slot>& slots) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& s : slots) out.push_back({{"key", s.key}, {"value", s.value}});
  return out;
}

std::vector<Slot> slots_from_json(const nlohmann::json& j) {
  std::vector<Slot> out;
  for (const auto& s : j) out.push_back({s.at("key").get<std::string>(), s.at("value").get<std::string>()});
  return out;
}

}  // namespace

nlohmann::ordered_json dialogue_to_json(const Dialogue& d) {
  nlohmann::ordered_json j;
  j["id"] = d.id;
  j["domain"] = d.domain;
  if (!d.split.empty()) j["split"] = d.split;
  if (!d.flags.empty()) j["flags"] = d.flags;
  auto turns = nlohmann::ordered_json::array();
  for (const auto& t : d.turns) {
    nlohmann::ordered_json turn;
    turn["speaker"] = std::string(speaker_name(t.speaker));
    turn["act"] = t.act;
    turn["words"] = t.words;
    turn["slots"] = slots_to_json(t.slots);
    turn["wall_clock"] = t.wall_clock;
    turn["domain"] = t.domain;
    turns.push_back(std::move(turn));
  }
  j["turns"] = std::move(turns);
  auto gold = nlohmann::ordered_json::array();
  for (const auto& state : d.gold_states) gold.push_back(slots_to_json(state));
  j["gold_states"] = std::move(gold);
  return j;
}

Dialogue dialogue_from_json(const nlohmann::json& j) {
  Dialogue d;
  try {
    d.id = j.at("id").get<std::string>();
    d.domain = j.value("domain", std::string());
    d.split = j.value("split", std::string());
    d.flags = j.value("flags", std::vector<std::string>());
    for (const auto& t : j.at("turns")) {
      Turn turn;
      turn.speaker = parse_speaker(t.at("speaker").get<std::string>());
      turn.act = t.value("act", std::string());
      turn.words = t.at("words").get<std::vector<std::string>>();
      turn.slots = slots_from_json(t.value("slots", nlohmann::json::array()));
      turn.wall_clock = t.at("wall_clock").get<double>();
      turn.domain = t.value("domain", std::string());
      d.turns.push_back(std::move(turn));
    }
    if (j.contains("gold_states")) {
      for (const auto& state : j.at("gold_states")) d.gold_states.push_back(slots_from_json(state));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed dialogue record: ") + e.what());
  }
  validate_dialogue(d);
  return d;
}

std::string serialize_dialogue(const Dialogue& d) { return dialogue_to_json(d).dump(); }

Dialogue parse_dialogue(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  return dialogue_from_json(j);
}

void write_corpus(std::ostream& out, std::span<const Dialogue> dialogues) {
  for (const auto& d : dialogues) out << serialize_dialogue(d) << '\n';
}

std::vector<Dialogue> read_corpus(std::istream& in, const std::string& source) {
  std::vector<Dialogue> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_dialogue(line));
    } catch (const DataError& e) {
      throw DataError(source + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, std::span<const Dialogue> dialogues) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write_corpus(out, dialogues);
  out.flush();
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

std::vector<Dialogue> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus '" + path.string() + "'");
  return read_corpus(in, path.string());
}

}  // namespace carryover
