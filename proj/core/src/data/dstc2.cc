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

#include "carryover/data/dstc2.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>

#include <nlohmann/json.hpp>

#include "carryover/error.h"

namespace carryover {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kPlaceholder = "<empty>";

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IngestionError("corrupt JSON in '" + path.string() + "': " + e.what());
  }
}

std::vector<std::string> normalize_words(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    // Trim punctuation at token edges.
    std::size_t b = 0, e = cur.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(cur[b])) && cur[b] != '\'') ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(cur[e - 1])) && cur[e - 1] != '\'') --e;
    if (e > b) out.push_back(cur.substr(b, e - b));
    cur.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  flush();
  if (out.empty()) out.push_back(kPlaceholder);
  return out;
}

bool goal_key(const std::string& key) {
  return std::find(kDstc2GoalKeys.begin(), kDstc2GoalKeys.end(), key) != kDstc2GoalKeys.end();
}

// Slots of the listed act types, in order of appearance, without repeats.
std::vector<Slot> act_slots(const json& acts, const std::vector<std::string>& kinds) {
  std::vector<Slot> out;
  for (const auto& act : acts) {
    const std::string name = act.value("act", std::string());
    if (std::find(kinds.begin(), kinds.end(), name) == kinds.end()) continue;
    for (const auto& s : act.value("slots", json::array())) {
      if (!s.is_array() || s.size() != 2 || !s[0].is_string() || !s[1].is_string()) continue;
      Slot slot{s[0].get<std::string>(), s[1].get<std::string>()};
      if (!goal_key(slot.key) || slot.value.empty()) continue;
      if (std::find(out.begin(), out.end(), slot) == out.end()) out.push_back(std::move(slot));
    }
  }
  return out;
}

std::string first_act(const json& acts) {
  for (const auto& act : acts) {
    const std::string name = act.value("act", std::string());
    if (!name.empty()) return name;
  }
  return "null";
}

std::optional<double> time_field(const json& obj, const char* key) {
  if (obj.contains(key) && obj.at(key).is_number()) return obj.at(key).get<double>();
  return std::nullopt;
}

}  // namespace

Dialogue ingest_dstc2_call(const fs::path& call_dir, const Dstc2Options& options) {
  const fs::path log_path = call_dir / "log.json";
  const fs::path label_path = call_dir / "label.json";
  const json log = load_json(log_path);
  const json label = load_json(label_path);

  Dialogue d;
  d.domain = options.domain;
  std::vector<std::optional<double>> times;
  try {
    d.id = log.value("session-id", call_dir.filename().string());
    const json& log_turns = log.at("turns");
    const json& label_turns = label.at("turns");
    if (log_turns.empty()) throw IngestionError("no turns in '" + log_path.string() + "'");
    if (label_turns.size() != log_turns.size()) {
      throw IngestionError("turn count of '" + label_path.string() + "' does not match its log");
    }
    for (std::size_t i = 0; i < log_turns.size(); ++i) {
      const json& lt = log_turns[i];
      const json& output = lt.at("output");
      const json& input = lt.at("input");

      Turn sys;
      sys.speaker = Speaker::kSystem;
      const json sys_acts = output.value("dialog-acts", json::array());
      sys.act = first_act(sys_acts);
      sys.words = normalize_words(output.value("transcript", std::string()));
      sys.slots = act_slots(sys_acts, {"inform", "offer", "confirm", "expl-conf", "impl-conf"});
      sys.domain = options.domain;
      times.push_back(time_field(output, "start-time"));
      d.turns.push_back(std::move(sys));

      Turn user;
      user.speaker = Speaker::kUser;
      const json live = input.value("live", json::object());
      const json asr = live.value("asr-hyps", json::array());
      const json slu = live.value("slu-hyps", json::array());
      user.words = normalize_words(asr.empty() ? std::string() : asr[0].value("asr-hyp", std::string()));
      const json user_acts = slu.empty() ? json::array() : slu[0].value("slu-hyp", json::array());
      user.act = first_act(user_acts);
      user.slots = act_slots(user_acts, {"inform"});
      user.domain = options.domain;
      auto t = time_field(input, "start-time");
      if (!t) t = time_field(output, "end-time");
      times.push_back(t);
      d.turns.push_back(std::move(user));

      std::vector<Slot> gold;
      const json goals = label_turns[i].value("goal-labels", json::object());
      for (const auto& [key, value] : goals.items()) {
        if (goal_key(key) && value.is_string()) gold.push_back({key, value.get<std::string>()});
      }
      std::sort(gold.begin(), gold.end());
      d.gold_states.push_back(std::move(gold));
    }
  } catch (const json::exception& e) {
    throw IngestionError("unexpected structure in '" + log_path.string() + "' or its label: " +
                         e.what());
  }

  // Use logged times only when all are present and strictly increasing.
  bool usable = true;
  for (std::size_t i = 0; i < times.size() && usable; ++i) {
    usable = times[i].has_value() && (i == 0 || round_to_millis(*times[i]) >
                                                     round_to_millis(*times[i - 1]));
  }
  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    if (usable) {
      d.turns[i].wall_clock = round_to_millis(*times[i] - *times[0]);
    } else {
      // System turn k at k * spacing, the user reply half a spacing later.
      d.turns[i].wall_clock =
          round_to_millis(options.fallback_spacing * (static_cast<double>(i / 2) +
                                                      (i % 2 == 1 ? 0.5 : 0.0)));
    }
  }
  if (!usable) d.flags.push_back("synthetic_timing");

  try {
    validate_dialogue(d);
  } catch (const DataError& e) {
    throw IngestionError("'" + log_path.string() + "': " + e.what());
  }
  return d;
}

namespace {

std::vector<fs::path> read_file_list(const fs::path& root, const fs::path& list) {
  std::ifstream in(list);
  if (!in) throw IngestionError("cannot open file list '" + list.string() + "'");
  std::vector<fs::path> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    if (line.empty()) continue;
    fs::path dir = root / line;
    if (!fs::exists(dir / "log.json") && fs::exists(root / "data" / line / "log.json")) {
      dir = root / "data" / line;
    }
    out.push_back(dir);
  }
  return out;
}

}  // namespace

std::vector<Dialogue> ingest_dstc2(const fs::path& root, const Dstc2Options& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw IngestionError("'" + root.string() + "' is not a directory");

  auto lists = options.file_lists;
  if (lists.empty()) {
    for (const char* split : {"train", "dev", "test"}) {
      const fs::path p = root / "scripts" / "config" / (std::string("dstc2_") + split + ".flist");
      if (fs::exists(p)) lists.emplace_back(split, p);
    }
  }

  std::vector<Dialogue> out;
  if (!lists.empty()) {
    for (const auto& [split, list] : lists) {
      for (const auto& dir : read_file_list(root, list)) {
        Dialogue d = ingest_dstc2_call(dir, options);
        d.split = split;
        out.push_back(std::move(d));
      }
    }
  } else {
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().filename() == "log.json") {
        dirs.push_back(entry.path().parent_path());
      }
    }
    std::sort(dirs.begin(), dirs.end());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      Dialogue d = ingest_dstc2_call(dirs[i], options);
      const std::size_t r = i % 10;
      d.split = r < 8 ? "train" : r == 8 ? "dev" : "test";
      out.push_back(std::move(d));
    }
  }
  if (out.empty()) throw IngestionError("no DSTC2 calls found under '" + root.string() + "'");
  return out;
}

}  // namespace carryover
