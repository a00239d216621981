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

#include "carryover/training/metrics.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "carryover/error.h"
#include "carryover/model/carryover_model.h"

namespace carryover {

void Confusion::add(bool predicted, bool gold) {
  if (predicted && gold) ++tp;
  else if (predicted) ++fp;
  else if (gold) ++fn;
  else ++tn;
}

double Confusion::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Confusion::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Confusion::f1() const {
  // 2PR/(P+R) written on counts, which is exact for the degenerate cases.
  const std::size_t denom = 2 * tp + fp + fn;
  return tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

std::size_t temporal_bin(double seconds) {
  if (seconds <= 0.0) return 0;
  if (seconds <= 15.0) return 1;
  if (seconds <= 30.0) return 2;
  if (seconds <= 60.0) return 3;
  return 4;
}

EvalReport evaluate_scored(std::span<const ScoredCandidate> scored, double threshold) {
  EvalReport report;
  report.threshold = threshold;
  report.bins.resize(kBinCount);
  for (std::size_t b = 0; b < kBinCount; ++b) report.bins[b].name = std::string(kBinNames[b]);
  for (const auto& s : scored) {
    const bool predicted = decide(s.score, threshold) == Label::kCarryover;
    report.overall.add(predicted, s.positive);
    report.bins[temporal_bin(s.temporal_distance)].confusion.add(predicted, s.positive);
  }
  return report;
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void tsv_row(std::ostringstream& out, const std::string& scope, const Confusion& c) {
  out << scope << '\t' << c.total() << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\t'
      << c.tn << '\t' << fixed(c.precision()) << '\t' << fixed(c.recall()) << '\t'
      << fixed(c.f1()) << '\n';
}

nlohmann::json confusion_json(const Confusion& c) {
  return {{"count", c.total()}, {"tp", c.tp},   {"fp", c.fp},
          {"fn", c.fn},         {"tn", c.tn},   {"precision", c.precision()},
          {"recall", c.recall()}, {"f1", c.f1()}};
}

}  // namespace

std::string EvalReport::to_tsv() const {
  std::ostringstream out;
  out << "# threshold\t" << fixed(threshold) << '\n';
  out << "scope\tcount\ttp\tfp\tfn\ttn\tprecision\trecall\tf1\n";
  tsv_row(out, "overall", overall);
  for (const auto& b : bins) tsv_row(out, b.name, b.confusion);
  return out.str();
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json bins_json = nlohmann::json::array();
  for (const auto& b : bins) {
    auto entry = confusion_json(b.confusion);
    entry["bin"] = b.name;
    bins_json.push_back(std::move(entry));
  }
  return {{"threshold", threshold}, {"overall", confusion_json(overall)}, {"bins", bins_json}};
}

ThresholdChoice tune_threshold_scored(std::span<const ScoredCandidate> scored) {
  if (scored.empty()) throw DataError("threshold tuning needs a nonempty dev set");
  std::vector<ScoredCandidate> sorted(scored.begin(), scored.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.score > b.score; });
  std::size_t positives = 0;
  for (const auto& s : sorted) positives += s.positive ? 1 : 0;

  // Walk thresholds from the highest score down. A threshold equal to a
  // score predicts every candidate with an equal or higher score.
  ThresholdChoice best{sorted.front().score, -1.0};
  std::size_t tp = 0, predicted = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    const double tau = sorted[i].score;
    while (i < sorted.size() && sorted[i].score == tau) {
      tp += sorted[i].positive ? 1 : 0;
      ++predicted;
      ++i;
    }
    const std::size_t fp = predicted - tp, fn = positives - tp;
    const double f1 = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) /
                                          static_cast<double>(2 * tp + fp + fn);
    // Descending sweep: ">=" lets a smaller threshold win ties.
    if (f1 >= best.f1) best = {tau, f1};
  }
  return best;
}

}  // namespace carryover
