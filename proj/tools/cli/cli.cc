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

#include "cli.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "carryover/data/corpus_io.h"
#include "carryover/data/dstc2.h"
#include "carryover/data/synthetic.h"
#include "carryover/error.h"
#include "carryover/model/checkpoint.h"
#include "carryover/training/trainer.h"
#include "manifest.h"
#include "svg_plot.h"

namespace carryover::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string corpus;
  std::string model;
  std::string split;
  // generate
  std::optional<std::size_t> dialogues;
  // ingest-dstc2
  std::string source;
  std::vector<std::string> file_lists;
  // train
  std::string variant;
  std::optional<std::size_t> epochs, batch_size, patience, word_dim, hidden_dim, time_dim,
      decoder_dim, max_history;
  std::optional<double> learning_rate, clip_norm;
  std::string time_scale;
  bool checked = false;
  std::string log;
  // tune / evaluate / predict
  std::optional<double> threshold;
  std::string update_model;
  bool merge_duplicates = false;
  // plot-gaps
  std::size_t bins = 30;
  double max_gap = 120.0;
};

fs::path output_path(const std::string& p) {
  fs::path path(p);
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir && path.is_relative()) {
    path = fs::path(dir) / path;
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  return path;
}

fs::path input_path(const std::string& p, const char* what) {
  if (p.empty()) throw DataError(std::string("missing ") + what + " path");
  if (!fs::exists(p)) throw DataError(std::string(what) + " '" + p + "' does not exist");
  return fs::path(p);
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(input_path(path, "config"));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("config '" + path + "': " + e.what());
  }
}

json section(const json& config, const char* name) {
  return config.contains(name) ? config.at(name) : json::object();
}

void write_text(const fs::path& path, const std::string& text, OutputGuard& guard) {
  guard.add(path);
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw DataError("cannot write '" + path.string() + "'");
}

class Run {
 public:
  explicit Run(std::string command) : start_(std::chrono::steady_clock::now()) {
    manifest_.command = std::move(command);
  }
  RunManifest& manifest() { return manifest_; }
  OutputGuard& guard() { return guard_; }

  // Writes the manifest beside the primary output and keeps all outputs.
  void finish(const fs::path& manifest_path) {
    manifest_.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text(manifest_path, manifest_.to_json().dump(2) + "\n", guard_);
    guard_.commit();
  }

 private:
  std::chrono::steady_clock::time_point start_;
  RunManifest manifest_;
  OutputGuard guard_;
};

fs::path manifest_for(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

std::vector<Dialogue> split_or_all(std::span<const Dialogue> corpus, const std::string& split) {
  if (split == "all") return {corpus.begin(), corpus.end()};
  return select_split(corpus, split);
}

int cmd_generate(const Options& o, std::ostream& out) {
  Run run("generate");
  const json config = load_config(o.config);
  SyntheticSpec spec = default_synthetic_spec();
  if (!config.empty()) {
    spec = synthetic_spec_from_json(config.contains("synthetic") ? config.at("synthetic") : config);
  }
  if (o.seed) spec.seed = *o.seed;
  if (o.dialogues) spec.dialogues = *o.dialogues;
  spec.validate();

  const fs::path path = output_path(o.out);
  const auto corpus = generate_synthetic(spec);
  run.guard().add(path);
  write_corpus(path, corpus);

  std::map<std::string, std::size_t> splits;
  for (const auto& d : corpus) ++splits[d.split];
  auto& m = run.manifest();
  m.config_path = o.config;
  m.seed = spec.seed;
  m.outputs = {path};
  m.extra = {{"dialogues", corpus.size()}, {"splits", splits}, {"spec", to_json(spec)}};
  run.finish(manifest_for(path));
  out << "wrote " << corpus.size() << " dialogues to " << path.string() << "\n";
  return 0;
}

int cmd_ingest(const Options& o, std::ostream& out) {
  Run run("ingest-dstc2");
  const fs::path source = input_path(o.source, "source directory");
  Dstc2Options options;
  for (const auto& entry : o.file_lists) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw DataError("--flist expects split=path, got '" + entry + "'");
    }
    options.file_lists.emplace_back(entry.substr(0, eq), fs::path(entry.substr(eq + 1)));
  }
  const auto corpus = ingest_dstc2(source, options);
  const fs::path path = output_path(o.out);
  run.guard().add(path);
  write_corpus(path, corpus);

  std::size_t synthetic_timing = 0;
  for (const auto& d : corpus) {
    for (const auto& f : d.flags) synthetic_timing += f == "synthetic_timing" ? 1 : 0;
  }
  auto& m = run.manifest();
  m.inputs = {source};
  m.outputs = {path};
  m.extra = {{"dialogues", corpus.size()}, {"synthetic_timing", synthetic_timing}};
  run.finish(manifest_for(path));
  out << "ingested " << corpus.size() << " dialogues into " << path.string() << "\n";
  if (synthetic_timing > 0) {
    out << "warning: " << synthetic_timing << " dialogues use synthetic 10 s timing\n";
  }
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  Run run("train");
  const json config = load_config(o.config);
  ModelConfig mc = section(config, "model").get<ModelConfig>();
  TrainConfig tc = train_config_from_json(section(config, "train"));
  if (config.contains("seed")) mc.seed = tc.seed = config.at("seed").get<std::uint64_t>();
  if (o.seed) mc.seed = tc.seed = *o.seed;
  if (!o.variant.empty()) mc.variant = parse_variant(o.variant);
  if (o.word_dim) mc.word_dim = *o.word_dim;
  if (o.hidden_dim) mc.hidden_dim = *o.hidden_dim;
  if (o.time_dim) mc.time_dim = *o.time_dim;
  if (o.decoder_dim) mc.decoder_dim = *o.decoder_dim;
  if (o.max_history) mc.max_history = *o.max_history;
  if (!o.time_scale.empty()) mc.time_scale.kind = parse_time_scale(o.time_scale);
  if (o.epochs) tc.max_epochs = *o.epochs;
  if (o.batch_size) tc.batch_size = *o.batch_size;
  if (o.patience) tc.patience = *o.patience;
  if (o.learning_rate) tc.learning_rate = *o.learning_rate;
  if (o.clip_norm) tc.clip_norm = *o.clip_norm;
  if (o.checked) tc.checked = true;
  mc.validate();
  tc.validate();

  const fs::path corpus_path = input_path(o.corpus, "corpus");
  const auto corpus = read_corpus(corpus_path);
  const fs::path path = output_path(o.out);
  const fs::path log_path = output_path(o.log.empty() ? o.out + ".log" : o.log);

  run.guard().add(log_path);
  std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
  if (!log) throw DataError("cannot write '" + log_path.string() + "'");
  const auto result = [&] {
    numeric::CheckedModeScope scope(tc.checked);
    return train(corpus, mc, tc, [&](const EpochLog& e) {
      log << format_log_line(e) << '\n';
      log.flush();
      out << "epoch " << format_log_line(e) << '\n';
    });
  }();
  if (!log) throw DataError("write to '" + log_path.string() + "' failed");
  run.guard().add(path);
  save_checkpoint(result.model, path);

  auto& m = run.manifest();
  m.config_path = o.config;
  m.seed = mc.seed;
  m.inputs = {corpus_path};
  m.outputs = {path, log_path};
  json model_json = mc;
  m.extra = {{"model", model_json},
             {"train", to_json(tc)},
             {"best_epoch", result.summary.best_epoch},
             {"best_dev_f1", result.summary.best_dev_f1},
             {"epochs_run", result.summary.log.size() - 1}};
  run.finish(manifest_for(path));
  out << "best dev F1 " << result.summary.best_dev_f1 << " at epoch "
      << result.summary.best_epoch << "; checkpoint " << path.string() << "\n";
  return 0;
}

int cmd_tune(const Options& o, std::ostream& out) {
  Run run("tune-threshold");
  const fs::path model_path = input_path(o.model, "model");
  const fs::path corpus_path = input_path(o.corpus, "corpus");
  CarryoverModel model = load_checkpoint(model_path);
  const auto corpus = read_corpus(corpus_path);
  const auto dev = build_examples(split_or_all(corpus, o.split.empty() ? "dev" : o.split),
                                  model.config().max_history);
  const ThresholdChoice choice = tune_threshold(model, dev);

  const fs::path path = output_path(o.out);
  const json result = {{"threshold", choice.threshold}, {"f1", choice.f1}};
  write_text(path, result.dump(2) + "\n", run.guard());
  auto& m = run.manifest();
  m.outputs = {path};
  if (!o.update_model.empty()) {
    model.set_threshold(choice.threshold);
    const fs::path updated = output_path(o.update_model);
    run.guard().add(updated);
    save_checkpoint(model, updated);
    m.outputs.push_back(updated);
  }
  m.seed = model.config().seed;
  m.inputs = {model_path, corpus_path};
  m.extra = result;
  run.finish(manifest_for(path));
  out << "threshold " << choice.threshold << " (dev F1 " << choice.f1 << ")\n";
  return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  Run run("evaluate");
  const fs::path model_path = input_path(o.model, "model");
  const fs::path corpus_path = input_path(o.corpus, "corpus");
  const CarryoverModel model = load_checkpoint(model_path);
  const auto corpus = read_corpus(corpus_path);
  const double tau = o.threshold.value_or(model.config().threshold);
  const auto test = build_examples(split_or_all(corpus, o.split.empty() ? "test" : o.split),
                                   model.config().max_history);
  const EvalReport report = evaluate(model, test, tau);

  const fs::path tsv = output_path(o.out + ".tsv");
  const fs::path js = output_path(o.out + ".json");
  write_text(tsv, report.to_tsv(), run.guard());
  write_text(js, report.to_json().dump(2) + "\n", run.guard());
  auto& m = run.manifest();
  m.seed = model.config().seed;
  m.inputs = {model_path, corpus_path};
  m.outputs = {tsv, js};
  m.extra = {{"threshold", tau}, {"split", o.split.empty() ? "test" : o.split}};
  run.finish(manifest_for(output_path(o.out)));
  out << report.to_tsv();
  return 0;
}

int cmd_predict(const Options& o, std::ostream& out) {
  Run run("predict");
  const fs::path model_path = input_path(o.model, "model");
  const fs::path corpus_path = input_path(o.corpus, "corpus");
  const CarryoverModel model = load_checkpoint(model_path);
  const auto corpus = read_corpus(corpus_path);
  const double tau = o.threshold.value_or(model.config().threshold);
  const auto examples = build_examples(split_or_all(corpus, o.split.empty() ? "all" : o.split),
                                       model.config().max_history);

  std::string text = o.merge_duplicates
                         ? "dialogue_id\tuser_turn\tkey\tvalue\tprobability\tdecision\n"
                         : "dialogue_id\tuser_turn\tkey\tvalue\tsource_turn\tspeaker\t"
                           "distance_offset\ttemporal_distance\tprobability\tdecision\n";
  std::size_t rows = 0;
  char buf[64];
  for (const auto& ex : examples) {
    const auto probs = model.score_window(ex.window, ex.candidates);
    const std::string prefix = ex.dialogue_id + '\t' + std::to_string(ex.user_turn) + '\t';
    if (o.merge_duplicates) {
      for (const auto& s : reduce_duplicates(ex.candidates, probs, tau)) {
        std::snprintf(buf, sizeof buf, "%.9g", s.probability);
        text += prefix + s.slot.key + '\t' + s.slot.value + '\t' + buf + '\t' +
                (s.decision == Label::kCarryover ? "carryover" : "no_carryover") + '\n';
        ++rows;
      }
      continue;
    }
    for (std::size_t k = 0; k < ex.candidates.size(); ++k) {
      const Candidate& c = ex.candidates[k];
      std::snprintf(buf, sizeof buf, "%.3f\t%.9g", c.temporal_distance, probs[k]);
      text += prefix + c.slot.key + '\t' + c.slot.value + '\t' + std::to_string(c.source_turn) +
              '\t' + std::string(speaker_name(c.source_speaker)) + '\t' +
              std::to_string(c.distance_offset) + '\t' + buf + '\t' +
              (decide(probs[k], tau) == Label::kCarryover ? "carryover" : "no_carryover") + '\n';
      ++rows;
    }
  }
  const fs::path path = output_path(o.out);
  write_text(path, text, run.guard());
  auto& m = run.manifest();
  m.seed = model.config().seed;
  m.inputs = {model_path, corpus_path};
  m.outputs = {path};
  m.extra = {{"threshold", tau}, {"rows", rows}, {"merge_duplicates", o.merge_duplicates}};
  run.finish(manifest_for(path));
  out << "wrote " << rows << " predictions to " << path.string() << "\n";
  return 0;
}

int cmd_plot_gaps(const Options& o, std::ostream& out) {
  Run run("plot-gaps");
  const fs::path corpus_path = input_path(o.corpus, "corpus");
  const auto corpus = read_corpus(corpus_path);
  const std::size_t history = o.max_history.value_or(kDefaultMaxHistory);

  // Context candidates only; current-turn slots sit at zero by construction.
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_domain;
  for (const auto& ex : build_examples(corpus, history)) {
    for (const auto& c : ex.candidates) {
      if (c.distance_offset == 0 || !c.label) continue;
      const bool carried = *c.label == Label::kCarryover;
      for (const std::string& key : {std::string("all"), ex.window.current.domain}) {
        auto& bucket = by_domain[key.empty() ? "unknown" : key];
        (carried ? bucket.first : bucket.second).push_back(c.temporal_distance);
      }
    }
  }
  if (by_domain.empty()) throw DataError("corpus has no labeled context candidates to plot");

  const fs::path dir = output_path((fs::path(o.out) / "x").string()).parent_path();
  auto& m = run.manifest();
  for (const auto& [domain, gaps] : by_domain) {
    const fs::path path = dir / ("gaps_" + domain + ".svg");
    write_text(path,
               gap_histogram_svg("Temporal distance: " + domain, gaps.first, gaps.second, o.bins,
                                 o.max_gap),
               run.guard());
    m.outputs.push_back(path);
  }
  m.inputs = {corpus_path};
  m.extra = {{"bins", o.bins}, {"max_gap", o.max_gap}};
  run.finish(dir / "plot-gaps.manifest.json");
  out << "wrote " << by_domain.size() << " plots to " << dir.string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Slot carryover with temporal features", "carryover"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Generate a synthetic corpus");
  gen->add_option("--config", o.config, "Synthetic spec JSON")->check(CLI::ExistingFile);
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--dialogues", o.dialogues, "Number of dialogues");
  gen->add_option("--out", o.out, "Output corpus (JSONL)")->required();

  auto* ingest = app.add_subcommand("ingest-dstc2", "Convert a DSTC2 tree to a corpus");
  ingest->add_option("--source", o.source, "Extracted DSTC2 directory")->required();
  ingest->add_option("--flist", o.file_lists, "split=path file list (repeatable)");
  ingest->add_option("--out", o.out, "Output corpus (JSONL)")->required();

  auto* tr = app.add_subcommand("train", "Train a model");
  tr->add_option("--corpus", o.corpus, "Corpus with train and dev splits")->required();
  tr->add_option("--config", o.config, "Run config JSON");
  tr->add_option("--seed", o.seed, "Random seed for init and shuffling");
  tr->add_option("--variant", o.variant, "baseline, stm, itm, dtm or tda");
  tr->add_option("--epochs", o.epochs, "Maximum epochs");
  tr->add_option("--batch-size", o.batch_size, "Windows per minibatch");
  tr->add_option("--patience", o.patience, "Early-stop patience in epochs");
  tr->add_option("--lr", o.learning_rate, "Learning rate");
  tr->add_option("--clip", o.clip_norm, "Global gradient-norm clip");
  tr->add_option("--word-dim", o.word_dim, "Word embedding size");
  tr->add_option("--hidden-dim", o.hidden_dim, "Encoder hidden size");
  tr->add_option("--time-dim", o.time_dim, "Time embedding size");
  tr->add_option("--decoder-dim", o.decoder_dim, "Decoder hidden size");
  tr->add_option("--max-history", o.max_history, "Context turns per speaker");
  tr->add_option("--time-scale", o.time_scale, "log1p or identity");
  tr->add_flag("--checked", o.checked, "Check every tensor for NaN/Inf");
  tr->add_option("--out", o.out, "Output checkpoint")->required();
  tr->add_option("--log", o.log, "Training log (default: <out>.log)");

  auto* tune = app.add_subcommand("tune-threshold", "Pick the dev-F1-optimal threshold");
  tune->add_option("--model", o.model, "Checkpoint")->required();
  tune->add_option("--corpus", o.corpus, "Corpus")->required();
  tune->add_option("--split", o.split, "Split to tune on (default dev; 'all' for every dialogue)");
  tune->add_option("--out", o.out, "Output JSON with the threshold")->required();
  tune->add_option("--update-model", o.update_model, "Also write a checkpoint using it");

  auto* ev = app.add_subcommand("evaluate", "Score a labeled split");
  ev->add_option("--model", o.model, "Checkpoint")->required();
  ev->add_option("--corpus", o.corpus, "Corpus")->required();
  ev->add_option("--split", o.split, "Split (default test; 'all' for every dialogue)");
  ev->add_option("--threshold", o.threshold, "Decision threshold (default: checkpoint's)");
  ev->add_option("--out", o.out, "Output prefix for .tsv and .json")->required();

  auto* pred = app.add_subcommand("predict", "Write per-candidate probabilities");
  pred->add_option("--model", o.model, "Checkpoint")->required();
  pred->add_option("--corpus", o.corpus, "Corpus (labels not needed)")->required();
  pred->add_option("--split", o.split, "Split (default all)");
  pred->add_option("--threshold", o.threshold, "Decision threshold (default: checkpoint's)");
  pred->add_flag("--merge-duplicates", o.merge_duplicates,
                 "One row per (key, value), keeping the highest probability");
  pred->add_option("--out", o.out, "Output TSV")->required();

  auto* plot = app.add_subcommand("plot-gaps", "SVG histograms of candidate gaps");
  plot->add_option("--corpus", o.corpus, "Labeled corpus")->required();
  plot->add_option("--bins", o.bins, "Histogram bins")->check(CLI::PositiveNumber);
  plot->add_option("--max-gap", o.max_gap, "Upper edge of the last bin (s)")
      ->check(CLI::PositiveNumber);
  plot->add_option("--max-history", o.max_history, "Context turns per speaker");
  plot->add_option("--out-dir", o.out, "Output directory")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen) return cmd_generate(o, out);
    if (*ingest) return cmd_ingest(o, out);
    if (*tr) return cmd_train(o, out);
    if (*tune) return cmd_tune(o, out);
    if (*ev) return cmd_evaluate(o, out);
    if (*pred) return cmd_predict(o, out);
    if (*plot) return cmd_plot_gaps(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace carryover::cli
