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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits
// nonzero if any blocking criterion fails. Pass criterion numbers as
// arguments to run a subset. Criterion 7 reads a DSTC2 tree from
// $CARRYOVER_DSTC2_DIR.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "carryover/data/bayes_bound.h"
#include "carryover/data/dstc2.h"
#include "carryover/data/synthetic.h"
#include "carryover/model/checkpoint.h"
#include "carryover/numeric/gradcheck.h"
#include "carryover/temporal/tda.h"
#include "carryover/temporal/time_mask.h"
#include "carryover/training/trainer.h"
#include "test_util.h"

namespace carryover {
namespace {

namespace fs = std::filesystem;
using numeric::Parameter;
using numeric::ParameterSet;
using numeric::Tape;
using numeric::Tensor;
using numeric::Var;

struct Outcome {
  bool pass = false;
  std::string detail;
  bool blocking = true;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

constexpr ModelVariant kVariants[] = {ModelVariant::kBaseline, ModelVariant::kStm,
                                      ModelVariant::kItm, ModelVariant::kDtm, ModelVariant::kTda};

// ---------------------------------------------------------------------------
// 1. Gradients

Outcome gradient_suite() {
  double worst = 0.0;
  std::string worst_where;
  std::size_t checks = 0;
  auto record = [&](double err, const std::string& where) {
    ++checks;
    if (err > worst || std::isnan(err)) worst = std::isnan(err) ? INFINITY : err, worst_where = where;
  };

  for (std::uint64_t cfg = 1; cfg <= 20; ++cfg) {
    Rng rng(cfg);
    const auto dim = [&] { return static_cast<std::size_t>(rng.integer(2, 3)); };
    const std::string tag = "config " + std::to_string(cfg);

    // Full model, every variant, on a short synthetic dialogue.
    SyntheticSpec spec = default_synthetic_spec();
    spec.dialogues = 8;
    spec.seed = cfg;
    spec.max_user_turns = 3;
    const auto corpus = generate_synthetic(spec);
    const std::size_t D = static_cast<std::size_t>(rng.integer(1, 2));
    // Latest user turn offering at least two candidates.
    const Dialogue* found = nullptr;
    std::size_t t = 0;
    for (const auto& dd : corpus) {
      for (std::size_t u = user_turn_indices(dd).size(); u-- > 0 && !found;) {
        if (build_candidate_set(dd, u, D).size() >= 2) found = &dd, t = u;
      }
      if (found) break;
    }
    if (found == nullptr) return {false, tag + ": no usable synthetic window"};
    const Dialogue& d = *found;
    ModelConfig mc;
    mc.word_dim = dim();
    mc.hidden_dim = dim();
    mc.time_dim = dim();
    mc.decoder_dim = dim();
    mc.max_history = D;
    mc.seed = cfg;
    mc.init_range = 0.5;
    for (ModelVariant v : kVariants) {
      mc.variant = v;
      CarryoverModel model(mc, build_vocabulary(corpus), collect_domains(corpus));
      if (model.tda()) {
        const_cast<Parameter*>(model.tda()->decay_raw)->value[0] = rng.uniform(-1, 1);
      }
      const auto window = model.prepare_window(make_context_window(d, t, D));
      std::vector<PreparedCandidate> cands;
      for (const auto& c : label_candidates(build_candidate_set(d, t, D), d.gold_states[t])) {
        cands.push_back(model.prepare_candidate(c));
      }
      auto fn = [&](Tape& tape) {
        const auto probs = model.forward(tape, window, cands);
        std::vector<Var> losses;
        for (std::size_t i = 0; i < probs.size(); ++i) {
          losses.push_back(numeric::bce_loss(probs[i], cands[i].label));
        }
        return numeric::sum(numeric::concat(losses));
      };
      record(numeric::finite_diff_check(fn, model.parameters().pointers(), 1e-6),
             tag + " model " + std::string(variant_name(v)));
    }

    // Time-mask pipeline alone, each conditioning variant.
    for (MaskVariant mv : {MaskVariant::kSimple, MaskVariant::kIntent, MaskVariant::kDomain}) {
      ParameterSet set;
      const std::size_t cond = mv == MaskVariant::kSimple ? 0 : dim();
      const std::size_t slot_dim = dim() * 2;
      auto p = add_time_mask_params(set, "tm", mv, dim(), cond, slot_dim, rng, 1.0);
      std::vector<double> sv(slot_dim), cv(cond);
      for (double& x : sv) x = rng.uniform(-2, 2);
      for (double& x : cv) x = rng.uniform(-1, 1);
      Parameter slot{"slot", Tensor::vector(sv)};
      Parameter features{"features", cond > 0 ? Tensor::vector(cv) : Tensor::zeros({1})};
      const double gap = rng.uniform(0, 200);
      auto fn = [&](Tape& tape) {
        TimeConditioner c{mv, std::nullopt};
        if (mv != MaskVariant::kSimple) c.features = tape.param(features);
        const auto h = apply_time_mask(
            tape.param(slot),
            compute_time_mask(tape, time_embedding(tape, gap, c, p, TimeScale{}), p));
        return numeric::sum(numeric::tanh(h));
      };
      auto ptrs = set.pointers();
      ptrs.push_back(&slot);
      if (cond > 0) ptrs.push_back(&features);
      record(numeric::finite_diff_check(fn, ptrs, 1e-6),
             tag + " mask " + std::string(mask_variant_name(mv)));
    }

    // Decay attention over encoded history turns.
    {
      ParameterSet set;
      auto p = add_tda_params(set, "tda", rng.uniform(-2, 2));
      const std::size_t n = static_cast<std::size_t>(rng.integer(2, 4)), h = dim();
      std::vector<double> hv(n * h), gaps(n);
      for (double& x : hv) x = rng.uniform(-1, 1);
      for (double& g : gaps) g = rng.uniform(0, 5);
      Parameter hist{"h", Tensor::matrix(n, h, hv)};
      auto fn = [&](Tape& tape) {
        const auto w = tda_weights(tape, gaps, p);
        return numeric::sum(numeric::tanh(numeric::matvec(numeric::transpose(tape.param(hist)), w)));
      };
      auto ptrs = set.pointers();
      ptrs.push_back(&hist);
      record(numeric::finite_diff_check(fn, ptrs, 1e-6), tag + " tda");
    }
  }
  Outcome o;
  o.pass = worst < 1e-4;
  o.detail = std::to_string(checks) + " checks over 20 configurations, max relative error " +
             fmt("%.2e", worst) + (worst_where.empty() ? "" : " (" + worst_where + ")");
  return o;
}

// ---------------------------------------------------------------------------
// 2. Invariants

Outcome invariant_suite() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok && std::find(failures.begin(), failures.end(), what) == failures.end()) {
      failures.push_back(what);
    }
  };
  Rng rng(77);

  // Mask range and attenuation.
  for (int trial = 0; trial < 200; ++trial) {
    ParameterSet set;
    auto p = add_time_mask_params(set, "tm", MaskVariant::kSimple, 4, 0, 6, rng, 3.0);
    for (int k = 0; k < 25; ++k) {
      Tape tape;
      std::vector<double> h(6);
      for (double& x : h) x = rng.uniform(-5, 5);
      const auto m = compute_time_mask(
          tape, time_embedding(tape, rng.uniform(0, 4000), TimeConditioner::none(), p, TimeScale{}),
          p);
      double n0 = 0, n1 = 0;
      const auto masked = apply_time_mask(tape.constant(Tensor::vector(h)), m);
      for (std::size_t i = 0; i < h.size(); ++i) {
        expect(m.value()[i] > 0.0 && m.value()[i] < 1.0, "mask range");
        n0 += h[i] * h[i];
        n1 += masked.value()[i] * masked.value()[i];
      }
      expect(n1 < n0, "attenuation");
    }
  }

  // Softmax and decay-attention normalization; monotonicity in gap.
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 8));
    std::vector<double> x(n), gaps(n);
    for (double& v : x) v = rng.uniform(-30, 30);
    for (double& g : gaps) g = rng.uniform(0, 8);
    Tape tape;
    double s = 0;
    for (double v : numeric::softmax(tape.constant(Tensor::vector(x))).value().values()) s += v;
    expect(std::abs(s - 1.0) <= 1e-12, "softmax normalization");
    ParameterSet set;
    auto p = add_tda_params(set, "tda", rng.uniform(-3, 3));
    const auto w = tda_weights(tape, gaps, p).value();
    s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      s += w[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (gaps[i] < gaps[j]) expect(w[i] >= w[j], "decay weight monotonicity");
      }
    }
    expect(std::abs(s - 1.0) <= 1e-12, "decay weight normalization");
  }

  // Empty conditioning reduces exactly to the simple mask.
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    ParameterSet a, b, c;
    Rng ra(seed), rb(seed), rc(seed);
    auto stm = add_time_mask_params(a, "m", MaskVariant::kSimple, 5, 0, 6, ra, 1.0);
    auto itm = add_time_mask_params(b, "m", MaskVariant::kIntent, 5, 0, 6, rb, 1.0);
    auto dtm = add_time_mask_params(c, "m", MaskVariant::kDomain, 5, 0, 6, rc, 1.0);
    for (int k = 0; k < 20; ++k) {
      const double gap = rng.uniform(0, 300);
      Tape tape;
      const auto ms = compute_time_mask(
          tape, time_embedding(tape, gap, TimeConditioner::none(), stm, TimeScale{}), stm);
      const auto mi = compute_time_mask(
          tape, time_embedding(tape, gap, TimeConditioner::intent(std::nullopt), itm, TimeScale{}),
          itm);
      const auto md = compute_time_mask(
          tape, time_embedding(tape, gap, TimeConditioner::domain(std::nullopt), dtm, TimeScale{}),
          dtm);
      expect(ms.value() == mi.value(), "intent mask with no features equals simple mask");
      expect(ms.value() == md.value(),
             "domain mask with no features equals simple mask");
    }
  }

  // Candidate sets against independent enumeration.
  std::size_t sets = 0;
  for (int n = 0; n < 1000; ++n) {
    const Dialogue d = testing::random_dialogue(rng, 8, 4, n % 2 == 0);
    const auto users = user_turn_indices(d).size();
    for (std::size_t t = 0; t < users; ++t) {
      for (int D : {1, 2, 3}) {
        std::vector<testing::CandidateTuple> got;
        for (const auto& c : build_candidate_set(d, t, static_cast<std::size_t>(D))) {
          got.emplace_back(c.slot.key, c.slot.value, c.source_turn, c.distance_offset,
                           c.temporal_distance);
        }
        std::sort(got.begin(), got.end());
        expect(got == testing::brute_force_candidates(d, t, D), "candidate-set enumeration");
        ++sets;
      }
    }
  }

  // Raising the threshold never raises recall or the positive count.
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ScoredCandidate> s(400);
    for (auto& c : s) c = {rng.uniform(), rng.bernoulli(0.4), rng.uniform(0, 90)};
    double prev_recall = 2.0;
    std::size_t prev_pos = s.size() + 1;
    for (int i = 0; i <= 200; ++i) {
      const auto r = evaluate_scored(s, i / 200.0);
      expect(r.overall.recall() <= prev_recall, "threshold sweep recall monotonicity");
      expect(r.overall.tp + r.overall.fp <= prev_pos, "threshold sweep count monotonicity");
      prev_recall = r.overall.recall();
      prev_pos = r.overall.tp + r.overall.fp;
    }
  }

  Outcome o;
  o.pass = failures.empty();
  if (o.pass) {
    o.detail = "all invariants hold (" + std::to_string(sets) + " candidate sets enumerated)";
  } else {
    for (const auto& f : failures) o.detail += (o.detail.empty() ? "violated: " : "; ") + f;
  }
  return o;
}

// ---------------------------------------------------------------------------
// 3 and 4. Synthetic temporal-disambiguation experiment

struct VariantRun {
  EvalReport report;
  double seconds = 0.0;
  std::size_t epochs = 0;
};

struct SyntheticExperiment {
  BayesBounds bounds;
  VariantRun baseline, stm, dtm;
  bool done = false;
};

SyntheticExperiment& synthetic_experiment() {
  static SyntheticExperiment e;
  if (e.done) return e;
  numeric::CheckedModeScope fast(false);
  const SyntheticSpec spec = default_synthetic_spec();
  e.bounds = bayes_f1(spec);
  const auto corpus = generate_synthetic(spec);
  const auto dev = build_examples(select_split(corpus, "dev"), spec.max_history);
  const auto test = build_examples(select_split(corpus, "test"), spec.max_history);
  auto run = [&](ModelVariant v) {
    const auto t0 = std::chrono::steady_clock::now();
    ModelConfig mc;
    mc.variant = v;
    mc.max_history = spec.max_history;
    mc.word_dim = mc.hidden_dim = mc.time_dim = 16;
    mc.decoder_dim = 32;
    TrainConfig tc;
    tc.learning_rate = 3e-3;
    tc.batch_size = 32;
    tc.max_epochs = 30;
    tc.patience = 4;
    auto result = train(corpus, mc, tc);
    const auto tau = tune_threshold(result.model, dev);
    VariantRun r;
    r.report = evaluate(result.model, test, tau.threshold);
    r.epochs = result.summary.log.size() - 1;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("  %-8s test F1 %.4f  tau %.4f  epochs %zu  %.0f s\n",
                std::string(variant_name(v)).c_str(), r.report.overall.f1(), tau.threshold,
                r.epochs, r.seconds);
    std::fflush(stdout);
    return r;
  };
  std::printf("  bounds %s\n", e.bounds.to_json().dump().c_str());
  e.baseline = run(ModelVariant::kBaseline);
  e.stm = run(ModelVariant::kStm);
  e.dtm = run(ModelVariant::kDtm);
  e.done = true;
  return e;
}

Outcome synthetic_ordering() {
  const auto& e = synthetic_experiment();
  const double base = e.baseline.report.overall.f1(), stm = e.stm.report.overall.f1(),
               dtm = e.dtm.report.overall.f1();
  const bool near_offset = std::abs(base - e.bounds.offset_only) <= 0.03;
  const bool stm_gain = stm - base >= 0.03;
  const bool dtm_ge = dtm >= stm;
  const bool dtm_near = e.bounds.domain_gap - dtm <= 0.05;
  Outcome o;
  o.pass = near_offset && stm_gain && dtm_ge && dtm_near;
  o.detail = "baseline " + fmt("%.4f", base) + " vs offset bound " +
             fmt("%.4f", e.bounds.offset_only) + (near_offset ? "" : " [too far]") + "; stm " +
             fmt("%.4f", stm) + " (+" + fmt("%.4f", stm - base) + ")" +
             (stm_gain ? "" : " [gain < 0.03]") + "; dtm " + fmt("%.4f", dtm) +
             (dtm_ge ? "" : " [below stm]") + " vs (domain,gap) bound " +
             fmt("%.4f", e.bounds.domain_gap) + (dtm_near ? "" : " [too far]");
  return o;
}

Outcome long_gap_margin() {
  const auto& e = synthetic_experiment();
  auto bin_f1 = [](const VariantRun& r, const char* name) {
    for (const auto& b : r.report.bins) {
      if (b.name == name) return b.confusion.f1();
    }
    return 0.0;
  };
  const double short_margin = bin_f1(e.dtm, "(0,15]") - bin_f1(e.baseline, "(0,15]");
  const double long_margin = bin_f1(e.dtm, "(30,60]") - bin_f1(e.baseline, "(30,60]");
  Outcome o;
  o.pass = long_margin > short_margin;
  o.detail = "dtm - baseline: (30,60] " + fmt("%+.4f", long_margin) + ", (0,15] " +
             fmt("%+.4f", short_margin);
  return o;
}

// ---------------------------------------------------------------------------
// 5. Overfit

Outcome overfit() {
  const auto toy = testing::toy_examples(50);
  std::string detail;
  bool all = true;
  for (ModelVariant v : kVariants) {
    ModelConfig mc;
    mc.variant = v;
    mc.word_dim = mc.hidden_dim = mc.time_dim = 8;
    mc.decoder_dim = 16;
    mc.seed = 5;
    CarryoverModel model(mc, build_vocabulary(toy.corpus), collect_domains(toy.corpus));
    TrainConfig tc;
    tc.max_epochs = 200;
    tc.patience = 200;
    tc.batch_size = 8;
    tc.learning_rate = 1e-2;
    tc.checked = true;
    const auto summary = train_model(model, toy.examples, toy.examples, tc);
    const double f1 = evaluate(model, toy.examples, 0.5).overall.f1();
    all = all && f1 == 1.0;
    detail += (detail.empty() ? "" : ", ") + std::string(variant_name(v)) + " " +
              fmt("%.3f", f1) + " @" + std::to_string(summary.best_epoch);
  }
  return {all, "training F1 on " + std::to_string(candidate_count(toy.examples)) +
                   " candidates: " + detail};
}

// ---------------------------------------------------------------------------
// 6. Determinism

std::string pipeline_report(std::uint64_t seed, const fs::path& checkpoint) {
  SyntheticSpec spec = default_synthetic_spec();
  spec.dialogues = 400;
  spec.seed = seed;
  const auto corpus = generate_synthetic(spec);
  ModelConfig mc;
  mc.variant = ModelVariant::kDtm;
  mc.word_dim = mc.hidden_dim = mc.time_dim = 8;
  mc.decoder_dim = 16;
  mc.seed = seed;
  TrainConfig tc;
  tc.max_epochs = 3;
  tc.seed = seed;
  auto result = train(corpus, mc, tc);
  const auto dev = build_examples(select_split(corpus, "dev"), spec.max_history);
  const auto test = build_examples(select_split(corpus, "test"), spec.max_history);
  const auto tau = tune_threshold(result.model, dev);
  result.model.set_threshold(tau.threshold);
  if (!checkpoint.empty()) save_checkpoint(result.model, checkpoint);
  return evaluate(result.model, test, tau.threshold).to_tsv();
}

Outcome determinism() {
  const fs::path ckpt = fs::temp_directory_path() / "carryover_acceptance_ckpt.json";
  const auto a = pipeline_report(17, ckpt);
  const auto b = pipeline_report(17, {});
  const bool reports_equal = a == b;

  SyntheticSpec spec = default_synthetic_spec();
  spec.dialogues = 400;
  spec.seed = 17;
  const auto test = build_examples(select_split(generate_synthetic(spec), "test"), spec.max_history);
  const auto loaded = load_checkpoint(ckpt);
  const auto reloaded = checkpoint_from_json(checkpoint_to_json(loaded));
  const auto s1 = score_examples(loaded, test);
  const auto s2 = score_examples(reloaded, test);
  bool scores_equal = s1.size() == s2.size() && !s1.empty();
  for (std::size_t i = 0; scores_equal && i < s1.size(); ++i) scores_equal = s1[i].score == s2[i].score;
  const bool reload_report = evaluate(loaded, test, loaded.config().threshold).to_tsv() == a;
  fs::remove(ckpt);
  Outcome o;
  o.pass = reports_equal && scores_equal && reload_report;
  o.detail = std::string("repeat-run reports ") + (reports_equal ? "identical" : "DIFFER") +
             "; checkpoint round-trip scores " + (scores_equal ? "bit-identical" : "DIFFER") +
             " over " + std::to_string(s1.size()) + " candidates; reloaded report " +
             (reload_report ? "identical" : "DIFFERS");
  return o;
}

// ---------------------------------------------------------------------------
// 7. DSTC2 directional check

Outcome dstc2_check() {
  Outcome o;
  o.blocking = false;
  const char* root = std::getenv("CARRYOVER_DSTC2_DIR");
  if (root == nullptr || !fs::exists(root)) {
    o.pass = false;
    o.detail = "not run: no DSTC2 tree (set CARRYOVER_DSTC2_DIR); non-blocking";
    return o;
  }
  numeric::CheckedModeScope fast(false);
  const auto corpus = ingest_dstc2(root);
  const auto dev = build_examples(select_split(corpus, "dev"), 2);
  const auto test = build_examples(select_split(corpus, "test"), 2);
  auto run = [&](ModelVariant v) {
    ModelConfig mc;
    mc.variant = v;
    mc.word_dim = mc.hidden_dim = mc.time_dim = 16;
    mc.decoder_dim = 32;
    TrainConfig tc;
    tc.learning_rate = 3e-3;
    tc.max_epochs = 15;
    tc.patience = 3;
    auto result = train(corpus, mc, tc);
    return evaluate(result.model, test, tune_threshold(result.model, dev).threshold).overall.f1();
  };
  const double base = run(ModelVariant::kBaseline), stm = run(ModelVariant::kStm);
  o.pass = stm >= base;
  o.detail = std::to_string(corpus.size()) + " dialogues; baseline " + fmt("%.4f", base) +
             ", stm " + fmt("%.4f", stm) + "; non-blocking";
  return o;
}

}  // namespace
}  // namespace carryover

int main(int argc, char** argv) {
  using namespace carryover;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "gradient suite", gradient_suite},
      {2, "invariant suite", invariant_suite},
      {3, "synthetic ordering", synthetic_ordering},
      {4, "long-gap margin", long_gap_margin},
      {5, "overfit", overfit},
      {6, "determinism", determinism},
      {7, "dstc2 direction", dstc2_check},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  bool ok = true;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what(), c.id != 7};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), s);
    std::fflush(stdout);
    if (o.blocking && !o.pass) ok = false;
  }
  return ok ? 0 : 1;
}
