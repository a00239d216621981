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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "carryover/error.h"
#include "carryover/numeric/gradcheck.h"
#include "carryover/temporal/tda.h"
#include "carryover/temporal/time_mask.h"

namespace carryover {
namespace {

using numeric::Parameter;
using numeric::ParameterSet;
using numeric::Tape;
using numeric::Tensor;
using numeric::Var;

TimeScale identity_scale() {
  TimeScale s;
  s.kind = TimeScale::Kind::kIdentity;
  return s;
}

void set_values(const Parameter* p, std::vector<double> values) {
  auto& t = const_cast<Parameter*>(p)->value;
  ASSERT_EQ(t.size(), values.size());
  std::copy(values.begin(), values.end(), t.data().begin());
}

TEST(TimeScale, TransformsAndClamps) {
  TimeScale log_scale;
  EXPECT_DOUBLE_EQ(log_scale.apply(0.0), 0.0);
  EXPECT_DOUBLE_EQ(log_scale.apply(std::exp(2.0) - 1.0), 2.0);
  EXPECT_DOUBLE_EQ(log_scale.apply(1e6), std::log1p(3600.0));
  EXPECT_DOUBLE_EQ(identity_scale().apply(42.5), 42.5);
  EXPECT_DOUBLE_EQ(identity_scale().apply(5000.0), 3600.0);
  EXPECT_THROW(log_scale.apply(-1.0), RangeError);
  EXPECT_EQ(parse_time_scale(time_scale_name(TimeScale::Kind::kIdentity)),
            TimeScale::Kind::kIdentity);
}

TEST(TimeEmbedding, ZeroWeightsGiveZero) {
  ParameterSet set;
  Rng rng(1);
  auto p = add_time_mask_params(set, "tm", MaskVariant::kSimple, 4, 0, 2, rng, 0.1);
  set_values(p.time_weight, std::vector<double>(4, 0.0));
  set_values(p.time_bias, std::vector<double>(4, 0.0));
  for (double gap : {0.0, 3.0, 500.0}) {
    Tape tape;
    EXPECT_EQ(time_embedding(tape, gap, TimeConditioner::none(), p, TimeScale{}).value(),
              Tensor::zeros({4}));
  }
}

TEST(TimeEmbedding, HandEvaluation) {
  ParameterSet set;
  Rng rng(1);
  auto p = add_time_mask_params(set, "tm", MaskVariant::kSimple, 2, 0, 2, rng, 0.1);
  set_values(p.time_weight, {1.0, 0.0});
  set_values(p.time_bias, {0.0, 0.0});
  Tape tape;
  const auto d = time_embedding(tape, 2.0, TimeConditioner::none(), p, identity_scale());
  EXPECT_NEAR(d.value()[0], 0.9640276, 1e-7);
  EXPECT_EQ(d.value()[1], 0.0);
}

TEST(TimeEmbedding, Errors) {
  ParameterSet set;
  Rng rng(2);
  auto stm = add_time_mask_params(set, "stm", MaskVariant::kSimple, 3, 0, 2, rng, 0.1);
  auto itm = add_time_mask_params(set, "itm", MaskVariant::kIntent, 3, 2, 2, rng, 0.1);
  Tape tape;
  EXPECT_THROW(time_embedding(tape, -0.5, TimeConditioner::none(), stm, TimeScale{}), RangeError);
  EXPECT_THROW(time_embedding(tape, 1.0, TimeConditioner::domain(std::nullopt), stm, TimeScale{}),
               ContractError);
  EXPECT_THROW(time_embedding(tape, 1.0, TimeConditioner::none(), itm, TimeScale{}),
               ContractError);
  EXPECT_THROW(time_embedding(tape, 1.0, TimeConditioner::intent(std::nullopt), itm, TimeScale{}),
               ContractError);
  Var wrong = tape.constant(Tensor::zeros({3}));
  EXPECT_THROW(time_embedding(tape, 1.0, TimeConditioner::intent(wrong), itm, TimeScale{}),
               DimensionError);
  EXPECT_THROW(add_time_mask_params(set, "bad", MaskVariant::kSimple, 3, 1, 2, rng, 0.1),
               ContractError);
}

// With no conditioning features the intent and domain variants reduce to the
// simple mask exactly.
TEST(TimeMask, EmptyConditioningReducesToSimple) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ParameterSet a, b, c;
    Rng ra(seed), rb(seed), rc(seed);
    auto stm = add_time_mask_params(a, "m", MaskVariant::kSimple, 4, 0, 6, ra, 1.0);
    auto itm = add_time_mask_params(b, "m", MaskVariant::kIntent, 4, 0, 6, rb, 1.0);
    auto dtm = add_time_mask_params(c, "m", MaskVariant::kDomain, 4, 0, 6, rc, 1.0);
    Rng gaps(seed + 100);
    for (int i = 0; i < 10; ++i) {
      const double gap = gaps.uniform(0, 200);
      Tape tape;
      const auto ms = compute_time_mask(
          tape, time_embedding(tape, gap, TimeConditioner::none(), stm, TimeScale{}), stm);
      const auto mi = compute_time_mask(
          tape, time_embedding(tape, gap, TimeConditioner::intent(std::nullopt), itm, TimeScale{}),
          itm);
      const auto md = compute_time_mask(
          tape, time_embedding(tape, gap, TimeConditioner::domain(std::nullopt), dtm, TimeScale{}),
          dtm);
      EXPECT_EQ(ms.value(), mi.value());
      EXPECT_EQ(ms.value(), md.value());
    }
  }
}

TEST(TimeMask, ConstantExamples) {
  ParameterSet set;
  Rng rng(3);
  auto p = add_time_mask_params(set, "tm", MaskVariant::kSimple, 2, 0, 3, rng, 0.1);
  set_values(p.mask_weight, std::vector<double>(6, 0.0));
  set_values(p.mask_bias, std::vector<double>(3, 0.0));
  Tape tape;
  const auto d = tape.constant(Tensor::vector({0.3, -0.7}));
  for (double v : compute_time_mask(tape, d, p).value().values()) EXPECT_EQ(v, 0.5);

  ParameterSet one;
  auto q = add_time_mask_params(one, "tm", MaskVariant::kSimple, 2, 0, 1, rng, 0.1);
  set_values(q.mask_weight, {0.0, 0.0});
  set_values(q.mask_bias, {std::log(3.0)});
  EXPECT_NEAR(compute_time_mask(tape, d, q).item(), 0.75, 1e-15);
  EXPECT_THROW(compute_time_mask(tape, tape.constant(Tensor::zeros({3})), q), DimensionError);
}

TEST(TimeMask, RangeAndAttenuation) {
  ParameterSet set;
  Rng rng(4);
  auto p = add_time_mask_params(set, "tm", MaskVariant::kSimple, 5, 0, 4, rng, 3.0);
  for (int i = 0; i < 1000; ++i) {
    Tape tape;
    std::vector<double> dt(5), h(4);
    for (double& v : dt) v = rng.uniform(-1, 1);
    for (double& v : h) v = rng.uniform(-10, 10);
    const auto m = compute_time_mask(tape, tape.constant(Tensor::vector(dt)), p);
    for (double v : m.value().values()) {
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
    const auto masked = apply_time_mask(tape.constant(Tensor::vector(h)), m);
    double n0 = 0.0, n1 = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (h[k] != 0.0) EXPECT_LT(std::abs(masked.value()[k]), std::abs(h[k]));
      n0 += h[k] * h[k];
      n1 += masked.value()[k] * masked.value()[k];
    }
    EXPECT_LT(n1, n0);
  }
}

TEST(ApplyTimeMask, Examples) {
  Tape tape;
  EXPECT_EQ(apply_time_mask(tape.constant(Tensor::vector({2, -4})),
                            tape.constant(Tensor::vector({0.5, 0.25})))
                .value()
                .values(),
            (std::vector<double>{1, -1}));
  EXPECT_EQ(apply_time_mask(tape.constant(Tensor::zeros({3})),
                            tape.constant(Tensor::vector({0.1, 0.2, 0.3})))
                .value(),
            Tensor::zeros({3}));
  EXPECT_THROW(apply_time_mask(tape.constant(Tensor::zeros({3})), tape.constant(Tensor::zeros({2}))),
               DimensionError);
}

TEST(DomainOneHot, LayoutAndUnknown) {
  const std::vector<std::string> domains = {"music", "weather"};
  EXPECT_EQ(domain_one_hot("weather", domains).values(), (std::vector<double>{0, 1}));
  EXPECT_EQ(domain_one_hot("sports", domains).values(), (std::vector<double>{0, 0}));
  EXPECT_THROW(domain_one_hot("music", {}), DimensionError);
}

TEST(TimeMask, DomainConditioningChangesMask) {
  ParameterSet set;
  Rng rng(5);
  auto p = add_time_mask_params(set, "tm", MaskVariant::kDomain, 4, 3, 4, rng, 1.0);
  const std::vector<std::string> domains = {"a", "b", "c"};
  Tape tape;
  auto mask_for = [&](const char* dom) {
    auto onehot = tape.constant(domain_one_hot(dom, domains));
    return compute_time_mask(
               tape, time_embedding(tape, 12.0, TimeConditioner::domain(onehot), p, TimeScale{}), p)
        .value();
  };
  EXPECT_NE(mask_for("a"), mask_for("b"));
  EXPECT_NE(mask_for("b"), mask_for("c"));
}

TEST(TimeMask, GradientsThroughPipelineOverSeeds) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (MaskVariant variant : {MaskVariant::kSimple, MaskVariant::kIntent, MaskVariant::kDomain}) {
      ParameterSet set;
      Rng rng(seed);
      const std::size_t cond = variant == MaskVariant::kSimple ? 0 : 3;
      auto p = add_time_mask_params(set, "tm", variant, 4, cond, 5, rng, 1.0);
      Parameter slot{"slot", Tensor::vector({0.3, -1.1, 0.7, 2.0, -0.4})};
      Parameter intent{"intent", Tensor::vector({0.2, -0.5, 0.9})};
      const double gap = rng.uniform(0, 120);
      auto fn = [&](Tape& tape) {
        TimeConditioner c{variant, std::nullopt};
        if (variant == MaskVariant::kIntent) c.features = tape.param(intent);
        if (variant == MaskVariant::kDomain) c.features = tape.constant(Tensor::vector({0, 1, 0}));
        const auto d = time_embedding(tape, gap, c, p, TimeScale{});
        const auto h = apply_time_mask(tape.param(slot), compute_time_mask(tape, d, p));
        return numeric::sum(numeric::hadamard(h, h));
      };
      auto ptrs = set.pointers();
      ptrs.push_back(&slot);
      if (variant == MaskVariant::kIntent) ptrs.push_back(&intent);
      EXPECT_LT(numeric::finite_diff_check(fn, ptrs, 1e-6), 1e-4)
          << "seed " << seed << " " << mask_variant_name(variant);
    }
  }
}

TEST(Tda, Examples) {
  ParameterSet set;
  auto p = add_tda_params(set, "tda");  // raw 0 -> lambda = ln 2
  EXPECT_NEAR(effective_decay(p), std::log(2.0), 1e-15);
  Tape tape;
  EXPECT_EQ(tda_weights(tape, std::vector<double>{7.0}, p).value().values(),
            std::vector<double>{1.0});
  const auto eq = tda_weights(tape, std::vector<double>{3.0, 3.0}, p).value();
  EXPECT_DOUBLE_EQ(eq[0], 0.5);
  EXPECT_DOUBLE_EQ(eq[1], 0.5);
  const auto w = tda_weights(tape, std::vector<double>{0.0, 1.0}, p).value();
  EXPECT_NEAR(w[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(w[1], 1.0 / 3.0, 1e-15);
  EXPECT_THROW(tda_weights(tape, std::vector<double>{}, p), DimensionError);
  EXPECT_THROW(tda_weights(tape, std::vector<double>{1.0, -2.0}, p), RangeError);
}

TEST(Tda, NormalizedAndMonotoneInGap) {
  Rng rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    ParameterSet set;
    auto p = add_tda_params(set, "tda", rng.uniform(-3, 3));
    EXPECT_GT(effective_decay(p), 0.0);
    std::vector<double> gaps(static_cast<std::size_t>(rng.integer(1, 6)));
    for (double& g : gaps) g = rng.uniform(0, 10);
    Tape tape;
    const auto w = tda_weights(tape, gaps, p).value();
    double sum = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      EXPECT_GE(w[i], 0.0);
      sum += w[i];
      for (std::size_t j = 0; j < gaps.size(); ++j) {
        if (gaps[i] < gaps[j]) EXPECT_GE(w[i], w[j]);
      }
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
}

TEST(Tda, GradientsOverSeeds) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    ParameterSet set;
    auto p = add_tda_params(set, "tda", rng.uniform(-2, 2));
    Parameter h{"h", Tensor::matrix(3, 2, {0.5, -0.3, 1.2, 0.8, -0.9, 0.1})};
    const std::vector<double> gaps = {rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3)};
    auto fn = [&](Tape& tape) {
      const auto w = tda_weights(tape, gaps, p);
      const auto pooled = numeric::matvec(numeric::transpose(tape.param(h)), w);
      return numeric::sum(numeric::tanh(pooled));
    };
    auto ptrs = set.pointers();
    ptrs.push_back(&h);
    EXPECT_LT(numeric::finite_diff_check(fn, ptrs, 1e-6), 1e-4) << "seed " << seed;
  }
}

}  // namespace
}  // namespace carryover
