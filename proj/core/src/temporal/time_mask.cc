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

#include "carryover/temporal/time_mask.h"

#include <cmath>

#include "carryover/error.h"

namespace carryover {

using numeric::Tape;
using numeric::Tensor;
using numeric::Var;

std::string_view mask_variant_name(MaskVariant v) {
  switch (v) {
    case MaskVariant::kSimple: return "simple";
    case MaskVariant::kIntent: return "intent";
    case MaskVariant::kDomain: return "domain";
  }
  return "?";
}

double TimeScale::apply(double seconds) const {
  if (!std::isfinite(seconds) || seconds < 0) {
    throw RangeError("temporal distance must be a nonnegative number, got " +
                     std::to_string(seconds));
  }
  const double clamped = std::min(seconds, ceiling);
  return kind == Kind::kLog1p ? std::log1p(clamped) : clamped;
}

std::string_view time_scale_name(TimeScale::Kind k) {
  return k == TimeScale::Kind::kLog1p ? "log1p" : "identity";
}

TimeScale::Kind parse_time_scale(std::string_view name) {
  if (name == "log1p") return TimeScale::Kind::kLog1p;
  if (name == "identity") return TimeScale::Kind::kIdentity;
  throw ContractError("unknown time scale '" + std::string(name) + "'");
}

TimeMaskParams add_time_mask_params(numeric::ParameterSet& params, const std::string& prefix,
                                    MaskVariant variant, std::size_t time_dim,
                                    std::size_t condition_dim, std::size_t slot_dim, Rng& rng,
                                    double range) {
  if (variant == MaskVariant::kSimple && condition_dim != 0) {
    throw ContractError("simple time mask takes no conditioning features");
  }
  auto uniform = [&](numeric::Shape shape) {
    std::vector<double> data(numeric::shape_size(shape));
    for (double& v : data) v = rng.uniform(-range, range);
    return Tensor(std::move(shape), std::move(data));
  };
  TimeMaskParams p;
  p.variant = variant;
  p.time_dim = time_dim;
  p.condition_dim = condition_dim;
  p.slot_dim = slot_dim;
  p.time_weight = &params.add(prefix + ".time.w", uniform({time_dim, 1 + condition_dim}));
  p.time_bias = &params.add(prefix + ".time.b", uniform({time_dim}));
  p.mask_weight = &params.add(prefix + ".mask.w", uniform({slot_dim, time_dim}));
  p.mask_bias = &params.add(prefix + ".mask.b", uniform({slot_dim}));
  return p;
}

Var time_embedding(Tape& tape, double gap_seconds, const TimeConditioner& conditioner,
                   const TimeMaskParams& params, const TimeScale& scale) {
  if (conditioner.variant != params.variant) {
    throw ContractError("time_embedding: " + std::string(mask_variant_name(conditioner.variant)) +
                        " conditioner given to " + std::string(mask_variant_name(params.variant)) +
                        " time mask");
  }
  const double scaled = scale.apply(gap_seconds);
  Var input = tape.constant(Tensor::scalar(scaled));
  if (params.condition_dim > 0) {
    if (!conditioner.features) {
      throw ContractError("time_embedding: conditioning features required");
    }
    if (conditioner.features->size() != params.condition_dim) {
      throw DimensionError("time_embedding: conditioning length " +
                           std::to_string(conditioner.features->size()) + " vs " +
                           std::to_string(params.condition_dim));
    }
    input = numeric::concat({input, *conditioner.features});
  } else if (conditioner.features) {
    throw DimensionError("time_embedding: unexpected conditioning features");
  }
  Var pre = numeric::add(numeric::matvec(tape.param(*params.time_weight), input),
                         tape.param(*params.time_bias));
  return numeric::tanh(pre);
}

Var compute_time_mask(Tape& tape, Var time_emb, const TimeMaskParams& params) {
  Var pre = numeric::add(numeric::matvec(tape.param(*params.mask_weight), time_emb),
                         tape.param(*params.mask_bias));
  return numeric::sigmoid(pre);
}

Var apply_time_mask(Var slot_embedding, Var mask) {
  if (slot_embedding.size() != mask.size()) {
    throw DimensionError("apply_time_mask: slot embedding length " +
                         std::to_string(slot_embedding.size()) + " vs mask length " +
                         std::to_string(mask.size()));
  }
  return numeric::hadamard(slot_embedding, mask);
}

Tensor domain_one_hot(std::string_view domain, const std::vector<std::string>& domains) {
  if (domains.empty()) throw DimensionError("domain_one_hot: no known domains");
  auto v = Tensor::zeros({domains.size()});
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (domains[i] == domain) {
      v[i] = 1.0;
      break;
    }
  }
  return v;
}

}  // namespace carryover
