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

#ifndef CARRYOVER_TEMPORAL_TIME_MASK_H_
#define CARRYOVER_TEMPORAL_TIME_MASK_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carryover/numeric/tape.h"
#include "carryover/random.h"

namespace carryover {

// Which extra features join the temporal distance at the input of the time
// embedding: nothing, the current intent embedding, or a domain one-hot.
enum class MaskVariant { kSimple, kIntent, kDomain };

std::string_view mask_variant_name(MaskVariant v);

// Transformation of raw seconds before they enter a learned layer.
struct TimeScale {
  enum class Kind { kLog1p, kIdentity };
  Kind kind = Kind::kLog1p;
  double ceiling = 3600.0;

  // Clamps to the ceiling, then applies the transform. Throws RangeError on
  // negative or non-finite input.
  double apply(double seconds) const;
};

std::string_view time_scale_name(TimeScale::Kind k);
TimeScale::Kind parse_time_scale(std::string_view name);

struct TimeMaskParams {
  MaskVariant variant = MaskVariant::kSimple;
  std::size_t time_dim = 0;       // N_t
  std::size_t condition_dim = 0;  // N_a (intent) or N_D (domain); 0 for simple
  std::size_t slot_dim = 0;       // N_s
  const numeric::Parameter* time_weight = nullptr;  // N_t x (1 + condition_dim)
  const numeric::Parameter* time_bias = nullptr;    // N_t
  const numeric::Parameter* mask_weight = nullptr;  // N_s x N_t
  const numeric::Parameter* mask_bias = nullptr;    // N_s

  std::size_t input_dim() const { return 1 + condition_dim; }
};

TimeMaskParams add_time_mask_params(numeric::ParameterSet& params, const std::string& prefix,
                                    MaskVariant variant, std::size_t time_dim,
                                    std::size_t condition_dim, std::size_t slot_dim, Rng& rng,
                                    double range);

// Features concatenated after the scaled temporal distance.
struct TimeConditioner {
  MaskVariant variant = MaskVariant::kSimple;
  std::optional<numeric::Var> features;

  static TimeConditioner none() { return {MaskVariant::kSimple, std::nullopt}; }
  static TimeConditioner intent(std::optional<numeric::Var> h) {
    return {MaskVariant::kIntent, h};
  }
  static TimeConditioner domain(std::optional<numeric::Var> one_hot) {
    return {MaskVariant::kDomain, one_hot};
  }
};

// d_t = tanh(W_t [scale(gap) ; features] + b_t).
numeric::Var time_embedding(numeric::Tape& tape, double gap_seconds,
                            const TimeConditioner& conditioner, const TimeMaskParams& params,
                            const TimeScale& scale);

// m = sigmoid(W_dt d_t + b_dt); every component lies strictly in (0, 1).
numeric::Var compute_time_mask(numeric::Tape& tape, numeric::Var time_emb,
                               const TimeMaskParams& params);

// h_s' = h_s * m elementwise.
numeric::Var apply_time_mask(numeric::Var slot_embedding, numeric::Var mask);

// One-hot over `domains`; an unknown domain maps to the zero vector.
// `domains` must be nonempty.
numeric::Tensor domain_one_hot(std::string_view domain, const std::vector<std::string>& domains);

}  // namespace carryover

#endif  // CARRYOVER_TEMPORAL_TIME_MASK_H_
