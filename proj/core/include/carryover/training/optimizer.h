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

#ifndef CARRYOVER_TRAINING_OPTIMIZER_H_
#define CARRYOVER_TRAINING_OPTIMIZER_H_

#include <cstddef>
#include <vector>

#include "carryover/numeric/tape.h"

namespace carryover {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adam over every parameter of a set, in registration order. Parameters
// absent from a gradient batch are treated as having zero gradient.
class Adam {
 public:
  Adam(numeric::ParameterSet& params, AdamConfig config);

  void step(const numeric::Gradients& grads);
  std::size_t steps() const { return steps_; }

 private:
  numeric::ParameterSet* params_;
  AdamConfig config_;
  std::vector<std::vector<double>> m_, v_;
  std::size_t steps_ = 0;
};

// Global L2 norm over all parameter gradients.
double gradient_norm(const numeric::Gradients& grads, const numeric::ParameterSet& params);

// Rescales so the global norm is at most `max_norm`; returns the norm before
// clipping.
double clip_gradients(numeric::Gradients& grads, const numeric::ParameterSet& params,
                      double max_norm);

}  // namespace carryover

#endif  // CARRYOVER_TRAINING_OPTIMIZER_H_
