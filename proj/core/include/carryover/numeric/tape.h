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

#ifndef CARRYOVER_NUMERIC_TAPE_H_
#define CARRYOVER_NUMERIC_TAPE_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "carryover/numeric/tensor.h"

namespace carryover::numeric {

// A named trainable tensor. Addresses are stable once owned by a ParameterSet.
struct Parameter {
  std::string name;
  Tensor value;
};

// Owns a model's parameters in registration order. Registration order is the
// canonical order for serialization and for deterministic gradient reduction.
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(const ParameterSet&) = delete;
  ParameterSet& operator=(const ParameterSet&) = delete;
  ParameterSet(ParameterSet&&) = default;
  ParameterSet& operator=(ParameterSet&&) = default;

  Parameter& add(std::string name, Tensor value);

  std::size_t size() const { return params_.size(); }
  Parameter& operator[](std::size_t i) { return *params_[i]; }
  const Parameter& operator[](std::size_t i) const { return *params_[i]; }
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  std::vector<Parameter*> pointers();
  std::size_t scalar_count() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

// Gradient accumulators keyed by parameter identity.
class Gradients {
 public:
  void accumulate(const Parameter& p, std::span<const double> g);
  // Zero-filled on first access.
  std::vector<double>& at(const Parameter& p);
  const std::vector<double>* find(const Parameter& p) const;
  void scale(double factor);
  void clear() { grads_.clear(); }
  bool empty() const { return grads_.empty(); }

 private:
  std::unordered_map<const Parameter*, std::vector<double>> grads_;
};

class Tape;

// Handle to a value recorded on a tape.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t size() const { return value().size(); }
  double item() const { return value().item(); }
  // Gradient of the last backward() target w.r.t. this value; empty if the
  // value was unreachable or does not require a gradient.
  std::span<const double> grad() const;

  Tape* tape() const { return tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Reverse-mode recording of primitive operations. Single writer; one
// backward pass per tape.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Constant input. Gradients are kept only if value.requires_grad().
  Var constant(Tensor value);
  // Parameter input; repeated binds of the same parameter return one node.
  Var param(const Parameter& p);

  // Runs the backward pass from a scalar loss. Parameter gradients are added
  // into `sink` if given, and stay readable through param_grad() either way.
  void backward(Var loss, Gradients* sink = nullptr);

  std::span<const double> param_grad(const Parameter& p) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  friend class Var;
  friend Var matvec(Var, Var);
  friend Var matmul(Var, Var);
  friend Var add(Var, Var);
  friend Var hadamard(Var, Var);
  friend Var concat(std::span<const Var>);
  friend Var sigmoid(Var);
  friend Var tanh(Var);
  friend Var softplus(Var);
  friend Var softmax(Var);
  friend Var mean(Var);
  friend Var sum(Var);
  friend Var scale(Var, double);
  friend Var bce_loss(Var, double);
  friend Var row(Var, std::size_t);
  friend Var stack(std::span<const Var>);
  friend Var transpose(Var);

  enum class Op : std::uint8_t {
    kConstant,
    kParam,
    kMatVec,
    kMatMul,
    kAdd,
    kHadamard,
    kConcat,
    kSigmoid,
    kTanh,
    kSoftplus,
    kSoftmax,
    kMean,
    kSum,
    kScale,
    kBce,
    kRow,
    kStack,
    kTranspose,
  };

  struct Node {
    Op op = Op::kConstant;
    Tensor value;
    const Parameter* param = nullptr;
    std::vector<std::size_t> inputs;
    double aux = 0.0;
    std::size_t aux_index = 0;
    bool needs_grad = false;
    std::vector<double> grad;
  };

  const Tensor& value_of(std::size_t id) const;
  Var record(Op op, Tensor value, std::vector<std::size_t> inputs, double aux = 0.0,
             std::size_t aux_index = 0);
  std::vector<double>& grad_buffer(std::size_t id);
  void backprop_node(std::size_t id);

  std::deque<Node> nodes_;  // deque keeps value() references valid as the tape grows
  std::unordered_map<const Parameter*, std::size_t> bound_;
  bool consumed_ = false;
};

// Primitive operations. All reject mismatched shapes with DimensionError;
// there is no broadcasting.
Var matvec(Var w, Var x);
Var matmul(Var a, Var b);
Var add(Var a, Var b);
Var hadamard(Var a, Var b);
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);
Var sigmoid(Var x);
Var tanh(Var x);
Var softplus(Var x);
Var softmax(Var x);
Var mean(Var x);
Var sum(Var x);
Var scale(Var x, double factor);
// Binary cross-entropy of probability `p` (scalar) against label in {0, 1};
// p is clamped to [1e-7, 1 - 1e-7] before the log.
Var bce_loss(Var p, double label);
// Row `index` of matrix `m` as a vector (embedding lookup).
Var row(Var m, std::size_t index);
// Stacks equal-length vectors into a matrix, one per row.
Var stack(std::span<const Var> rows);
Var transpose(Var m);

inline constexpr double kProbabilityClamp = 1e-7;

}  // namespace carryover::numeric

#endif  // CARRYOVER_NUMERIC_TAPE_H_
