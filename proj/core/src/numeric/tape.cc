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

#include "carryover/numeric/tape.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "carryover/error.h"

namespace carryover::numeric {
namespace {

// Largest double below 1 and smallest positive normal; keeps sigmoid and tanh
// outputs strictly inside their open ranges even when the exact value rounds.
constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2;
constexpr double kAboveZero = std::numeric_limits<double>::min();

double stable_sigmoid(double x) {
  double y;
  if (x >= 0) {
    y = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    y = e / (1.0 + e);
  }
  return std::clamp(y, kAboveZero, kBelowOne);
}

Tape* same_tape(Var a, Var b, const char* op) {
  if (!a.valid() || !b.valid()) throw ContractError(std::string(op) + ": invalid variable");
  if (a.tape() != b.tape()) throw ContractError(std::string(op) + ": operands on different tapes");
  return a.tape();
}

Tape* tape_of(Var a, const char* op) {
  if (!a.valid()) throw ContractError(std::string(op) + ": invalid variable");
  return a.tape();
}

void require_vector(const Tensor& t, const char* op) {
  if (t.rank() != 1) {
    throw DimensionError(std::string(op) + ": expected a vector, got " + shape_string(t.shape()));
  }
}

void require_matrix(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " + shape_string(t.shape()));
  }
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_string(a.shape()) +
                         " vs " + shape_string(b.shape()));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ParameterSet / Gradients

Parameter& ParameterSet::add(std::string name, Tensor value) {
  if (find(name) != nullptr) throw ContractError("duplicate parameter name: " + name);
  params_.push_back(std::make_unique<Parameter>(Parameter{std::move(name), std::move(value)}));
  return *params_.back();
}

Parameter* ParameterSet::find(const std::string& name) {
  for (auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

const Parameter* ParameterSet::find(const std::string& name) const {
  for (const auto& p : params_) {
    if (p->name == name) return p.get();
  }
  return nullptr;
}

std::vector<Parameter*> ParameterSet::pointers() {
  std::vector<Parameter*> out;
  out.reserve(params_.size());
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void Gradients::accumulate(const Parameter& p, std::span<const double> g) {
  auto& dst = at(p);
  if (dst.size() != g.size()) {
    throw DimensionError("gradient for " + p.name + " has wrong length");
  }
  for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
}

std::vector<double>& Gradients::at(const Parameter& p) {
  auto [it, inserted] = grads_.try_emplace(&p);
  if (inserted) it->second.assign(p.value.size(), 0.0);
  return it->second;
}

const std::vector<double>* Gradients::find(const Parameter& p) const {
  auto it = grads_.find(&p);
  return it == grads_.end() ? nullptr : &it->second;
}

void Gradients::scale(double factor) {
  for (auto& [p, g] : grads_) {
    for (double& v : g) v *= factor;
  }
}

// ---------------------------------------------------------------------------
// Var

const Tensor& Var::value() const {
  if (!tape_) throw ContractError("value() on invalid variable");
  return tape_->value_of(id_);
}

std::span<const double> Var::grad() const {
  if (!tape_) throw ContractError("grad() on invalid variable");
  return tape_->nodes_[id_].grad;
}

// ---------------------------------------------------------------------------
// Tape

const Tensor& Tape::value_of(std::size_t id) const {
  const Node& n = nodes_[id];
  return n.op == Op::kParam ? n.param->value : n.value;
}

Var Tape::constant(Tensor value) {
  if (consumed_) throw ContractError("tape already consumed by backward()");
  Node n;
  n.op = Op::kConstant;
  n.needs_grad = value.requires_grad();
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(const Parameter& p) {
  if (consumed_) throw ContractError("tape already consumed by backward()");
  auto it = bound_.find(&p);
  if (it != bound_.end()) return Var(this, it->second);
  Node n;
  n.op = Op::kParam;
  n.param = &p;
  n.needs_grad = true;
  nodes_.push_back(std::move(n));
  bound_.emplace(&p, nodes_.size() - 1);
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Op op, Tensor value, std::vector<std::size_t> inputs, double aux,
                 std::size_t aux_index) {
  if (consumed_) throw ContractError("tape already consumed by backward()");
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.aux = aux;
  n.aux_index = aux_index;
  for (auto i : inputs) n.needs_grad = n.needs_grad || nodes_[i].needs_grad;
  n.inputs = std::move(inputs);
  nodes_.push_back(std::move(n));
  return Var(this, nodes_.size() - 1);
}

std::vector<double>& Tape::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(value_of(id).size(), 0.0);
  return n.grad;
}

std::span<const double> Tape::param_grad(const Parameter& p) const {
  auto it = bound_.find(&p);
  if (it == bound_.end()) return {};
  return nodes_[it->second].grad;
}

void Tape::backward(Var loss, Gradients* sink) {
  if (loss.tape() != this) throw ContractError("backward(): loss belongs to another tape");
  if (consumed_) throw ContractError("backward(): tape already consumed");
  const Tensor& lv = value_of(loss.id());
  if (lv.size() != 1) {
    throw ContractError("backward(): loss must be a scalar, got " + shape_string(lv.shape()));
  }
  consumed_ = true;
  grad_buffer(loss.id())[0] = 1.0;
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    if (!nodes_[id].needs_grad || nodes_[id].grad.empty()) continue;
    backprop_node(id);
  }
  if (sink) {
    for (const auto& n : nodes_) {
      if (n.op == Op::kParam && !n.grad.empty()) sink->accumulate(*n.param, n.grad);
    }
  }
}

void Tape::backprop_node(std::size_t id) {
  const Node& node = nodes_[id];
  const std::vector<double>& g = node.grad;
  const Tensor& y = value_of(id);
  auto wants = [&](std::size_t input) { return nodes_[input].needs_grad; };

  switch (node.op) {
    case Op::kConstant:
    case Op::kParam:
      return;

    case Op::kMatVec: {
      const std::size_t wi = node.inputs[0], xi = node.inputs[1];
      const Tensor& w = value_of(wi);
      const Tensor& x = value_of(xi);
      const std::size_t m = w.shape()[0], n = w.shape()[1];
      const double* wd = w.data().data();
      const double* xd = x.data().data();
      if (wants(wi)) {
        double* dw = grad_buffer(wi).data();
        for (std::size_t i = 0; i < m; ++i) {
          const double gi = g[i];
          if (gi == 0.0) continue;
          double* dwr = dw + i * n;
          for (std::size_t j = 0; j < n; ++j) dwr[j] += gi * xd[j];
        }
      }
      if (wants(xi)) {
        double* dx = grad_buffer(xi).data();
        for (std::size_t i = 0; i < m; ++i) {
          const double gi = g[i];
          if (gi == 0.0) continue;
          const double* wr = wd + i * n;
          for (std::size_t j = 0; j < n; ++j) dx[j] += wr[j] * gi;
        }
      }
      return;
    }

    case Op::kMatMul: {
      const std::size_t ai = node.inputs[0], bi = node.inputs[1];
      const Tensor& a = value_of(ai);
      const Tensor& b = value_of(bi);
      const std::size_t m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
      if (wants(ai)) {
        auto& da = grad_buffer(ai);
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t p = 0; p < k; ++p) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += g[i * n + j] * b[p * n + j];
            da[i * k + p] += acc;
          }
      }
      if (wants(bi)) {
        auto& db = grad_buffer(bi);
        for (std::size_t p = 0; p < k; ++p)
          for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < m; ++i) acc += a[i * k + p] * g[i * n + j];
            db[p * n + j] += acc;
          }
      }
      return;
    }

    case Op::kAdd: {
      for (std::size_t input : node.inputs) {
        if (!wants(input)) continue;
        auto& d = grad_buffer(input);
        for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i];
      }
      return;
    }

    case Op::kHadamard: {
      const std::size_t ai = node.inputs[0], bi = node.inputs[1];
      const Tensor& a = value_of(ai);
      const Tensor& b = value_of(bi);
      if (wants(ai)) {
        auto& d = grad_buffer(ai);
        for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * b[i];
      }
      if (wants(bi)) {
        auto& d = grad_buffer(bi);
        for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * a[i];
      }
      return;
    }

    case Op::kConcat: {
      std::size_t offset = 0;
      for (std::size_t input : node.inputs) {
        const std::size_t len = value_of(input).size();
        if (wants(input)) {
          auto& d = grad_buffer(input);
          for (std::size_t i = 0; i < len; ++i) d[i] += g[offset + i];
        }
        offset += len;
      }
      return;
    }

    case Op::kSigmoid: {
      const std::size_t xi = node.inputs[0];
      if (!wants(xi)) return;
      auto& d = grad_buffer(xi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * y[i] * (1.0 - y[i]);
      return;
    }

    case Op::kTanh: {
      const std::size_t xi = node.inputs[0];
      if (!wants(xi)) return;
      auto& d = grad_buffer(xi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * (1.0 - y[i] * y[i]);
      return;
    }

    case Op::kSoftplus: {
      const std::size_t xi = node.inputs[0];
      if (!wants(xi)) return;
      const Tensor& x = value_of(xi);
      auto& d = grad_buffer(xi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * stable_sigmoid(x[i]);
      return;
    }

    case Op::kSoftmax: {
      const std::size_t xi = node.inputs[0];
      if (!wants(xi)) return;
      double dot = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) dot += g[i] * y[i];
      auto& d = grad_buffer(xi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += y[i] * (g[i] - dot);
      return;
    }

    case Op::kMean:
    case Op::kSum: {
      const std::size_t xi = node.inputs[0];
      if (!wants(xi)) return;
      auto& d = grad_buffer(xi);
      const double gi = node.op == Op::kMean ? g[0] / static_cast<double>(d.size()) : g[0];
      for (double& v : d) v += gi;
      return;
    }

    case Op::kScale: {
      const std::size_t xi = node.inputs[0];
      if (!wants(xi)) return;
      auto& d = grad_buffer(xi);
      for (std::size_t i = 0; i < g.size(); ++i) d[i] += g[i] * node.aux;
      return;
    }

    case Op::kBce: {
      const std::size_t pi = node.inputs[0];
      if (!wants(pi)) return;
      const double label = node.aux;
      const double p = std::clamp(value_of(pi)[0], kProbabilityClamp, 1.0 - kProbabilityClamp);
      grad_buffer(pi)[0] += g[0] * (-label / p + (1.0 - label) / (1.0 - p));
      return;
    }

    case Op::kRow: {
      const std::size_t mi = node.inputs[0];
      if (!wants(mi)) return;
      const std::size_t cols = value_of(mi).shape()[1];
      double* d = grad_buffer(mi).data() + node.aux_index * cols;
      for (std::size_t j = 0; j < cols; ++j) d[j] += g[j];
      return;
    }

    case Op::kStack: {
      const std::size_t cols = y.shape()[1];
      for (std::size_t r = 0; r < node.inputs.size(); ++r) {
        const std::size_t input = node.inputs[r];
        if (!wants(input)) continue;
        auto& d = grad_buffer(input);
        for (std::size_t j = 0; j < cols; ++j) d[j] += g[r * cols + j];
      }
      return;
    }

    case Op::kTranspose: {
      const std::size_t xi = node.inputs[0];
      if (!wants(xi)) return;
      const std::size_t rows = y.shape()[0], cols = y.shape()[1];
      auto& d = grad_buffer(xi);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) d[c * rows + r] += g[r * cols + c];
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Primitive operations

Var matvec(Var w, Var x) {
  Tape* tape = same_tape(w, x, "matvec");
  const Tensor& wv = w.value();
  const Tensor& xv = x.value();
  if (wv.rank() != 2 || xv.rank() != 1 || wv.shape()[1] != xv.size()) {
    throw DimensionError("matvec: cannot multiply " + shape_string(wv.shape()) + " by " +
                         shape_string(xv.shape()));
  }
  const std::size_t m = wv.shape()[0], n = wv.shape()[1];
  std::vector<double> out(m, 0.0);
  const double* wd = wv.data().data();
  const double* xd = xv.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    const double* wr = wd + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += wr[j] * xd[j];
    out[i] = acc;
  }
  return tape->record(Tape::Op::kMatVec, Tensor({m}, std::move(out)), {w.id(), x.id()});
}

Var matmul(Var a, Var b) {
  Tape* tape = same_tape(a, b, "matmul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  if (av.rank() != 2 || bv.rank() != 2 || av.shape()[1] != bv.shape()[0]) {
    throw DimensionError("matmul: cannot multiply " + shape_string(av.shape()) + " by " +
                         shape_string(bv.shape()));
  }
  const std::size_t m = av.shape()[0], k = av.shape()[1], n = bv.shape()[1];
  std::vector<double> out(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = av[i * k + p];
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] += aip * bv[p * n + j];
    }
  return tape->record(Tape::Op::kMatMul, Tensor({m, n}, std::move(out)), {a.id(), b.id()});
}

Var add(Var a, Var b) {
  Tape* tape = same_tape(a, b, "add");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_same_shape(av, bv, "add");
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  return tape->record(Tape::Op::kAdd, Tensor(av.shape(), std::move(out)), {a.id(), b.id()});
}

Var hadamard(Var a, Var b) {
  Tape* tape = same_tape(a, b, "hadamard");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_same_shape(av, bv, "hadamard");
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return tape->record(Tape::Op::kHadamard, Tensor(av.shape(), std::move(out)), {a.id(), b.id()});
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw DimensionError("concat: no operands");
  Tape* tape = tape_of(parts[0], "concat");
  std::vector<double> out;
  std::vector<std::size_t> ids;
  ids.reserve(parts.size());
  for (const Var& p : parts) {
    if (p.tape() != tape) throw ContractError("concat: operands on different tapes");
    const Tensor& v = p.value();
    require_vector(v, "concat");
    out.insert(out.end(), v.data().begin(), v.data().end());
    ids.push_back(p.id());
  }
  const std::size_t n = out.size();
  return tape->record(Tape::Op::kConcat, Tensor({n}, std::move(out)), std::move(ids));
}

Var concat(std::initializer_list<Var> parts) {
  return concat(std::span<const Var>(parts.begin(), parts.size()));
}

Var sigmoid(Var x) {
  Tape* tape = tape_of(x, "sigmoid");
  const Tensor& xv = x.value();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = stable_sigmoid(xv[i]);
  return tape->record(Tape::Op::kSigmoid, Tensor(xv.shape(), std::move(out)), {x.id()});
}

Var tanh(Var x) {
  Tape* tape = tape_of(x, "tanh");
  const Tensor& xv = x.value();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(std::tanh(xv[i]), -kBelowOne, kBelowOne);
  }
  return tape->record(Tape::Op::kTanh, Tensor(xv.shape(), std::move(out)), {x.id()});
}

Var softplus(Var x) {
  Tape* tape = tape_of(x, "softplus");
  const Tensor& xv = x.value();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::log1p(std::exp(-std::abs(xv[i]))) + std::max(xv[i], 0.0);
  }
  return tape->record(Tape::Op::kSoftplus, Tensor(xv.shape(), std::move(out)), {x.id()});
}

Var softmax(Var x) {
  Tape* tape = tape_of(x, "softmax");
  const Tensor& xv = x.value();
  require_vector(xv, "softmax");
  const double top = *std::max_element(xv.data().begin(), xv.data().end());
  std::vector<double> out(xv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(xv[i] - top);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return tape->record(Tape::Op::kSoftmax, Tensor(xv.shape(), std::move(out)), {x.id()});
}

Var mean(Var x) {
  Tape* tape = tape_of(x, "mean");
  const Tensor& xv = x.value();
  double total = 0.0;
  for (double v : xv.data()) total += v;
  return tape->record(Tape::Op::kMean, Tensor::scalar(total / static_cast<double>(xv.size())),
                      {x.id()});
}

Var sum(Var x) {
  Tape* tape = tape_of(x, "sum");
  double total = 0.0;
  for (double v : x.value().data()) total += v;
  return tape->record(Tape::Op::kSum, Tensor::scalar(total), {x.id()});
}

Var scale(Var x, double factor) {
  Tape* tape = tape_of(x, "scale");
  const Tensor& xv = x.value();
  std::vector<double> out(xv.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = xv[i] * factor;
  return tape->record(Tape::Op::kScale, Tensor(xv.shape(), std::move(out)), {x.id()}, factor);
}

Var bce_loss(Var p, double label) {
  Tape* tape = tape_of(p, "bce_loss");
  const Tensor& pv = p.value();
  if (pv.size() != 1) {
    throw DimensionError("bce_loss: probability must be a scalar, got " + shape_string(pv.shape()));
  }
  if (label != 0.0 && label != 1.0) throw RangeError("bce_loss: label must be 0 or 1");
  const double pc = std::clamp(pv[0], kProbabilityClamp, 1.0 - kProbabilityClamp);
  const double loss = -(label * std::log(pc) + (1.0 - label) * std::log(1.0 - pc));
  return tape->record(Tape::Op::kBce, Tensor::scalar(loss), {p.id()}, label);
}

Var row(Var m, std::size_t index) {
  Tape* tape = tape_of(m, "row");
  const Tensor& mv = m.value();
  require_matrix(mv, "row");
  const std::size_t rows = mv.shape()[0], cols = mv.shape()[1];
  if (index >= rows) {
    throw IndexError("row: index " + std::to_string(index) + " out of range for " +
                     shape_string(mv.shape()));
  }
  std::vector<double> out(mv.data().begin() + index * cols, mv.data().begin() + (index + 1) * cols);
  return tape->record(Tape::Op::kRow, Tensor({cols}, std::move(out)), {m.id()}, 0.0, index);
}

Var stack(std::span<const Var> rows) {
  if (rows.empty()) throw DimensionError("stack: no operands");
  Tape* tape = tape_of(rows[0], "stack");
  const std::size_t cols = rows[0].value().size();
  std::vector<double> out;
  out.reserve(rows.size() * cols);
  std::vector<std::size_t> ids;
  ids.reserve(rows.size());
  for (const Var& r : rows) {
    if (r.tape() != tape) throw ContractError("stack: operands on different tapes");
    const Tensor& v = r.value();
    require_vector(v, "stack");
    if (v.size() != cols) {
      throw DimensionError("stack: row length " + std::to_string(v.size()) + " vs " +
                           std::to_string(cols));
    }
    out.insert(out.end(), v.data().begin(), v.data().end());
    ids.push_back(r.id());
  }
  return tape->record(Tape::Op::kStack, Tensor({rows.size(), cols}, std::move(out)),
                      std::move(ids));
}

Var transpose(Var m) {
  Tape* tape = tape_of(m, "transpose");
  const Tensor& mv = m.value();
  require_matrix(mv, "transpose");
  const std::size_t rows = mv.shape()[0], cols = mv.shape()[1];
  std::vector<double> out(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c * rows + r] = mv[r * cols + c];
  return tape->record(Tape::Op::kTranspose, Tensor({cols, rows}, std::move(out)), {m.id()});
}

}  // namespace carryover::numeric
