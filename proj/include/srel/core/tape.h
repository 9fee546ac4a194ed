// Copyright 2026 The srel Authors
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

#ifndef SREL_CORE_TAPE_H_
#define SREL_CORE_TAPE_H_

#include <deque>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "srel/core/tensor.h"

namespace srel::core {

// A learnable array plus its gradient accumulator. Gradients are summed across
// backward passes until zero_grad() is called.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Tensor value);

  void zero_grad() { grad.fill(0.0); }

  std::string name;
  Tensor value;
  Tensor grad;
};

class Tape;

// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape lives
// and has not been cleared.
class Var {
 public:
  Var() = default;

  bool valid() const { return tape_ != nullptr; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }
  bool requires_grad() const;
  Tape& tape() const { return *tape_; }
  int index() const { return index_; }

 private:
  friend class Tape;
  Var(Tape* tape, int index) : tape_(tape), index_(index) {}

  Tape* tape_ = nullptr;
  int index_ = -1;
};

// Gradient storage handed to backward functions during one reverse sweep.
class GradBuffer {
 public:
  // False when the node's gradient is not needed for the current sweep.
  bool wants(const Var& v) const;
  // Zero-initialized on first access.
  Tensor& at(const Var& v);

 private:
  friend class Tape;
  GradBuffer(Tape* tape, std::vector<char> wanted, bool into_parameters);

  Tape* tape_;
  std::vector<char> wanted_;
  bool into_parameters_;
  std::vector<Tensor> grads_;
  std::vector<char> present_;
  int sink_ = -1;  // node whose gradient is the sweep's result
};

using BackwardFn = std::function<void(const Tensor& grad_out, GradBuffer& grads)>;

// Ordered record of executed primitives. In kInference mode no backward
// closures are kept and nothing requires a gradient.
class Tape {
 public:
  enum class Mode { kRecord, kInference };

  explicit Tape(Mode mode = Mode::kRecord) : mode_(mode) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return mode_ == Mode::kRecord; }
  std::size_t size() const { return nodes_.size(); }

  Var constant(Tensor value);
  // A trainable-looking input whose gradient can be requested via gradient().
  Var leaf(Tensor value);
  // Binds a Parameter without copying it; backward() accumulates into p.grad.
  Var parameter(Parameter& p);

  // Appends the result of a primitive. `backward` is dropped unless some input
  // requires a gradient.
  Var record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward);

  const Tensor& value(int index) const;
  bool requires_grad(int index) const { return nodes_[index].requires_grad; }

  // Reverse sweep from a scalar loss. Every parameter reached receives its
  // gradient (accumulated). The tape is cleared afterwards.
  void backward(const Var& loss);

  // d loss / d wrt, without touching parameter gradients; the tape is kept.
  Tensor gradient(const Var& loss, const Var& wrt);

  void clear() { nodes_.clear(); }

 private:
  friend class GradBuffer;

  struct Node {
    Tensor value;
    const Tensor* external = nullptr;
    Parameter* parameter = nullptr;
    bool requires_grad = false;
    BackwardFn backward;
    std::vector<int> inputs;
  };

  void sweep(int loss_index, GradBuffer& buffer);

  Mode mode_;
  std::deque<Node> nodes_;
};

}  // namespace srel::core

#endif  // SREL_CORE_TAPE_H_
