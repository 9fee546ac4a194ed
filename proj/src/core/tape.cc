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

#include "srel/core/tape.h"

#include "srel/common/errors.h"

namespace srel::core {

Parameter::Parameter(std::string name_in, Tensor value_in)
    : name(std::move(name_in)), value(std::move(value_in)), grad(Tensor::zeros_like(value)) {}

const Tensor& Var::value() const { return tape_->value(index_); }

bool Var::requires_grad() const { return tape_->requires_grad(index_); }

GradBuffer::GradBuffer(Tape* tape, std::vector<char> wanted, bool into_parameters)
    : tape_(tape),
      wanted_(std::move(wanted)),
      into_parameters_(into_parameters),
      grads_(wanted_.size()),
      present_(wanted_.size(), 0) {}

bool GradBuffer::wants(const Var& v) const {
  return v.index() < static_cast<int>(wanted_.size()) && wanted_[v.index()];
}

Tensor& GradBuffer::at(const Var& v) {
  const int i = v.index();
  auto& node = tape_->nodes_[i];
  if (into_parameters_ && node.parameter != nullptr) {
    present_[i] = 1;
    return node.parameter->grad;
  }
  if (!present_[i]) {
    grads_[i] = Tensor::zeros_like(tape_->value(i));
    present_[i] = 1;
  }
  return grads_[i];
}

Var Tape::constant(Tensor value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::leaf(Tensor value) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = recording();
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::parameter(Parameter& p) {
  Node node;
  node.external = &p.value;
  node.parameter = &p;
  node.requires_grad = recording();
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

Var Tape::record(Tensor value, std::initializer_list<Var> inputs, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  if (recording()) {
    for (const Var& in : inputs) {
      if (in.tape_ != this) throw ContractError("tape: input recorded on a different tape");
      node.inputs.push_back(in.index());
      node.requires_grad = node.requires_grad || nodes_[in.index()].requires_grad;
    }
    if (node.requires_grad) node.backward = std::move(backward);
  }
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<int>(nodes_.size() - 1));
}

const Tensor& Tape::value(int index) const {
  const Node& node = nodes_[index];
  return node.external != nullptr ? *node.external : node.value;
}

void Tape::sweep(int loss_index, GradBuffer& buffer) {
  buffer.at(Var(this, loss_index)).fill(1.0);
  for (int i = loss_index; i >= 0; --i) {
    if (!buffer.present_[i] || !buffer.wanted_[i]) continue;
    if (i == buffer.sink_) continue;
    Node& node = nodes_[i];
    if (node.backward) node.backward(buffer.grads_[i], buffer);
    if (node.parameter == nullptr) buffer.grads_[i] = Tensor();
  }
}

void Tape::backward(const Var& loss) {
  if (loss.tape_ != this) throw ContractError("backward: loss recorded on a different tape");
  if (loss.value().size() != 1) {
    throw ContractError("backward: loss must be a scalar, got shape " + shape_string(loss.shape()));
  }
  const int n = loss.index() + 1;
  std::vector<char> wanted(n);
  for (int i = 0; i < n; ++i) wanted[i] = nodes_[i].requires_grad;
  if (wanted[loss.index()]) {
    GradBuffer buffer(this, std::move(wanted), /*into_parameters=*/true);
    sweep(loss.index(), buffer);
  }
  clear();
}

Tensor Tape::gradient(const Var& loss, const Var& wrt) {
  if (loss.tape_ != this || wrt.tape_ != this) {
    throw ContractError("gradient: variables recorded on a different tape");
  }
  if (loss.value().size() != 1) {
    throw ContractError("gradient: loss must be a scalar, got shape " + shape_string(loss.shape()));
  }
  const int n = loss.index() + 1;
  // Only nodes downstream of `wrt` can carry its gradient.
  std::vector<char> wanted(n, 0);
  if (wrt.index() < n) {
    wanted[wrt.index()] = nodes_[wrt.index()].requires_grad;
    for (int i = wrt.index() + 1; i < n; ++i) {
      for (int in : nodes_[i].inputs) {
        if (wanted[in]) {
          wanted[i] = 1;
          break;
        }
      }
    }
  }
  if (!wanted[loss.index()]) return Tensor::zeros_like(wrt.value());
  GradBuffer buffer(this, std::move(wanted), /*into_parameters=*/false);
  buffer.sink_ = wrt.index();
  sweep(loss.index(), buffer);
  return buffer.present_[wrt.index()] ? buffer.grads_[wrt.index()] : Tensor::zeros_like(wrt.value());
}

}  // namespace srel::core
