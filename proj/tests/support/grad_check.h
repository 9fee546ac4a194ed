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

#ifndef SREL_TESTS_SUPPORT_GRAD_CHECK_H_
#define SREL_TESTS_SUPPORT_GRAD_CHECK_H_

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "srel/core/ops.h"
#include "srel/core/rng.h"
#include "srel/core/tape.h"

namespace srel::testing {

using core::Tape;
using core::Tensor;
using core::Var;

// Builds a scalar loss from leaf variables created from the given inputs.
using GraphFn = std::function<Var(Tape&, const std::vector<Var>&)>;

inline Tensor random_tensor(core::Shape shape, core::Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = scale * (2.0 * rng.uniform() - 1.0);
  return t;
}

// Reduces any output to a scalar with fixed random weights so that every
// output element contributes to the checked gradient.
inline Var project(const Var& out, uint64_t seed = 99) {
  core::Rng rng(seed);
  Tensor w = random_tensor(out.shape(), rng);
  return core::ops::sum(core::ops::mul(out, out.tape().constant(std::move(w))));
}

inline double evaluate(const GraphFn& fn, const std::vector<Tensor>& inputs) {
  Tape tape;
  std::vector<Var> vars;
  for (const Tensor& t : inputs) vars.push_back(tape.constant(t));
  return fn(tape, vars).value().item();
}

// Largest |analytic - numeric| / max(|analytic| + |numeric|, floor) over every
// input element, with central differences of step h.
inline double max_relative_error(const GraphFn& fn, std::vector<Tensor> inputs, double h = 1e-5,
                                 double floor = 1e-5) {
  std::vector<Tensor> analytic;
  {
    Tape tape;
    std::vector<Var> vars;
    for (const Tensor& t : inputs) vars.push_back(tape.leaf(t));
    Var loss = fn(tape, vars);
    for (const Var& v : vars) analytic.push_back(tape.gradient(loss, v));
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    for (std::size_t i = 0; i < inputs[k].size(); ++i) {
      const double saved = inputs[k][i];
      inputs[k][i] = saved + h;
      const double plus = evaluate(fn, inputs);
      inputs[k][i] = saved - h;
      const double minus = evaluate(fn, inputs);
      inputs[k][i] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double a = analytic[k][i];
      const double err = std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), floor);
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace srel::testing

#endif  // SREL_TESTS_SUPPORT_GRAD_CHECK_H_
