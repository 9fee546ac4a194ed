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

#ifndef SREL_CORE_FUNCTIONAL_H_
#define SREL_CORE_FUNCTIONAL_H_

#include <span>

#include "srel/core/tensor.h"

// Value-level numerics shared by the autograd primitives and by code that only
// needs numbers (metrics, serving, tests).
namespace srel::core {

inline constexpr double kLogFloor = 1e-12;

// Row-wise heated softmax over the last dimension; temperature must be > 0.
Tensor softmax(const Tensor& z, double temperature = 1.0);
void softmax_row(std::span<const double> z, double temperature, std::span<double> out);

// D(p || q) = sum_i p_i (log(p_i + f) - log(q_i + f)); terms with p_i = 0 vanish.
// Clamped at zero against rounding.
double kl_divergence(std::span<const double> p, std::span<const double> q, double floor = kLogFloor);

double gelu(double x);

}  // namespace srel::core

#endif  // SREL_CORE_FUNCTIONAL_H_
