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

#ifndef SREL_CORE_GEMM_H_
#define SREL_CORE_GEMM_H_

#include <cstddef>

namespace srel::core {

// Row-major C[m x n] = A[m x k] * B[k x n] (or C += when accumulate is set).
//
// Every output element is a single in-order sum over k, computed by the same
// instruction sequence regardless of m, n or the element's position. A row's
// result therefore depends only on that row of A and on B, bit for bit. Batch
// trimming and score caching rely on this.
void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n,
          bool accumulate = false);

// C[m x n] = A^T * B with A stored as [k x m].
void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate = false);

// C[m x n] = A * B^T with B stored as [n x k].
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate = false);

}  // namespace srel::core

#endif  // SREL_CORE_GEMM_H_
