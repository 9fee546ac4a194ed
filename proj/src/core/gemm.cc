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

#include "srel/core/gemm.h"

#include <algorithm>
#include <cstring>
#include <vector>

namespace srel::core {
namespace {

typedef double v8d __attribute__((vector_size(64)));

constexpr std::size_t kRows = 6;
constexpr std::size_t kCols = 16;

inline v8d load(const double* p) {
  v8d v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

inline void store(double* p, v8d v) { std::memcpy(p, &v, sizeof(v)); }

// One 6x16 tile: acc[r][j] = sum_k a[r][k] * b[k][j], accumulated in k order.
inline void tile(const double* a, std::size_t k, const double* b, std::size_t ldb, double* out) {
  v8d acc[kRows][2] = {};
  for (std::size_t p = 0; p < k; ++p) {
    const v8d b0 = load(b + p * ldb);
    const v8d b1 = load(b + p * ldb + 8);
    for (std::size_t r = 0; r < kRows; ++r) {
      const double s = a[r * k + p];
      acc[r][0] += s * b0;
      acc[r][1] += s * b1;
    }
  }
  for (std::size_t r = 0; r < kRows; ++r) {
    store(out + r * kCols, acc[r][0]);
    store(out + r * kCols + 8, acc[r][1]);
  }
}

}  // namespace

void gemm(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n,
          bool accumulate) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (!accumulate) std::fill(c, c + m * n, 0.0);
    return;
  }
  // Pad B to a multiple of the tile width so every column takes the same path.
  const std::size_t padded_n = (n + kCols - 1) / kCols * kCols;
  std::vector<double> packed_b(k * padded_n, 0.0);
  for (std::size_t p = 0; p < k; ++p) std::memcpy(&packed_b[p * padded_n], b + p * n, n * sizeof(double));

  std::vector<double> scratch_a(kRows * k, 0.0);
  double out[kRows * kCols];
  for (std::size_t i0 = 0; i0 < m; i0 += kRows) {
    const std::size_t rows = std::min(kRows, m - i0);
    const double* a_block = a + i0 * k;
    if (rows < kRows) {
      std::fill(scratch_a.begin(), scratch_a.end(), 0.0);
      std::memcpy(scratch_a.data(), a_block, rows * k * sizeof(double));
      a_block = scratch_a.data();
    }
    for (std::size_t j0 = 0; j0 < padded_n; j0 += kCols) {
      tile(a_block, k, packed_b.data() + j0, padded_n, out);
      const std::size_t width = std::min(kCols, n - j0);
      for (std::size_t r = 0; r < rows; ++r) {
        double* dst = c + (i0 + r) * n + j0;
        const double* src = out + r * kCols;
        if (accumulate) {
          for (std::size_t j = 0; j < width; ++j) dst[j] += src[j];
        } else {
          std::memcpy(dst, src, width * sizeof(double));
        }
      }
    }
  }
}

void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
  std::vector<double> at(m * k);
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t i = 0; i < m; ++i) at[i * k + p] = a[p * m + i];
  gemm(at.data(), b, c, m, k, n, accumulate);
}

void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k,
             std::size_t n, bool accumulate) {
  std::vector<double> bt(k * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < k; ++p) bt[p * n + j] = b[j * k + p];
  gemm(a, bt.data(), c, m, k, n, accumulate);
}

}  // namespace srel::core
