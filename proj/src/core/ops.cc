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

#include "srel/core/ops.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "srel/common/errors.h"
#include "srel/core/flops.h"
#include "srel/core/functional.h"
#include "srel/core/gemm.h"

namespace srel::core::ops {
namespace {

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw DimensionError(std::string(op) + ": expected a matrix, got " + shape_string(t.shape()));
  }
}

void require_same_tape(const Var& a, const Var& b, const char* op) {
  if (&a.tape() != &b.tape()) throw ContractError(std::string(op) + ": inputs on different tapes");
}

}  // namespace

Var matmul(const Var& a, const Var& b) {
  require_same_tape(a, b, "matmul");
  const Tensor& av = a.value();
  const Tensor& bv = b.value();
  require_rank2(av, "matmul");
  require_rank2(bv, "matmul");
  const std::size_t n = av.dim(0), p = av.dim(1), q = bv.dim(1);
  if (bv.dim(0) != p) {
    throw DimensionError("matmul: inner dimensions differ " + shape_string(av.shape()) + " @ " +
                         shape_string(bv.shape()));
  }
  Tensor out(Shape{n, q});
  gemm(av.data(), bv.data(), out.data(), n, p, q);
  count_flops(2 * n * p * q);
  return a.tape().record(std::move(out), {a, b}, [a, b, n, p, q](const Tensor& g, GradBuffer& grads) {
    if (grads.wants(a)) gemm_nt(g.data(), b.value().data(), grads.at(a).data(), n, q, p, true);
    if (grads.wants(b)) gemm_tn(a.value().data(), g.data(), grads.at(b).data(), p, n, q, true);
  });
}

Var linear(const Var& x, const Var& w, const Var& bias) {
  require_same_tape(x, w, "linear");
  require_same_tape(x, bias, "linear");
  const Tensor& xv = x.value();
  const Tensor& wv = w.value();
  const Tensor& bv = bias.value();
  require_rank2(wv, "linear");
  const std::size_t n = xv.rows(), in = xv.cols(), out_dim = wv.dim(1);
  if (wv.dim(0) != in || bv.size() != out_dim) {
    throw DimensionError("linear: " + shape_string(xv.shape()) + " @ " + shape_string(wv.shape()) +
                         " + " + shape_string(bv.shape()));
  }
  Tensor out(Shape{n, out_dim});
  gemm(xv.data(), wv.data(), out.data(), n, in, out_dim);
  for (std::size_t r = 0; r < n; ++r) {
    double* row = out.data() + r * out_dim;
    for (std::size_t c = 0; c < out_dim; ++c) row[c] += bv[c];
  }
  count_flops(2 * n * in * out_dim + n * out_dim);
  return x.tape().record(std::move(out), {x, w, bias},
                         [x, w, bias, n, in, out_dim](const Tensor& g, GradBuffer& grads) {
                           if (grads.wants(x)) {
                             gemm_nt(g.data(), w.value().data(), grads.at(x).data(), n, out_dim, in, true);
                           }
                           if (grads.wants(w)) {
                             gemm_tn(x.value().data(), g.data(), grads.at(w).data(), in, n, out_dim, true);
                           }
                           if (grads.wants(bias)) {
                             Tensor& gb = grads.at(bias);
                             for (std::size_t r = 0; r < n; ++r)
                               for (std::size_t c = 0; c < out_dim; ++c) gb[c] += g[r * out_dim + c];
                           }
                         });
}

Var add(const Var& a, const Var& b) {
  require_same_tape(a, b, "add");
  require_same_shape(a.value(), b.value(), "add");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return a.tape().record(std::move(out), {a, b}, [a, b](const Tensor& g, GradBuffer& grads) {
    for (const Var& v : {a, b}) {
      if (!grads.wants(v)) continue;
      Tensor& gv = grads.at(v);
      for (std::size_t i = 0; i < g.size(); ++i) gv[i] += g[i];
    }
  });
}

Var sub(const Var& a, const Var& b) {
  require_same_tape(a, b, "sub");
  require_same_shape(a.value(), b.value(), "sub");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bv[i];
  return a.tape().record(std::move(out), {a, b}, [a, b](const Tensor& g, GradBuffer& grads) {
    if (grads.wants(a)) {
      Tensor& ga = grads.at(a);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    }
    if (grads.wants(b)) {
      Tensor& gb = grads.at(b);
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_tape(a, b, "mul");
  require_same_shape(a.value(), b.value(), "mul");
  Tensor out = a.value();
  const Tensor& bv = b.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return a.tape().record(std::move(out), {a, b}, [a, b](const Tensor& g, GradBuffer& grads) {
    if (grads.wants(a)) {
      Tensor& ga = grads.at(a);
      const Tensor& bv = b.value();
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    }
    if (grads.wants(b)) {
      Tensor& gb = grads.at(b);
      const Tensor& av = a.value();
      for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
    }
  });
}

Var scale(const Var& a, double factor) {
  Tensor out = a.value();
  for (double& v : out.values()) v *= factor;
  return a.tape().record(std::move(out), {a}, [a, factor](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(a)) return;
    Tensor& ga = grads.at(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor;
  });
}

Var sum(const Var& a) {
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  return a.tape().record(Tensor::scalar(total), {a}, [a](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(a)) return;
    Tensor& ga = grads.at(a);
    for (double& v : ga.values()) v += g[0];
  });
}

Var mean(const Var& a) {
  const double n = static_cast<double>(a.value().size());
  if (n == 0) throw DimensionError("mean: empty tensor");
  double total = 0.0;
  for (double v : a.value().values()) total += v;
  return a.tape().record(Tensor::scalar(total / n), {a}, [a, n](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(a)) return;
    Tensor& ga = grads.at(a);
    const double share = g[0] / n;
    for (double& v : ga.values()) v += share;
  });
}

Var layer_norm(const Var& x, const Var& gamma, const Var& beta, double eps) {
  const Tensor& xv = x.value();
  const std::size_t rows = xv.rows(), d = xv.cols();
  if (gamma.value().size() != d || beta.value().size() != d) {
    throw DimensionError("layer_norm: scale/shift size does not match width " + std::to_string(d));
  }
  auto normalized = std::make_shared<Tensor>(xv.shape());
  auto inv_std = std::make_shared<std::vector<double>>(rows);
  Tensor out(xv.shape());
  const Tensor& gv = gamma.value();
  const Tensor& bv = beta.value();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = xv.data() + r * d;
    double mu = 0.0;
    for (std::size_t c = 0; c < d; ++c) mu += in[c];
    mu /= static_cast<double>(d);
    double var = 0.0;
    for (std::size_t c = 0; c < d; ++c) var += (in[c] - mu) * (in[c] - mu);
    var /= static_cast<double>(d);
    const double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    double* xh = normalized->data() + r * d;
    double* o = out.data() + r * d;
    for (std::size_t c = 0; c < d; ++c) {
      xh[c] = (in[c] - mu) * is;
      o[c] = gv[c] * xh[c] + bv[c];
    }
  }
  count_flops(8 * rows * d);
  return x.tape().record(std::move(out), {x, gamma, beta},
                         [x, gamma, beta, normalized, inv_std, rows, d](const Tensor& g, GradBuffer& grads) {
                           const Tensor& gv = gamma.value();
                           if (grads.wants(gamma) || grads.wants(beta)) {
                             const bool want_g = grads.wants(gamma), want_b = grads.wants(beta);
                             Tensor* gg = want_g ? &grads.at(gamma) : nullptr;
                             Tensor* gb = want_b ? &grads.at(beta) : nullptr;
                             for (std::size_t r = 0; r < rows; ++r) {
                               for (std::size_t c = 0; c < d; ++c) {
                                 const double go = g[r * d + c];
                                 if (gg) (*gg)[c] += go * (*normalized)[r * d + c];
                                 if (gb) (*gb)[c] += go;
                               }
                             }
                           }
                           if (!grads.wants(x)) return;
                           Tensor& gx = grads.at(x);
                           std::vector<double> dxh(d);
                           for (std::size_t r = 0; r < rows; ++r) {
                             const double* xh = normalized->data() + r * d;
                             double mean_d = 0.0, mean_dx = 0.0;
                             for (std::size_t c = 0; c < d; ++c) {
                               dxh[c] = g[r * d + c] * gv[c];
                               mean_d += dxh[c];
                               mean_dx += dxh[c] * xh[c];
                             }
                             mean_d /= static_cast<double>(d);
                             mean_dx /= static_cast<double>(d);
                             const double is = (*inv_std)[r];
                             for (std::size_t c = 0; c < d; ++c) {
                               gx[r * d + c] += is * (dxh[c] - mean_d - xh[c] * mean_dx);
                             }
                           }
                         });
}

Var gelu(const Var& x) {
  Tensor out = x.value();
  for (double& v : out.values()) v = core::gelu(v);
  count_flops(8 * out.size());
  return x.tape().record(std::move(out), {x}, [x](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(x)) return;
    Tensor& gx = grads.at(x);
    const Tensor& xv = x.value();
    constexpr double kInvSqrt2Pi = 0.3989422804014327;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = xv[i];
      const double cdf = 0.5 * (1.0 + std::erf(t * std::numbers::sqrt2 / 2.0));
      const double pdf = kInvSqrt2Pi * std::exp(-0.5 * t * t);
      gx[i] += g[i] * (cdf + t * pdf);
    }
  });
}

Var dropout(const Var& x, double rate, Rng& rng, bool training) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw ParameterError("dropout: rate must lie in [0, 1), got " + std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  const double keep_scale = 1.0 / (1.0 - rate);
  auto mask = std::make_shared<std::vector<double>>(x.value().size());
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.size(); ++i) {
    (*mask)[i] = rng.uniform() < rate ? 0.0 : keep_scale;
    out[i] *= (*mask)[i];
  }
  return x.tape().record(std::move(out), {x}, [x, mask](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(x)) return;
    Tensor& gx = grads.at(x);
    for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i] * (*mask)[i];
  });
}

Var embedding_gather(const Var& table, std::span<const int32_t> ids) {
  const Tensor& tv = table.value();
  require_rank2(tv, "embedding_gather");
  const std::size_t vocab = tv.dim(0), d = tv.dim(1);
  Tensor out(Shape{ids.size(), d});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= vocab) {
      throw BoundsError("embedding_gather: id " + std::to_string(ids[i]) + " outside table of " +
                        std::to_string(vocab) + " rows");
    }
    std::copy_n(tv.data() + ids[i] * d, d, out.data() + i * d);
  }
  auto saved = std::make_shared<std::vector<int32_t>>(ids.begin(), ids.end());
  return table.tape().record(std::move(out), {table}, [table, saved, d](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(table)) return;
    Tensor& gt = grads.at(table);
    for (std::size_t i = 0; i < saved->size(); ++i) {
      double* dst = gt.data() + static_cast<std::size_t>((*saved)[i]) * d;
      const double* src = g.data() + i * d;
      for (std::size_t c = 0; c < d; ++c) dst[c] += src[c];
    }
  });
}

Var select_rows(const Var& x, std::span<const std::size_t> rows) {
  const Tensor& xv = x.value();
  const std::size_t d = xv.cols();
  Tensor out(Shape{rows.size(), d});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= xv.rows()) throw BoundsError("select_rows: row index out of range");
    std::copy_n(xv.data() + rows[i] * d, d, out.data() + i * d);
  }
  auto saved = std::make_shared<std::vector<std::size_t>>(rows.begin(), rows.end());
  return x.tape().record(std::move(out), {x}, [x, saved, d](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(x)) return;
    Tensor& gx = grads.at(x);
    for (std::size_t i = 0; i < saved->size(); ++i)
      for (std::size_t c = 0; c < d; ++c) gx[(*saved)[i] * d + c] += g[i * d + c];
  });
}

Var pick(const Var& x, std::span<const int> cols) {
  const Tensor& xv = x.value();
  require_rank2(xv, "pick");
  const std::size_t n = xv.dim(0), c = xv.dim(1);
  if (cols.size() != n) throw DimensionError("pick: index count does not match rows");
  Tensor out(Shape{n});
  for (std::size_t i = 0; i < n; ++i) {
    if (cols[i] < 0 || static_cast<std::size_t>(cols[i]) >= c) throw BoundsError("pick: column out of range");
    out[i] = xv[i * c + cols[i]];
  }
  auto saved = std::make_shared<std::vector<int>>(cols.begin(), cols.end());
  return x.tape().record(std::move(out), {x}, [x, saved, c](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(x)) return;
    Tensor& gx = grads.at(x);
    for (std::size_t i = 0; i < saved->size(); ++i) gx[i * c + (*saved)[i]] += g[i];
  });
}

Var softmax(const Var& z, double temperature) {
  auto y = std::make_shared<Tensor>(core::softmax(z.value(), temperature));
  const std::size_t cols = y->cols();
  count_flops(4 * y->size());
  Tensor out = *y;
  return z.tape().record(std::move(out), {z}, [z, y, temperature, cols](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(z)) return;
    Tensor& gz = grads.at(z);
    for (std::size_t r = 0; r < y->rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < cols; ++c) dot += g[r * cols + c] * (*y)[r * cols + c];
      for (std::size_t c = 0; c < cols; ++c) {
        gz[r * cols + c] += temperature * (*y)[r * cols + c] * (g[r * cols + c] - dot);
      }
    }
  });
}

Var log_softmax(const Var& z, double temperature) {
  if (!(temperature > 0.0)) {
    throw ParameterError("log_softmax: temperature must be positive, got " + std::to_string(temperature));
  }
  const Tensor& zv = z.value();
  const std::size_t cols = zv.cols();
  Tensor out(zv.shape());
  auto probs = std::make_shared<Tensor>(zv.shape());
  for (std::size_t r = 0; r < zv.rows(); ++r) {
    double top = -INFINITY;
    for (std::size_t c = 0; c < cols; ++c) top = std::max(top, temperature * zv[r * cols + c]);
    double total = 0.0;
    for (std::size_t c = 0; c < cols; ++c) total += std::exp(temperature * zv[r * cols + c] - top);
    const double lse = top + std::log(total);
    for (std::size_t c = 0; c < cols; ++c) {
      out[r * cols + c] = temperature * zv[r * cols + c] - lse;
      (*probs)[r * cols + c] = std::exp(out[r * cols + c]);
    }
  }
  return z.tape().record(std::move(out), {z}, [z, probs, temperature, cols](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(z)) return;
    Tensor& gz = grads.at(z);
    for (std::size_t r = 0; r < probs->rows(); ++r) {
      double total = 0.0;
      for (std::size_t c = 0; c < cols; ++c) total += g[r * cols + c];
      for (std::size_t c = 0; c < cols; ++c) {
        gz[r * cols + c] += temperature * (g[r * cols + c] - (*probs)[r * cols + c] * total);
      }
    }
  });
}

Var cross_entropy(const Var& logits, std::span<const int> labels) {
  const Tensor& zv = logits.value();
  require_rank2(zv, "cross_entropy");
  const std::size_t n = zv.dim(0), c = zv.dim(1);
  if (labels.size() != n) throw DimensionError("cross_entropy: label count does not match rows");
  auto probs = std::make_shared<Tensor>(core::softmax(zv, 1.0));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= c) {
      throw BoundsError("cross_entropy: label out of range");
    }
    const double* row = zv.data() + i * c;
    double top = -INFINITY;
    for (std::size_t j = 0; j < c; ++j) top = std::max(top, row[j]);
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += std::exp(row[j] - top);
    total += top + std::log(s) - row[labels[i]];
  }
  auto saved = std::make_shared<std::vector<int>>(labels.begin(), labels.end());
  return logits.tape().record(Tensor::scalar(total / static_cast<double>(n)), {logits},
                              [logits, probs, saved, n, c](const Tensor& g, GradBuffer& grads) {
                                if (!grads.wants(logits)) return;
                                Tensor& gz = grads.at(logits);
                                const double share = g[0] / static_cast<double>(n);
                                for (std::size_t i = 0; i < n; ++i) {
                                  for (std::size_t j = 0; j < c; ++j) {
                                    const double target = static_cast<int>(j) == (*saved)[i] ? 1.0 : 0.0;
                                    gz[i * c + j] += share * ((*probs)[i * c + j] - target);
                                  }
                                }
                              });
}

Var log_floor(const Var& x, double floor) {
  Tensor out = x.value();
  for (double& v : out.values()) v = std::log(std::max(v, floor));
  return x.tape().record(std::move(out), {x}, [x, floor](const Tensor& g, GradBuffer& grads) {
    if (!grads.wants(x)) return;
    Tensor& gx = grads.at(x);
    const Tensor& xv = x.value();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (xv[i] > floor) gx[i] += g[i] / xv[i];
    }
  });
}

Var symmetric_kl(const Var& p, const Var& q, double floor) {
  require_same_tape(p, q, "symmetric_kl");
  require_same_shape(p.value(), q.value(), "symmetric_kl");
  const Tensor& pv = p.value();
  const Tensor& qv = q.value();
  const std::size_t n = pv.rows();
  if (n == 0) throw DimensionError("symmetric_kl: empty input");
  double total = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    total += (pv[i] - qv[i]) * (std::log(pv[i] + floor) - std::log(qv[i] + floor));
  }
  const double norm = 1.0 / (2.0 * static_cast<double>(n));
  return p.tape().record(Tensor::scalar(total * norm), {p, q}, [p, q, floor, norm](const Tensor& g, GradBuffer& grads) {
    const Tensor& pv = p.value();
    const Tensor& qv = q.value();
    const double s = g[0] * norm;
    if (grads.wants(p)) {
      Tensor& gp = grads.at(p);
      for (std::size_t i = 0; i < pv.size(); ++i) {
        const double log_ratio = std::log(pv[i] + floor) - std::log(qv[i] + floor);
        gp[i] += s * (log_ratio + (pv[i] - qv[i]) / (pv[i] + floor));
      }
    }
    if (grads.wants(q)) {
      Tensor& gq = grads.at(q);
      for (std::size_t i = 0; i < pv.size(); ++i) {
        const double log_ratio = std::log(pv[i] + floor) - std::log(qv[i] + floor);
        gq[i] += s * (-log_ratio - (pv[i] - qv[i]) / (qv[i] + floor));
      }
    }
  });
}

Var attention(const Var& q, const Var& k, const Var& v, std::span<const uint8_t> mask, std::size_t batch,
              std::size_t seq, std::size_t heads) {
  require_same_tape(q, k, "attention");
  require_same_tape(q, v, "attention");
  const Tensor& qv = q.value();
  const Tensor& kv = k.value();
  const Tensor& vv = v.value();
  require_same_shape(qv, kv, "attention");
  require_same_shape(qv, vv, "attention");
  const std::size_t d = qv.cols();
  if (qv.rows() != batch * seq || mask.size() != batch * seq) {
    throw DimensionError("attention: rows " + std::to_string(qv.rows()) + " / mask " +
                         std::to_string(mask.size()) + " do not match batch*seq " +
                         std::to_string(batch * seq));
  }
  if (heads == 0 || d % heads != 0) throw DimensionError("attention: width not divisible by heads");
  const std::size_t a = d / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(a));

  auto probs = std::make_shared<std::vector<double>>(batch * heads * seq * seq);
  Tensor out(qv.shape());
  std::vector<double> qh(seq * a), kh(seq * a), vh(seq * a), oh(seq * a), scores(seq * seq);
  auto gather = [&](const Tensor& src, std::size_t b, std::size_t h, std::vector<double>& dst) {
    for (std::size_t i = 0; i < seq; ++i) std::copy_n(src.data() + (b * seq + i) * d + h * a, a, dst.data() + i * a);
  };
  for (std::size_t b = 0; b < batch; ++b) {
    const uint8_t* m = mask.data() + b * seq;
    for (std::size_t h = 0; h < heads; ++h) {
      gather(qv, b, h, qh);
      gather(kv, b, h, kh);
      gather(vv, b, h, vh);
      gemm_nt(qh.data(), kh.data(), scores.data(), seq, a, seq);
      double* p = probs->data() + (b * heads + h) * seq * seq;
      for (std::size_t i = 0; i < seq; ++i) {
        double* s = scores.data() + i * seq;
        double top = -INFINITY;
        for (std::size_t j = 0; j < seq; ++j) {
          s[j] = s[j] * inv_sqrt + (m[j] ? 0.0 : kMaskBias);
          top = std::max(top, s[j]);
        }
        double total = 0.0;
        for (std::size_t j = 0; j < seq; ++j) {
          p[i * seq + j] = std::exp(s[j] - top);
          total += p[i * seq + j];
        }
        for (std::size_t j = 0; j < seq; ++j) p[i * seq + j] /= total;
      }
      gemm(p, vh.data(), oh.data(), seq, seq, a);
      for (std::size_t i = 0; i < seq; ++i) std::copy_n(oh.data() + i * a, a, out.data() + (b * seq + i) * d + h * a);
    }
  }
  count_flops(FlopKind::kAttention, batch * heads * (4 * seq * seq * a + 5 * seq * seq));

  return q.tape().record(
      std::move(out), {q, k, v}, [q, k, v, probs, batch, seq, heads, a, d, inv_sqrt](const Tensor& g, GradBuffer& grads) {
        const bool wq = grads.wants(q), wk = grads.wants(k), wv = grads.wants(v);
        if (!wq && !wk && !wv) return;
        const Tensor& qv = q.value();
        const Tensor& kv = k.value();
        const Tensor& vv = v.value();
        std::vector<double> qh(seq * a), kh(seq * a), vh(seq * a), gh(seq * a), tmp(seq * a);
        std::vector<double> dp(seq * seq);
        auto gather = [&](const Tensor& src, std::size_t b, std::size_t h, std::vector<double>& dst) {
          for (std::size_t i = 0; i < seq; ++i)
            std::copy_n(src.data() + (b * seq + i) * d + h * a, a, dst.data() + i * a);
        };
        auto scatter_add = [&](Tensor& dst, std::size_t b, std::size_t h, const std::vector<double>& src) {
          for (std::size_t i = 0; i < seq; ++i) {
            double* row = dst.data() + (b * seq + i) * d + h * a;
            for (std::size_t c = 0; c < a; ++c) row[c] += src[i * a + c];
          }
        };
        for (std::size_t b = 0; b < batch; ++b) {
          for (std::size_t h = 0; h < heads; ++h) {
            const double* p = probs->data() + (b * heads + h) * seq * seq;
            gather(g, b, h, gh);
            gather(vv, b, h, vh);
            if (wv) {
              gemm_tn(p, gh.data(), tmp.data(), seq, seq, a);
              scatter_add(grads.at(v), b, h, tmp);
            }
            if (!wq && !wk) continue;
            gemm_nt(gh.data(), vh.data(), dp.data(), seq, a, seq);
            for (std::size_t i = 0; i < seq; ++i) {
              double dot = 0.0;
              for (std::size_t j = 0; j < seq; ++j) dot += dp[i * seq + j] * p[i * seq + j];
              for (std::size_t j = 0; j < seq; ++j) {
                dp[i * seq + j] = p[i * seq + j] * (dp[i * seq + j] - dot) * inv_sqrt;
              }
            }
            if (wq) {
              gather(kv, b, h, kh);
              gemm(dp.data(), kh.data(), tmp.data(), seq, seq, a);
              scatter_add(grads.at(q), b, h, tmp);
            }
            if (wk) {
              gather(qv, b, h, qh);
              gemm_tn(dp.data(), qh.data(), tmp.data(), seq, seq, a);
              scatter_add(grads.at(k), b, h, tmp);
            }
          }
        }
      });
}

}  // namespace srel::core::ops
