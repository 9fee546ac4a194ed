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

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "srel/common/errors.h"
#include "srel/core/flops.h"
#include "srel/core/functional.h"
#include "srel/core/gemm.h"
#include "srel/core/ops.h"
#include "support/grad_check.h"

namespace srel {
namespace {

using core::Rng;
using core::Shape;
using core::Tape;
using core::Tensor;
using core::Var;
namespace ops = core::ops;
using testing::max_relative_error;
using testing::project;
using testing::random_tensor;

constexpr double kPrimitiveTolerance = 1e-4;

TEST_CASE("matmul identity and zeros") {
  Rng rng(1);
  Tensor a = random_tensor({3, 3}, rng);
  Tensor eye({3, 3});
  for (int i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
  Tape tape;
  CHECK(ops::matmul(tape.constant(eye), tape.constant(a)).value() == a);
  Tensor zeros({2, 3});
  CHECK(ops::matmul(tape.constant(zeros), tape.constant(a)).value() == Tensor({2, 3}));
  CHECK_THROWS_AS(ops::matmul(tape.constant(a), tape.constant(Tensor({2, 2}))), DimensionError);
}

TEST_CASE("matmul gradient matches finite differences") {
  Rng rng(2);
  auto fn = [](Tape&, const std::vector<Var>& v) { return project(ops::matmul(v[0], v[1])); };
  CHECK(max_relative_error(fn, {random_tensor({3, 4}, rng), random_tensor({4, 2}, rng)}) < kPrimitiveTolerance);
}

TEST_CASE("gemm rows are independent of batch composition") {
  Rng rng(3);
  const std::size_t k = 37, n = 23;
  Tensor b = random_tensor({k, n}, rng);
  for (std::size_t m : {1, 5, 6, 7, 13}) {
    Tensor a = random_tensor({m, k}, rng);
    Tensor full({m, n});
    core::gemm(a.data(), b.data(), full.data(), m, k, n);
    for (std::size_t r = 0; r < m; ++r) {
      Tensor single({1, n});
      core::gemm(a.data() + r * k, b.data(), single.data(), 1, k, n);
      for (std::size_t c = 0; c < n; ++c) REQUIRE(single[c] == full.at(r, c));
    }
  }
}

TEST_CASE("gemm transposed variants agree with the plain product") {
  Rng rng(4);
  Tensor a = random_tensor({5, 7}, rng), b = random_tensor({7, 3}, rng);
  Tensor ref({5, 3});
  core::gemm(a.data(), b.data(), ref.data(), 5, 7, 3);
  Tensor at({7, 5}), bt({3, 7});
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 7; ++j) at.at(j, i) = a.at(i, j);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 3; ++j) bt.at(j, i) = b.at(i, j);
  Tensor c1({5, 3}), c2({5, 3});
  core::gemm_tn(at.data(), b.data(), c1.data(), 5, 7, 3);
  core::gemm_nt(a.data(), bt.data(), c2.data(), 5, 7, 3);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(c1[i] == doctest::Approx(ref[i]).epsilon(1e-14));
    CHECK(c2[i] == doctest::Approx(ref[i]).epsilon(1e-14));
  }
}

TEST_CASE("heated softmax values") {
  Tensor sym({1, 2}, {1.0, 1.0});
  for (double tau : {0.1, 1.0, 7.0}) {
    Tensor p = core::softmax(sym, tau);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
  }
  Tensor p = core::softmax(Tensor({1, 2}, {2.0, 0.0}), 1.0);
  CHECK(p[0] == doctest::Approx(0.8808).epsilon(1e-4));
  CHECK(p[1] == doctest::Approx(0.1192).epsilon(1e-3));
  Tensor shifted = core::softmax(Tensor({1, 2}, {102.0, 100.0}), 1.0);
  CHECK(std::abs(shifted[0] - p[0]) < 1e-15);
  CHECK_THROWS_AS(core::softmax(sym, 0.0), ParameterError);
  CHECK_THROWS_AS(core::softmax(sym, -1.0), ParameterError);
}

TEST_CASE("softmax rows normalize and keep the argmax for every temperature") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Tensor z = random_tensor({1, 5}, rng, 10.0);
    const auto top = std::max_element(z.values().begin(), z.values().end()) - z.values().begin();
    for (double tau : {0.25, 1.0, 4.0, 16.0}) {
      Tensor p = core::softmax(z, tau);
      double total = std::accumulate(p.values().begin(), p.values().end(), 0.0);
      REQUIRE(std::abs(total - 1.0) < 1e-12);
      REQUIRE(std::max_element(p.values().begin(), p.values().end()) - p.values().begin() == top);
    }
  }
}

TEST_CASE("kl divergence values") {
  std::vector<double> p{0.3, 0.7};
  CHECK(core::kl_divergence(p, p) == 0.0);
  std::vector<double> one_hot{1.0, 0.0}, uniform{0.5, 0.5};
  CHECK(core::kl_divergence(one_hot, uniform) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  std::vector<double> a{0.9, 0.1};
  const double forward = core::kl_divergence(a, uniform);
  const double reverse = core::kl_divergence(uniform, a);
  CHECK(forward != doctest::Approx(reverse));
  CHECK(forward == doctest::Approx(0.9 * std::log(1.8) + 0.1 * std::log(0.2)));
  std::vector<double> three{0.2, 0.3, 0.5};
  CHECK_THROWS_AS(core::kl_divergence(p, three), DimensionError);
}

TEST_CASE("kl divergence is nonnegative on random distributions") {
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> p(4), q(4);
    double sp = 0, sq = 0;
    for (int i = 0; i < 4; ++i) {
      p[i] = rng.uniform();
      q[i] = rng.uniform();
      sp += p[i];
      sq += q[i];
    }
    for (int i = 0; i < 4; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    REQUIRE(core::kl_divergence(p, q) >= 0.0);
  }
}

TEST_CASE("dropout behaviour") {
  Rng rng(7);
  Tensor x = random_tensor({100, 1000}, rng);
  Tape tape;
  Var xv = tape.constant(x);
  Rng drop_rng(11);
  CHECK(ops::dropout(xv, 0.0, drop_rng, true).value() == x);
  CHECK(ops::dropout(xv, 0.7, drop_rng, false).value() == x);
  CHECK_THROWS_AS(ops::dropout(xv, 1.0, drop_rng, true), ParameterError);
  CHECK_THROWS_AS(ops::dropout(xv, -0.1, drop_rng, true), ParameterError);

  Rng r1(42), r2(42);
  Tensor y1 = ops::dropout(xv, 0.5, r1, true).value();
  Tensor y2 = ops::dropout(xv, 0.5, r2, true).value();
  CHECK(y1 == y2);
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < y1.size(); ++i) {
    if (y1[i] != 0.0) {
      ++survivors;
      REQUIRE(y1[i] == doctest::Approx(2.0 * x[i]));
    }
  }
  CHECK(std::abs(static_cast<double>(survivors) / 1e5 - 0.5) < 0.01);
}

TEST_CASE("layer norm and cross entropy edge values") {
  Tape tape;
  Tensor constant_row({2, 4}, 3.5);
  Var out = ops::layer_norm(tape.constant(constant_row), tape.constant(Tensor({4}, 1.0)),
                            tape.constant(Tensor({4}, 0.0)));
  for (double v : out.value().values()) CHECK(v == 0.0);
  std::vector<int> labels{0};
  Var ce = ops::cross_entropy(tape.constant(Tensor({1, 2}, {1000.0, 0.0})), labels);
  CHECK(ce.value().item() == 0.0);
}

TEST_CASE("primitive gradients match central finite differences") {
  Rng rng(8);
  auto check = [&](const char* name, const testing::GraphFn& fn, std::vector<Tensor> inputs) {
    const double err = max_relative_error(fn, std::move(inputs));
    INFO(name << " max relative error " << err);
    CHECK(err < kPrimitiveTolerance);
  };
  check("linear", [](Tape&, const std::vector<Var>& v) { return project(ops::linear(v[0], v[1], v[2])); },
        {random_tensor({4, 3}, rng), random_tensor({3, 5}, rng), random_tensor({5}, rng)});
  check("add", [](Tape&, const std::vector<Var>& v) { return project(ops::add(v[0], v[1])); },
        {random_tensor({2, 3}, rng), random_tensor({2, 3}, rng)});
  check("sub", [](Tape&, const std::vector<Var>& v) { return project(ops::sub(v[0], v[1])); },
        {random_tensor({2, 3}, rng), random_tensor({2, 3}, rng)});
  check("mul", [](Tape&, const std::vector<Var>& v) { return project(ops::mul(v[0], v[1])); },
        {random_tensor({2, 3}, rng), random_tensor({2, 3}, rng)});
  check("scale", [](Tape&, const std::vector<Var>& v) { return project(ops::scale(v[0], -1.7)); },
        {random_tensor({3, 2}, rng)});
  check("mean", [](Tape&, const std::vector<Var>& v) { return ops::mean(ops::mul(v[0], v[0])); },
        {random_tensor({3, 2}, rng)});
  check("layer_norm",
        [](Tape&, const std::vector<Var>& v) { return project(ops::layer_norm(v[0], v[1], v[2])); },
        {random_tensor({3, 6}, rng), random_tensor({6}, rng), random_tensor({6}, rng)});
  check("gelu", [](Tape&, const std::vector<Var>& v) { return project(ops::gelu(v[0])); },
        {random_tensor({4, 4}, rng, 3.0)});
  check("dropout",
        [](Tape&, const std::vector<Var>& v) {
          Rng r(5);
          return project(ops::dropout(v[0], 0.3, r, true));
        },
        {random_tensor({4, 5}, rng)});
  check("embedding_gather",
        [](Tape&, const std::vector<Var>& v) {
          const std::vector<int32_t> ids{2, 0, 2, 3};
          return project(ops::embedding_gather(v[0], ids));
        },
        {random_tensor({4, 3}, rng)});
  check("select_rows",
        [](Tape&, const std::vector<Var>& v) {
          const std::vector<std::size_t> rows{1, 3, 1};
          return project(ops::select_rows(v[0], rows));
        },
        {random_tensor({4, 3}, rng)});
  check("pick",
        [](Tape&, const std::vector<Var>& v) {
          const std::vector<int> cols{1, 0, 1};
          return project(ops::pick(v[0], cols));
        },
        {random_tensor({3, 2}, rng)});
  for (double tau : {0.5, 1.0, 4.0}) {
    check("softmax", [tau](Tape&, const std::vector<Var>& v) { return project(ops::softmax(v[0], tau)); },
          {random_tensor({3, 4}, rng, 2.0)});
    check("log_softmax",
          [tau](Tape&, const std::vector<Var>& v) { return project(ops::log_softmax(v[0], tau)); },
          {random_tensor({3, 4}, rng, 2.0)});
  }
  check("cross_entropy",
        [](Tape&, const std::vector<Var>& v) {
          const std::vector<int> labels{0, 2, 1};
          return ops::cross_entropy(v[0], labels);
        },
        {random_tensor({3, 3}, rng, 2.0)});
  check("log_floor",
        [](Tape&, const std::vector<Var>& v) {
          return project(ops::log_floor(ops::softmax(v[0], 1.0), core::kLogFloor));
        },
        {random_tensor({3, 2}, rng)});
  check("symmetric_kl",
        [](Tape&, const std::vector<Var>& v) {
          return ops::symmetric_kl(ops::softmax(v[0], 1.0), ops::softmax(v[1], 1.0));
        },
        {random_tensor({4, 2}, rng, 2.0), random_tensor({4, 2}, rng, 2.0)});
}

TEST_CASE("masked attention gradient matches finite differences") {
  Rng rng(9);
  const std::size_t batch = 2, seq = 4, heads = 2, d = 6;
  const std::vector<uint8_t> mask{1, 1, 0, 1, 1, 1, 1, 0};
  auto fn = [&](Tape&, const std::vector<Var>& v) {
    return project(ops::attention(v[0], v[1], v[2], mask, batch, seq, heads));
  };
  CHECK(max_relative_error(fn, {random_tensor({batch * seq, d}, rng), random_tensor({batch * seq, d}, rng),
                                random_tensor({batch * seq, d}, rng)}) < kPrimitiveTolerance);
}

TEST_CASE("composed attention block gradient matches finite differences") {
  Rng rng(10);
  const std::size_t batch = 2, seq = 3, heads = 2, d = 4;
  const std::vector<uint8_t> mask{1, 1, 1, 1, 1, 0};
  auto fn = [&](Tape&, const std::vector<Var>& v) {
    Var q = ops::linear(v[0], v[1], v[2]);
    Var k = ops::linear(v[0], v[3], v[2]);
    Var val = ops::linear(v[0], v[4], v[2]);
    Var ctx = ops::attention(q, k, val, mask, batch, seq, heads);
    Var h = ops::layer_norm(ops::add(v[0], ctx), v[5], v[6]);
    return project(ops::gelu(h));
  };
  const double err = max_relative_error(
      fn, {random_tensor({batch * seq, d}, rng), random_tensor({d, d}, rng), random_tensor({d}, rng),
           random_tensor({d, d}, rng), random_tensor({d, d}, rng), random_tensor({d}, rng, 1.5),
           random_tensor({d}, rng)});
  CHECK(err < kPrimitiveTolerance);
}

TEST_CASE("masked keys receive exactly zero attention") {
  Rng rng(12);
  const std::vector<uint8_t> mask{1, 0, 1};
  Tape tape;
  Tensor q = random_tensor({3, 4}, rng), k = random_tensor({3, 4}, rng), v = random_tensor({3, 4}, rng);
  Tensor v_changed = v;
  for (int c = 0; c < 4; ++c) v_changed.at(1, c) = 123.0;
  Var a = ops::attention(tape.constant(q), tape.constant(k), tape.constant(v), mask, 1, 3, 2);
  Var b = ops::attention(tape.constant(q), tape.constant(k), tape.constant(v_changed), mask, 1, 3, 2);
  CHECK(a.value() == b.value());
}

TEST_CASE("backward accumulates into parameters and clears the tape") {
  core::Parameter p("x", Tensor({3}, {1.0, -2.0, 3.0}));
  {
    Tape tape;
    tape.backward(ops::sum(tape.parameter(p)));
    CHECK(tape.size() == 0);
  }
  for (int i = 0; i < 3; ++i) CHECK(p.grad[i] == 1.0);
  {
    Tape tape;
    Var x = tape.parameter(p);
    tape.backward(ops::scale(ops::sum(ops::mul(x, x)), 0.5));
  }
  CHECK(p.grad[0] == 2.0);
  CHECK(p.grad[1] == -1.0);
  CHECK(p.grad[2] == 4.0);
  p.zero_grad();
  CHECK(p.grad[1] == 0.0);

  Tape tape;
  Var x = tape.parameter(p);
  CHECK_THROWS_AS(tape.backward(ops::scale(x, 2.0)), ContractError);
}

TEST_CASE("gradient() leaves parameter gradients untouched") {
  core::Parameter w("w", Tensor({2, 2}, {1.0, 2.0, 3.0, 4.0}));
  Tape tape;
  Var x = tape.leaf(Tensor({1, 2}, {0.5, -1.0}));
  Var loss = ops::sum(ops::matmul(x, tape.parameter(w)));
  Tensor gx = tape.gradient(loss, x);
  CHECK(gx[0] == 3.0);
  CHECK(gx[1] == 7.0);
  for (double g : w.grad.values()) CHECK(g == 0.0);
  tape.backward(loss);
  CHECK(w.grad[0] == 0.5);
  CHECK(w.grad[3] == -1.0);
}

TEST_CASE("inference tapes record no gradients") {
  core::Parameter w("w", Tensor({2, 2}, 1.0));
  Tape tape(Tape::Mode::kInference);
  Var y = ops::matmul(tape.constant(Tensor({1, 2}, 1.0)), tape.parameter(w));
  CHECK_FALSE(y.requires_grad());
  CHECK(y.value()[0] == 2.0);
}

TEST_CASE("flop counter attributes work to the scoped kind") {
  core::reset_flop_counter();
  Tape tape(Tape::Mode::kInference);
  {
    core::FlopScope scope(core::FlopKind::kFeedForward);
    ops::matmul(tape.constant(Tensor({2, 3})), tape.constant(Tensor({3, 4})));
  }
  CHECK(core::flop_counter().feed_forward == 2 * 2 * 3 * 4);
  CHECK(core::flop_counter().attention == 0);
}

TEST_CASE("rng streams are reproducible and copies fork identically") {
  Rng a(5), b(5);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  Rng c = a;
  CHECK(c.uniform() == a.uniform());
  CHECK(a.position() == 11);
  double sum = 0, sq = 0;
  Rng n(6);
  for (int i = 0; i < 20000; ++i) {
    double v = n.truncated_normal(0.02);
    REQUIRE(std::abs(v) <= 0.04 / 0.87962566103423978 + 1e-15);
    sum += v;
    sq += v * v;
  }
  CHECK(std::abs(sum / 20000) < 1e-3);
  CHECK(std::sqrt(sq / 20000) == doctest::Approx(0.02).epsilon(0.03));
}

}  // namespace
}  // namespace srel
