// Copyright 2026 The tsvd-sim developers
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "support.hpp"
#include "tsvd/fourier.hpp"
#include "tsvd/qsim.hpp"

using namespace tsvd;

namespace {

// Dense embedding oracle: applies u to the qubits at the given global
// positions (0 = most significant bit of the whole state), identity elsewhere.
// Completely independent of the simulator's stride arithmetic.
Mat embed_oracle(int total, const std::vector<int>& qpos, const Mat& u) {
  long dim = 1L << total;
  int k = static_cast<int>(qpos.size());
  Mat f = Mat::Zero(dim, dim);
  for (long b = 0; b < dim; ++b) {
    long sub = 0;
    for (int t = 0; t < k; ++t) sub = (sub << 1) | ((b >> (total - 1 - qpos[t])) & 1L);
    for (long sub2 = 0; sub2 < (1L << k); ++sub2) {
      long b2 = b;
      for (int t = 0; t < k; ++t) {
        int sh = total - 1 - qpos[t];
        b2 = (b2 & ~(1L << sh)) | (((sub2 >> (k - 1 - t)) & 1L) << sh);
      }
      f(b2, b) = u(sub2, sub);
    }
  }
  return f;
}

Vec random_state(long dim, SplitMix64& rng) {
  Vec v(dim);
  for (long i = 0; i < dim; ++i) v(i) = Cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
  return v / v.norm();
}

Vec full_state(const QState& s) {
  Vec v(s.dim());
  for (long i = 0; i < s.dim(); ++i) v(i) = s.amps()[i];
  return v;
}

void load_full(QState& s, const Vec& v) {
  for (long i = 0; i < s.dim(); ++i) s.amps()[i] = v(i);
}

Mat ctrl_block(const Mat& u) {
  long d = u.rows();
  Mat c = Mat::Identity(2 * d, 2 * d);
  c.block(d, d, d, d) = u;
  return c;
}

}  // namespace

TEST_CASE("basis indexing is register-major, first register most significant") {
  QState s(RegisterLayout{{"a", 2}, {"b", 3}});
  CHECK(s.dim() == 32);
  CHECK(s.basis_index({{"a", 2}, {"b", 5}}) == 2 * 8 + 5);
  CHECK(s.basis_index({{"b", 5}}) == 5);  // unlisted registers read 0
  s.set_basis_state({{"a", 3}, {"b", 1}});
  CHECK(s.amplitude({{"a", 3}, {"b", 1}}) == Cplx(1, 0));
  CHECK(s.norm_sq() == doctest::Approx(1.0));
  CHECK(s.layout().reg_value(s.basis_index({{"a", 3}, {"b", 1}}), "a") == 3);
  CHECK(s.layout().reg_value(s.basis_index({{"a", 3}, {"b", 1}}), "b") == 1);

  CHECK_THROWS_AS((void)s.basis_index({{"zz", 0}}), ContractError);
  CHECK_THROWS_AS((void)s.basis_index({{"a", 4}}), std::out_of_range);
}

TEST_CASE("two's complement read of a register value") {
  CHECK(signed_value(0, 3) == 0);
  CHECK(signed_value(3, 3) == 3);
  CHECK(signed_value(4, 3) == -4);
  CHECK(signed_value(5, 3) == -3);
  CHECK(signed_value(7, 3) == -1);
  CHECK(signed_value(0, 0) == 0);
}

TEST_CASE("subset unitaries match the dense embedding oracle") {
  RegisterLayout lay{{"a", 1}, {"b", 2}, {"c", 1}};
  SplitMix64 rng(5);
  Vec in = random_state(16, rng);

  SUBCASE("middle register") {
    Mat u = test::random_unitary(4, rng);
    QState s(lay);
    load_full(s, in);
    s.apply_unitary({"b"}, u);
    Vec expect = embed_oracle(4, {1, 2}, u) * in;
    CHECK((full_state(s) - expect).norm() < 1e-13);
  }
  SUBCASE("non-adjacent registers listed out of layout order") {
    Mat u = test::random_unitary(4, rng);
    QState s(lay);
    load_full(s, in);
    s.apply_unitary({"c", "a"}, u);  // c is the high bit of the matrix index
    Vec expect = embed_oracle(4, {3, 0}, u) * in;
    CHECK((full_state(s) - expect).norm() < 1e-13);
  }
  SUBCASE("whole space") {
    Mat u = test::random_unitary(16, rng);
    QState s(lay);
    load_full(s, in);
    s.apply_unitary({"a", "b", "c"}, u);
    CHECK((full_state(s) - u * in).norm() < 1e-12);
  }
  SUBCASE("contract violations") {
    QState s(lay);
    Mat u = test::random_unitary(4, rng);
    CHECK_THROWS_AS(s.apply_unitary({"b", "b"}, u), ContractError);
    CHECK_THROWS_AS(s.apply_unitary({"b"}, Mat(test::make_matrix(4, 4, rng))), ContractError);
    CHECK_THROWS_AS(s.apply_unitary({"b"}, test::random_unitary(8, rng)), ShapeError);
  }
}

TEST_CASE("controlled application only touches the control-1 branch") {
  RegisterLayout lay{{"a", 2}, {"b", 2}};
  SplitMix64 rng(6);
  Vec in = random_state(16, rng);
  Mat u = test::random_unitary(4, rng);

  QState s(lay);
  load_full(s, in);
  s.apply_controlled(QubitRef{"a", 1}, {"b"}, u);  // control: low bit of a
  Vec expect = embed_oracle(4, {1, 2, 3}, ctrl_block(u)) * in;
  CHECK((full_state(s) - expect).norm() < 1e-13);

  QState s2(lay);
  CHECK_THROWS_AS(s2.apply_controlled(QubitRef{"b", 0}, {"b"}, u), ContractError);
}

TEST_CASE("single-qubit helpers agree with the embedding oracle") {
  RegisterLayout lay{{"a", 2}, {"b", 2}};
  SplitMix64 rng(7);
  Vec in = random_state(16, rng);
  Mat u = test::random_unitary(2, rng);

  QState s(lay);
  load_full(s, in);
  s.apply_1q(QubitRef{"b", 0}, u);  // global position 2
  CHECK((full_state(s) - embed_oracle(4, {2}, u) * in).norm() < 1e-13);

  QState s2(lay);
  load_full(s2, in);
  s2.apply_controlled_1q(QubitRef{"a", 0}, QubitRef{"b", 1}, u);
  Vec expect = embed_oracle(4, {0, 3}, ctrl_block(u)) * in;
  CHECK((full_state(s2) - expect).norm() < 1e-13);

  QState s3(lay);
  CHECK_THROWS_AS(s3.apply_controlled_1q(QubitRef{"a", 1}, QubitRef{"a", 1}, u), ContractError);
  CHECK_THROWS_AS(s3.apply_1q(QubitRef{"a", 2}, u), std::out_of_range);
}

TEST_CASE("controlled powers square-and-multiply to the dense power") {
  RegisterLayout lay{{"p", 1}, {"t", 3}};
  SplitMix64 rng(8);
  Mat w = test::random_unitary(8, rng);
  Vec in = random_state(16, rng);

  for (long power : {0L, 1L, 2L, 5L, 8L, 13L}) {
    Mat wp = Mat::Identity(8, 8);
    for (long i = 0; i < power; ++i) wp = w * wp;
    QState a(lay), b(lay);
    load_full(a, in);
    load_full(b, in);
    a.controlled_power(QubitRef{"p", 0}, w, power, {"t"});
    b.apply_controlled(QubitRef{"p", 0}, {"t"}, wp);
    CHECK((full_state(a) - full_state(b)).norm() < 1e-12);
  }
}

TEST_CASE("register QFT matches the dense Fourier matrix") {
  RegisterLayout lay{{"x", 3}, {"y", 1}};
  SplitMix64 rng(9);
  Vec in = random_state(16, rng);

  QState a(lay), b(lay);
  load_full(a, in);
  load_full(b, in);
  a.qft("x");
  b.apply_unitary({"x"}, fourier_matrix(8));
  CHECK((full_state(a) - full_state(b)).norm() < 1e-13);

  a.qft("x", true);
  CHECK((full_state(a) - in).norm() < 1e-12);

  QState c(RegisterLayout{{"wide", 13}});
  CHECK_THROWS_AS(c.qft("wide"), BudgetError);
}

TEST_CASE("hadamard_all equals the tensor-power Hadamard") {
  RegisterLayout lay{{"h", 3}};
  SplitMix64 rng(10);
  Vec in = random_state(8, rng);
  Mat h3(8, 8);
  for (long x = 0; x < 8; ++x)
    for (long y = 0; y < 8; ++y)
      h3(x, y) = ((__builtin_popcountll(x & y) & 1) ? -1.0 : 1.0) / std::sqrt(8.0);

  QState a(lay), b(lay);
  load_full(a, in);
  load_full(b, in);
  a.hadamard_all("h");
  b.apply_unitary({"h"}, h3);
  CHECK((full_state(a) - full_state(b)).norm() < 1e-13);
}

TEST_CASE("reflection about zero flips everything outside the zero subspace") {
  RegisterLayout lay{{"a", 2}, {"b", 1}};
  SplitMix64 rng(11);
  Vec in = random_state(8, rng);
  QState s(lay);
  load_full(s, in);
  s.reflection_about_zero({"a"});
  for (long i = 0; i < 8; ++i) {
    long a_val = s.layout().reg_value(i, "a");
    Cplx want = (a_val == 0) ? in(i) : -in(i);
    CHECK(std::abs(s.amps()[i] - want) < 1e-15);
  }
}

TEST_CASE("basis permutations relocate amplitudes and reject non-bijections") {
  RegisterLayout lay{{"x", 3}};
  SplitMix64 rng(12);
  Vec in = random_state(8, rng);
  QState s(lay);
  load_full(s, in);
  s.permute_basis({"x"}, [](long v) { return (v + 3) % 8; });
  for (long v = 0; v < 8; ++v) CHECK(std::abs(s.amps()[(v + 3) % 8] - in(v)) < 1e-15);

  QState s2(lay);
  CHECK_THROWS_AS(s2.permute_basis({"x"}, [](long) { return 0L; }), ContractError);
}

TEST_CASE("postselection renormalizes the kept branch and reports its mass") {
  QState s(RegisterLayout{{"f", 1}, {"d", 2}});
  Vec v = Vec::Zero(8);
  v(1) = 0.6;           // f=0, d=1
  v(4 + 2) = Cplx(0, 0.8);  // f=1, d=2
  for (long i = 0; i < 8; ++i) s.amps()[i] = v(i);
  double p = s.postselect("f", 0);
  CHECK(p == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(std::abs(s.amplitude({{"f", 0}, {"d", 1}}) - Cplx(1, 0)) < 1e-12);
  CHECK(s.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(s.postselect("f", 1), PostselectError);
}

TEST_CASE("marginal probabilities and seeded sampling") {
  QState s(RegisterLayout{{"a", 1}, {"b", 1}});
  Vec v(4);
  v << 0.5, 0.5, 0.5, 0.5;
  for (long i = 0; i < 4; ++i) s.amps()[i] = v(i);
  std::vector<double> pa = s.probabilities({"a"});
  REQUIRE(pa.size() == 2);
  CHECK(pa[0] == doctest::Approx(0.5));
  CHECK(pa[1] == doctest::Approx(0.5));

  QState peaked(RegisterLayout{{"a", 2}});
  peaked.set_basis_state({{"a", 2}});
  SplitMix64 r1(4), r2(4);
  CHECK(peaked.sample({"a"}, r1) == 2);
  CHECK(peaked.sample({"a"}, r2) == 2);
}

TEST_CASE("partial state loading places amplitudes with unlisted registers at zero") {
  QState s(RegisterLayout{{"a", 1}, {"b", 2}, {"c", 1}});
  SplitMix64 rng(13);
  s.apply_1q(QubitRef{"a", 0}, fourier_matrix(2));  // dirty the state first
  Vec joint = random_state(8, rng);                 // b (msb) then c
  s.set_state_on({"b", "c"}, joint);
  for (long b = 0; b < 4; ++b)
    for (long c = 0; c < 2; ++c) {
      Cplx got = s.amplitude({{"a", 0}, {"b", b}, {"c", c}});
      CHECK(std::abs(got - joint(b * 2 + c)) < 1e-13);
    }
  CHECK(std::abs(s.amplitude({{"a", 1}, {"b", 0}, {"c", 0}})) == 0.0);

  Vec not_unit = Vec::Ones(8);
  CHECK_THROWS_AS(s.set_state_on({"b", "c"}, not_unit), ContractError);
}

TEST_CASE("qubit budget is enforced at construction and follows the environment") {
  RegisterLayout big{{"x", 27}};
  CHECK_THROWS_AS(QState{big}, BudgetError);
  setenv("TSVD_MAX_QUBITS", "5", 1);
  CHECK(QState::max_qubits() == 5);
  RegisterLayout six{{"x", 6}};
  RegisterLayout five{{"x", 5}};
  CHECK_THROWS_AS(QState{six}, BudgetError);
  CHECK_NOTHROW(QState{five});
  unsetenv("TSVD_MAX_QUBITS");
  CHECK(QState::max_qubits() == 26);
}
