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

#include <sstream>

#include "support.hpp"

using namespace tsvd;
using test::make_tensor;

TEST_CASE("element storage and slicing round-trip") {
  Tensor3 t = make_tensor(4, 2, 8, 11, true, false);
  for (int k = 0; k < t.depth(); ++k) {
    Mat f = t.face(k);
    REQUIRE(f.rows() == 4);
    REQUIRE(f.cols() == 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) CHECK(f(i, j) == t.at(i, j, k));
  }
  Vec tube = t.tube(3, 1);
  for (int k = 0; k < 8; ++k) CHECK(tube(k) == t.at(3, 1, k));

  Tensor3 u(4, 2, 8);
  for (int k = 0; k < 8; ++k) u.set_face(k, t.face(k));
  CHECK(frob_dist(t, u) == 0.0);
  Tensor3 w(4, 2, 8);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) w.set_tube(i, j, t.tube(i, j));
  CHECK(frob_dist(t, w) == 0.0);

  CHECK_THROWS_AS((void)t.at(4, 0, 0), std::out_of_range);
  CHECK_THROWS_AS((void)t.at(0, 2, 0), std::out_of_range);
  CHECK_THROWS_AS((void)t.at(0, 0, 8), std::out_of_range);
}

TEST_CASE("norms and arithmetic") {
  Tensor3 t = make_tensor(4, 4, 4, 3, true, false);
  double n2 = 0;
  for (const Cplx& c : t.data()) n2 += std::norm(c);
  CHECK(t.frob_norm_sq() == doctest::Approx(n2).epsilon(1e-14));
  CHECK(t.frob_norm() == doctest::Approx(std::sqrt(n2)).epsilon(1e-14));

  Tensor3 d = t - t;
  CHECK(d.frob_norm() == 0.0);
  Tensor3 s = t + t;
  s *= 0.5;
  CHECK(frob_dist(s, t) < 1e-15);

  Tensor3 r = make_tensor(2, 2, 2, 5, false, false);
  CHECK(r.is_real());
  CHECK(r.max_abs_imag() == 0.0);
}

TEST_CASE("power-of-two padding preserves entries and norm") {
  Tensor3 t = make_tensor(3, 4, 5, 17, true, false);
  Tensor3 p = pad_pow2(t);
  CHECK(p.rows() == 4);
  CHECK(p.cols() == 4);
  CHECK(p.depth() == 8);
  CHECK(p.frob_norm() == doctest::Approx(t.frob_norm()).epsilon(1e-14));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 5; ++k) CHECK(p.at(i, j, k) == t.at(i, j, k));
  CHECK(p.at(3, 0, 0) == Cplx(0, 0));

  Tensor3 q = pad_pow2_square(make_tensor(2, 4, 2, 1, false, false));
  CHECK(q.rows() == 4);
  CHECK(q.cols() == 4);

  Tensor3 same = make_tensor(4, 4, 4, 2, false, false);
  CHECK(frob_dist(pad_pow2(same), same) == 0.0);
}

TEST_CASE("Z-order flattening interleaves with the column bit ahead") {
  Mat m(2, 2);
  m << Cplx(1, 0), Cplx(2, 0), Cplx(3, 0), Cplx(4, 0);
  Vec v = zorder_flatten(m);
  // position = c r: |00> -> (0,0), |01> -> (1,0), |10> -> (0,1), |11> -> (1,1)
  CHECK(v(0) == Cplx(1, 0));
  CHECK(v(1) == Cplx(3, 0));
  CHECK(v(2) == Cplx(2, 0));
  CHECK(v(3) == Cplx(4, 0));

  SplitMix64 rng(9);
  Mat big = test::make_matrix(8, 8, rng);
  Mat back = zorder_unflatten(zorder_flatten(big));
  CHECK((back - big).cwiseAbs().maxCoeff() == 0.0);

  // 4x4 spot check: row 2 col 3 has bits r=10, c=11; interleaving each
  // (c_b, r_b) pair with the column bit ahead gives c1 r1 c0 r0 = 1110 = 14.
  Mat m4 = Mat::Zero(4, 4);
  m4(2, 3) = Cplx(7, 0);
  CHECK(zorder_flatten(m4)(14) == Cplx(7, 0));

  CHECK_THROWS_AS(zorder_flatten(Mat::Zero(2, 4)), ShapeError);
  CHECK_THROWS_AS(zorder_flatten(Mat::Zero(3, 3)), ShapeError);
}

TEST_CASE("tensor flattening is face-major, Z-ordered and unit-norm") {
  Tensor3 t = make_tensor(4, 4, 2, 23, true, false);
  Vec v = flatten_tensor(t);
  CHECK(v.size() == 32);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-13));
  double fro = t.frob_norm();
  for (int k = 0; k < 2; ++k) {
    Vec face = zorder_flatten(t.face(k));
    for (int p = 0; p < 16; ++p)
      CHECK(std::abs(v(k * 16 + p) - face(p) / fro) < 1e-14);
  }

  CHECK_THROWS_AS(flatten_tensor(Tensor3(2, 4, 2)), ShapeError);
  CHECK_THROWS_AS(flatten_tensor(Tensor3(4, 4, 3)), ShapeError);
  Tensor3 zero(2, 2, 2);
  CHECK_THROWS_AS(flatten_tensor(zero), DegenerateInputError);
}

TEST_CASE("JSON round-trip preserves every entry bit-for-bit") {
  Tensor3 t = make_tensor(2, 4, 2, 31, true, false);
  std::stringstream ss;
  save_tensor_json(t, ss);
  Tensor3 back = load_tensor_json(ss);
  REQUIRE(back.rows() == t.rows());
  REQUIRE(back.cols() == t.cols());
  REQUIRE(back.depth() == t.depth());
  CHECK(frob_dist(back, t) == 0.0);

  std::stringstream bad("{\"dims\": [2, 2], \"entries\": []}");
  CHECK_THROWS(load_tensor_json(bad));
  std::stringstream wrong_count("{\"dims\": [2, 2, 2], \"entries\": [[1.0, 0.0]]}");
  CHECK_THROWS(load_tensor_json(wrong_count));
}
