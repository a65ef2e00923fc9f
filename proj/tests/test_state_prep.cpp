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

#include "support.hpp"
#include "tsvd/fourier.hpp"
#include "tsvd/qsim.hpp"
#include "tsvd/state_prep.hpp"

using namespace tsvd;
using test::make_tensor;

namespace {

Vec kron4(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  Vec ab(a.size() * b.size());
  for (long i = 0; i < a.size(); ++i) ab.segment(i * b.size(), b.size()) = a(i) * b;
  Vec abc(ab.size() * c.size());
  for (long i = 0; i < ab.size(); ++i) abc.segment(i * c.size(), c.size()) = ab(i) * c;
  Vec out(abc.size() * d.size());
  for (long i = 0; i < abc.size(); ++i) out.segment(i * d.size(), d.size()) = abc(i) * d;
  return out;
}

Vec basis(long dim, long i) {
  Vec v = Vec::Zero(dim);
  v(i) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("orthonormal completion extends a partial isometry") {
  SplitMix64 rng(2);
  Mat part = test::random_unitary(6, rng).leftCols(2);
  Mat full = complete_to_unitary(part, 6);
  CHECK((full.adjoint() * full - Mat::Identity(6, 6)).norm() < 1e-10);
  CHECK((full.leftCols(2) - part).norm() < 1e-12);

  Mat empty(6, 0);
  Mat from_nothing = complete_to_unitary(empty, 6);
  CHECK((from_nothing.adjoint() * from_nothing - Mat::Identity(6, 6)).norm() < 1e-10);

  Mat bad = part;
  bad.col(1) = bad.col(0);
  CHECK_THROWS_AS(complete_to_unitary(bad, 6), ContractError);
}

TEST_CASE("prepared operator matrices are unitary for generic and degenerate tensors") {
  for (std::uint64_t seed : {0ull, 1ull}) {
    Tensor3 t = make_tensor(4, 4, 4, seed, seed == 1, true);
    PreparedOperators ops = build_operators(t);
    CHECK(ops.fro_norm == doctest::Approx(t.frob_norm()).epsilon(1e-12));
    Mat p4 = p_prime_matrix(ops);
    Mat q4 = q_prime_matrix4(ops);
    long dim = 4L * 4 * 4 * 4;
    CHECK((p4.adjoint() * p4 - Mat::Identity(dim, dim)).norm() < 1e-9);
    CHECK((q4.adjoint() * q4 - Mat::Identity(dim, dim)).norm() < 1e-9);
  }

  // A zero column slice forces the arbitrary completion path.
  Tensor3 t = make_tensor(2, 2, 2, 3, false, false);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) t.at(i, 1, k) = 0.0;
  PreparedOperators ops = build_operators(t);
  CHECK(ops.zero_col_slice[1] == 1);
  Mat q4 = q_prime_matrix4(ops);
  long dim = 2L * 2 * 2 * 2;
  CHECK((q4.adjoint() * q4 - Mat::Identity(dim, dim)).norm() < 1e-9);

  CHECK_THROWS_AS(build_operators(Tensor3(2, 2, 2)), DegenerateInputError);
  CHECK_THROWS_AS(build_operators(Tensor3(3, 2, 2)), ShapeError);
}

TEST_CASE("circuit-level preparation equals the dense assembly") {
  Tensor3 t = make_tensor(4, 2, 2, 7, true, true);
  PreparedOperators ops = build_operators(t);
  RegisterLayout lay{{"lsv", 2}, {"rsv", 1}, {"fsrc", 1}, {"fcpy", 1}};
  SplitMix64 rng(4);
  Vec in(2L * 4 * 2 * 2);
  for (long i = 0; i < in.size(); ++i) in(i) = Cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
  in /= in.norm();

  QState a(lay);
  a.set_state_on({"lsv", "rsv", "fsrc", "fcpy"}, in);
  apply_p_prime(a, ops, PrepBinding{"lsv", "rsv", "fsrc", "fcpy"});
  Vec via_matrix = p_prime_matrix(ops) * in;
  double diff = 0;
  for (long i = 0; i < in.size(); ++i) diff += std::norm(a.amps()[i] - via_matrix(i));
  CHECK(std::sqrt(diff) < 1e-10);

  QState b(lay);
  b.set_state_on({"lsv", "rsv", "fsrc", "fcpy"}, in);
  apply_q_prime(b, ops, {"lsv", "rsv", "fsrc"});
  Vec via_q = q_prime_matrix4(ops) * in;
  diff = 0;
  for (long i = 0; i < in.size(); ++i) diff += std::norm(b.amps()[i] - via_q(i));
  CHECK(std::sqrt(diff) < 1e-10);

  // Adjoint round-trip.
  apply_p_prime(a, ops, PrepBinding{"lsv", "rsv", "fsrc", "fcpy"}, true);
  diff = 0;
  for (long i = 0; i < in.size(); ++i) diff += std::norm(a.amps()[i] - in(i));
  CHECK(std::sqrt(diff) < 1e-10);
}

TEST_CASE("preparation unitaries factor through the transformed faces") {
  // The inner product of the row-side and column-side preparations must
  // reproduce every transformed face entry over the matching Fourier label.
  for (std::uint64_t seed : {11ull, 12ull}) {
    Tensor3 t = make_tensor(4, 4, 4, seed, seed == 12, true);
    const int m = 4, n = 4, l = 4;
    PreparedOperators ops = build_operators(t);
    Mat p4 = p_prime_matrix(ops);
    Mat q4 = q_prime_matrix4(ops);
    Mat fmat = fourier_matrix(l);
    Tensor3 hat = mode3_dft(t);

    Mat p_iso(p4.rows(), m * l), q_iso(q4.rows(), n * l);
    for (int k = 0; k < l; ++k) {
      Vec fk = fmat.col(k);
      for (int i = 0; i < m; ++i)
        p_iso.col(i * l + k) = p4 * kron4(basis(m, i), basis(n, 0), fk, basis(l, 0));
      for (int j = 0; j < n; ++j)
        q_iso.col(j * l + k) = q4 * kron4(basis(m, 0), basis(n, j), basis(l, 0), fk);
    }
    CHECK((p_iso.adjoint() * p_iso - Mat::Identity(m * l, m * l)).norm() < 1e-9);
    CHECK((q_iso.adjoint() * q_iso - Mat::Identity(n * l, n * l)).norm() < 1e-9);

    Mat prod = p_iso.adjoint() * q_iso;  // rows (i,k), cols (j,k')
    double worst = 0;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < l; ++k)
        for (int j = 0; j < n; ++j)
          for (int k2 = 0; k2 < l; ++k2) {
            Cplx want = (k == k2) ? hat.face(k)(i, j) / t.frob_norm() : Cplx(0, 0);
            worst = std::max(worst, std::abs(prod(i * l + k, j * l + k2) - want));
          }
    CHECK(worst < 1e-9);
  }
}
