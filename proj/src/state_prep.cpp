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

#include "tsvd/state_prep.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "tsvd/fourier.hpp"

namespace tsvd {

Mat complete_to_unitary(const Mat& partial, long dim) {
  if (partial.size() > 0 && partial.rows() != dim)
    throw ShapeError("complete_to_unitary: column length does not match dim");
  long r = partial.cols();
  if (r > dim) throw ShapeError("complete_to_unitary: more columns than dim");
  if (r > 0) {
    Mat g = partial.adjoint() * partial;
    g.diagonal().array() -= 1.0;
    if (g.cwiseAbs().maxCoeff() > 1e-8)
      throw ContractError("complete_to_unitary: given columns are not orthonormal");
  }

  Mat u(dim, dim);
  u.leftCols(r) = partial;
  long have = r;
  for (long c = 0; c < dim && have < dim; ++c) {
    Vec v = Vec::Zero(dim);
    v(c) = 1.0;
    // Modified Gram-Schmidt, two passes for orthogonality near machine epsilon.
    for (int pass = 0; pass < 2; ++pass)
      for (long x = 0; x < have; ++x) v -= u.col(x).dot(v) * u.col(x);
    double nrm = v.norm();
    if (nrm <= 1e-8) continue;
    u.col(have++) = v / nrm;
  }
  if (have < dim)
    throw NumericalError("complete_to_unitary: canonical basis did not span the complement");
  return u;
}

PreparedOperators build_operators(const Tensor3& t) {
  if (!is_pow2(t.rows()) || !is_pow2(t.cols()) || !is_pow2(t.depth()))
    throw ShapeError("build_operators: dims must be powers of two (pad first)");
  PreparedOperators ops;
  ops.rows = t.rows();
  ops.cols = t.cols();
  ops.depth = t.depth();
  ops.fro_norm = t.frob_norm();
  if (ops.fro_norm == 0.0) throw DegenerateInputError("build_operators: zero tensor");

  const int m = ops.rows, n = ops.cols, l = ops.depth;

  // Column-slice norm profile.
  Vec profile(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < l; ++k) s += std::norm(t.at(i, j, k));
    profile(j) = std::sqrt(s) / ops.fro_norm;
  }
  ops.norm_profile = complete_to_unitary(profile, n);

  // slice_prep: per-j unitary over the (i, k) pair, assembled block-wise.
  const long big = static_cast<long>(m) * n * l;
  ops.slice_prep = Mat::Zero(big, big);
  ops.zero_col_slice.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    Vec col(static_cast<long>(m) * l);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < l; ++k) col(static_cast<long>(i) * l + k) = t.at(i, j, k);
    double nrm = col.norm();
    Mat uj;
    if (nrm == 0.0) {
      ops.zero_col_slice[j] = 1;
      uj = Mat::Identity(m * l, m * l);
    } else {
      uj = complete_to_unitary(col / nrm, static_cast<long>(m) * l);
    }
    for (int i2 = 0; i2 < m; ++i2)
      for (int k2 = 0; k2 < l; ++k2)
        for (int i = 0; i < m; ++i)
          for (int k = 0; k < l; ++k)
            ops.slice_prep((static_cast<long>(i2) * n + j) * l + k2,
                           (static_cast<long>(i) * n + j) * l + k) =
                uj(static_cast<long>(i2) * l + k2, static_cast<long>(i) * l + k);
  }

  // row_prep: per-i unitary over the (j, k) pair.
  ops.row_prep = Mat::Zero(big, big);
  ops.zero_row_slice.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    Vec row(static_cast<long>(n) * l);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < l; ++k) row(static_cast<long>(j) * l + k) = t.at(i, j, k);
    double nrm = row.norm();
    Mat vi;
    if (nrm == 0.0) {
      ops.zero_row_slice[i] = 1;
      vi = Mat::Identity(n * l, n * l);
    } else {
      vi = complete_to_unitary(row / nrm, static_cast<long>(n) * l);
    }
    for (int j2 = 0; j2 < n; ++j2)
      for (int k2 = 0; k2 < l; ++k2)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < l; ++k)
            ops.row_prep((static_cast<long>(i) * n + j2) * l + k2,
                         (static_cast<long>(i) * n + j) * l + k) =
                vi(static_cast<long>(j2) * l + k2, static_cast<long>(j) * l + k);
  }

  return ops;
}

void apply_p_prime(QState& s, const PreparedOperators& ops, const PrepBinding& b, bool adjoint) {
  const int lw = log2_exact(ops.depth);
  auto copy_xor = [lw](long v) {
    long a = v >> lw;
    long bb = v & ((1L << lw) - 1);
    return (a << lw) | (bb ^ a);
  };
  if (!adjoint) {
    s.qft(b.face_src, true);
    if (lw > 0) s.permute_basis({b.face_src, b.face_copy}, copy_xor);
    s.qft(b.face_src, false);
    s.qft(b.face_copy, false);
    s.apply_unitary({b.rsv}, ops.norm_profile);
  } else {
    s.apply_unitary({b.rsv}, ops.norm_profile.adjoint());
    s.qft(b.face_copy, true);
    s.qft(b.face_src, true);
    if (lw > 0) s.permute_basis({b.face_src, b.face_copy}, copy_xor);
    s.qft(b.face_src, false);
  }
}

void apply_q_prime(QState& s, const PreparedOperators& ops, const std::vector<std::string>& regs,
                   bool adjoint) {
  s.apply_unitary(regs, adjoint ? Mat(ops.slice_prep.adjoint()) : ops.slice_prep);
}

void apply_row_prep(QState& s, const PreparedOperators& ops, const std::vector<std::string>& regs,
                    bool adjoint) {
  s.apply_unitary(regs, adjoint ? Mat(ops.row_prep.adjoint()) : ops.row_prep);
}

Mat p_prime_matrix(const PreparedOperators& ops) {
  const int m = ops.rows, n = ops.cols, l = ops.depth;
  Mat f = fourier_matrix(l);
  Mat imn = Mat::Identity(static_cast<long>(m) * n, static_cast<long>(m) * n);
  Mat il = Mat::Identity(l, l);

  Mat copy = Mat::Zero(static_cast<long>(l) * l, static_cast<long>(l) * l);
  for (long a = 0; a < l; ++a)
    for (long bb = 0; bb < l; ++bb) copy(a * l + (bb ^ a), a * l + bb) = 1.0;

  Mat stage = Eigen::kroneckerProduct(imn, Mat(Eigen::kroneckerProduct(f, f))).eval() *
              Eigen::kroneckerProduct(imn, copy).eval() *
              Eigen::kroneckerProduct(imn, Mat(Eigen::kroneckerProduct(Mat(f.adjoint()), il))).eval();
  Mat pj = Eigen::kroneckerProduct(
               Mat(Eigen::kroneckerProduct(Mat::Identity(m, m), ops.norm_profile)),
               Mat::Identity(static_cast<long>(l) * l, static_cast<long>(l) * l))
               .eval();
  return stage * pj;
}

Mat q_prime_matrix4(const PreparedOperators& ops) {
  return Eigen::kroneckerProduct(ops.slice_prep, Mat::Identity(ops.depth, ops.depth)).eval();
}

}  // namespace tsvd
