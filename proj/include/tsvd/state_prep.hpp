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

#pragma once

#include <vector>

#include "tsvd/qsim.hpp"
#include "tsvd/tensor.hpp"

namespace tsvd {

// Extends a set of orthonormal columns (possibly none) to a dim x dim unitary
// by modified Gram-Schmidt over the canonical basis, skipping candidates whose
// residual falls below 1e-8.  Deterministic; input columns are kept verbatim
// as the leading columns.  Throws ContractError if the input columns are not
// orthonormal to 1e-8.
Mat complete_to_unitary(const Mat& partial, long dim);

// State-preparation unitaries derived from one tensor.
//
// norm_profile (cols x cols): column 0 holds the per-column-slice Frobenius
// norms divided by the tensor norm; loading |0> yields the slice-weight
// superposition.
//
// slice_prep (rows*cols*depth square): block unitary over the column index j;
// |0, j, 0> maps to the normalized column slice sum_{i,k} t(i,j,k) |i, j, k>.
//
// row_prep: same construction over the row index i; |i, 0, 0> maps to the
// normalized row slice sum_{j,k} t(i,j,k) |i, j, k>.
//
// An all-zero column/row slice gets a placeholder |0> column and is flagged;
// pipelines refuse to run when a flagged slice would carry input weight.
struct PreparedOperators {
  int rows = 0, cols = 0, depth = 0;
  double fro_norm = 0.0;
  Mat norm_profile;
  Mat slice_prep;
  Mat row_prep;
  std::vector<char> zero_col_slice;
  std::vector<char> zero_row_slice;
};

// Requires power-of-two dims and a nonzero tensor.
PreparedOperators build_operators(const Tensor3& t);

// Register roles for the four-register preparation step: row index, column
// index, Fourier-basis face source, face copy target.
struct PrepBinding {
  std::string lsv, rsv, face_src, face_copy;
};

// The preparation unitary taking |i>|0>|k~>|0> (k~ = Fourier basis label on
// face_src) to the slice-weight superposition sum_j norm_j/fro |i>|j>|k~>|k~>.
// Realized as: inverse QFT on face_src, bitwise-XOR copy face_src->face_copy,
// QFT on both face registers, then norm_profile on rsv.  Unitary on the whole
// space, so inputs outside that form are legal but carry no contract.
void apply_p_prime(QState& s, const PreparedOperators& ops, const PrepBinding& b,
                   bool adjoint = false);

// slice_prep applied to three registers (row, column, face data); any fourth
// register is untouched by construction.
void apply_q_prime(QState& s, const PreparedOperators& ops,
                   const std::vector<std::string>& regs, bool adjoint = false);

// row_prep applied to (row, column, face data).
void apply_row_prep(QState& s, const PreparedOperators& ops,
                    const std::vector<std::string>& regs, bool adjoint = false);

// Dense assemblies over the index order (lsv, rsv, face_src, face_copy), used
// by the walk-operator builder and by matrix-level checks.
Mat p_prime_matrix(const PreparedOperators& ops);
Mat q_prime_matrix4(const PreparedOperators& ops);

}  // namespace tsvd
