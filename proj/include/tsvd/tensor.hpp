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

#include <iosfwd>
#include <string>
#include <vector>

#include "tsvd/common.hpp"

namespace tsvd {

// Order-3 complex tensor of shape rows x cols x depth, stored row-major with
// the depth (tube) index fastest.  face(k) is the rows x cols slice at depth k;
// tube(i, j) is the length-depth fiber at a fixed (i, j).
class Tensor3 {
 public:
  Tensor3(int rows, int cols, int depth);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int depth() const { return depth_; }
  long size() const { return static_cast<long>(rows_) * cols_ * depth_; }

  // Range-checked access; throws std::out_of_range.
  Cplx& at(int i, int j, int k);
  const Cplx& at(int i, int j, int k) const;

  Mat face(int k) const;
  void set_face(int k, const Mat& f);
  Vec tube(int i, int j) const;
  void set_tube(int i, int j, const Vec& t);

  double frob_norm_sq() const;
  double frob_norm() const;
  double max_abs_imag() const;
  bool is_real(double tol = 0.0) const { return max_abs_imag() <= tol; }

  Tensor3& operator*=(Cplx s);
  Tensor3 operator-(const Tensor3& o) const;
  Tensor3 operator+(const Tensor3& o) const;

  const std::vector<Cplx>& data() const { return data_; }
  std::vector<Cplx>& data() { return data_; }

 private:
  long index(int i, int j, int k) const;

  int rows_, cols_, depth_;
  std::vector<Cplx> data_;
};

double frob_dist(const Tensor3& a, const Tensor3& b);

// Zero-pads each axis up to the next power of two.  Entries and the Frobenius
// norm are preserved; a tensor with power-of-two dims comes back unchanged.
Tensor3 pad_pow2(const Tensor3& t);

// Like pad_pow2, but additionally pads rows and cols to a common size so that
// every face is square (required by the variational pipeline).
Tensor3 pad_pow2_square(const Tensor3& t);

// Z-order (Morton) flattening of a 2^n x 2^n matrix into a length-4^n vector.
// Within each interleaved bit pair the column bit sits ahead of the row bit:
// position = c_{n-1} r_{n-1} ... c_0 r_0 read MSB-first.  This is the order
// under which the pairwise block-encoding circuit applies the matrix itself
// rather than its transpose; the round-trip with zorder_unflatten is exact.
Vec zorder_flatten(const Mat& m);
Mat zorder_unflatten(const Vec& v);

// Concatenates the Z-order flattenings of all faces (face index as the most
// significant block) and scales by 1/frob_norm, producing the unit statevector
// over (face-index register, face-data register).  Requires square
// power-of-two faces, power-of-two depth and a nonzero tensor.
Vec flatten_tensor(const Tensor3& t);

// JSON tensor files: {"dims": [rows, cols, depth], "entries": [[re, im], ...]}
// with entries flattened row-major, depth fastest.
Tensor3 load_tensor_json(std::istream& in);
Tensor3 load_tensor_json_file(const std::string& path);
void save_tensor_json(const Tensor3& t, std::ostream& out);
void save_tensor_json_file(const Tensor3& t, const std::string& path);

}  // namespace tsvd
