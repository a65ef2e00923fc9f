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

#include <cmath>
#include <vector>

#include "tsvd/tensor.hpp"

namespace tsvd {

// SVD of one transformed face: face = left * diag_rect(sigma) * right.adjoint()
// with left (m x m) and right (n x n) unitary and sigma sorted descending,
// length min(m, n).
struct FaceSvd {
  Mat left;
  Eigen::VectorXd sigma;
  Mat right;
};

// Tube-transformed SVD of an order-3 tensor: one FaceSvd per transformed face.
struct TsvdFactors {
  int rows = 0, cols = 0, depth = 0;
  std::vector<FaceSvd> faces;
};

// Ledger of phase-estimation sizing quantities derived from a tensor's
// spectrum, a precision target epsilon and a threshold tau.
struct SveParams {
  Eigen::MatrixXd thetas;  // thetas(i, k) = 2*acos(sigma_i^(k) / fro_norm), i < min(rows, cols)
  double delta = 0.0;      // smallest gap between distinct theta values (2*pi if fewer than 2)
  int d = 0;               // smallest d with 2^-d < delta / (2*pi)
  int np = 0;              // d + ceil(log2(2 + 1/(2*epsilon^2)))
  double epsilon = 0.0;
  double tau = 0.0;
  double alpha = 0.0;      // retained Frobenius fraction: ||truncated||_F / ||t||_F
  double fro_norm = 0.0;
};

// Applies the tube transform (adjoint of fourier_matrix(depth)) to every tube.
Tensor3 mode3_dft(const Tensor3& t);
// Exact inverse of mode3_dft.
Tensor3 mode3_idft(const Tensor3& t);

// Complex SVD of a single matrix by cyclic Jacobi eigen-decomposition of the
// Gram matrix a.adjoint()*a; left vectors recovered as a*v/sigma, with the
// null space filled in by Gram-Schmidt against the canonical basis.
FaceSvd svd_jacobi(const Mat& a);

// Tensor SVD through the tube transform: factors of each transformed face.
TsvdFactors factorize(const Tensor3& t);

// Recomposes the tensor from factors (inverse transform of left*S*right^dag).
Tensor3 tsvd_compose(const TsvdFactors& f);

// Zeroes every singular value strictly below tau in the transformed domain and
// recomposes.  sigma == tau is kept.
Tensor3 classical_truncate(const Tensor3& t, double tau);

// All singular values across transformed faces, sorted descending.
std::vector<double> all_sigmas(const TsvdFactors& f);

inline double theta_of_sigma(double sigma, double fro_norm) {
  double r = sigma / fro_norm;
  if (r > 1.0) r = 1.0;
  if (r < 0.0) r = 0.0;
  return 2.0 * std::acos(r);
}

// Phase-register sizing for a tensor.  Exactly coincident theta values (gap
// below 1e-9, as forced for real tensors by conjugate-symmetric faces) are
// collapsed before the gap scan; a surviving gap below 1e-6 raises
// DegenerateInputError suggesting a re-seed, since the register width it would
// demand is not simulable.  Requires 0 < epsilon < 1/2.
SveParams sve_params(const Tensor3& t, double epsilon, double tau);

}  // namespace tsvd
