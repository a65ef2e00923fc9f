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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "tsvd/classical.hpp"
#include "tsvd/rng.hpp"
#include "tsvd/tensor.hpp"

namespace tsvd::test {

// Seeded random tensor.  Real entries are uniform[0,1); the complex variant
// draws re and im independently from [-1/2, 1/2) so phases are generic.
inline Tensor3 make_tensor(int rows, int cols, int depth, std::uint64_t seed,
                           bool complex_entries = false, bool unit_norm = true) {
  Tensor3 t(rows, cols, depth);
  SplitMix64 rng(seed);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (int k = 0; k < depth; ++k) {
        if (complex_entries)
          t.at(i, j, k) = Cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
        else
          t.at(i, j, k) = rng.next_unit();
      }
  if (unit_norm) t *= 1.0 / t.frob_norm();
  return t;
}

inline Mat make_matrix(long rows, long cols, SplitMix64& rng) {
  Mat a(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) a(i, j) = Cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
  return a;
}

// Haar-ish random unitary: QR of a random complex matrix with the phase of
// each R diagonal folded into Q so the result does not depend on the QR
// implementation's sign conventions.
inline Mat random_unitary(long dim, SplitMix64& rng) {
  Mat a = make_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long i = 0; i < dim; ++i) {
    Cplx d = r(i, i);
    q.col(i) *= (std::abs(d) > 0) ? d / std::abs(d) : Cplx(1, 0);
  }
  return q;
}

// Independent SVD oracle built from the Gram matrix eigendecomposition: a
// completely different numerical route from the one-sided Jacobi iteration in
// the library.  Returns singular values descending.
struct GramSvd {
  Eigen::VectorXd sigma;
  Mat right;  // eigenvectors of a^dag a, columns aligned with sigma
};

inline GramSvd gram_svd(const Mat& a) {
  Mat gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  long n = a.cols();
  GramSvd out;
  out.sigma.resize(n);
  out.right.resize(n, n);
  for (long i = 0; i < n; ++i) {
    double lam = std::max(0.0, es.eigenvalues()(n - 1 - i));  // descending
    out.sigma(i) = std::sqrt(lam);
    out.right.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

// What the statevector truncation pipeline converges to as the registers
// widen: each transformed face is multiplied from the right by the
// *conjugated* keep-projector of its own right singular vectors.
inline Tensor3 conj_variant_truncate(const Tensor3& t, double tau) {
  TsvdFactors f = factorize(t);
  Tensor3 out_hat = mode3_dft(t);
  for (int k = 0; k < t.depth(); ++k) {
    const FaceSvd& fs = f.faces[k];
    Mat proj = Mat::Zero(t.cols(), t.cols());
    for (long i = 0; i < fs.sigma.size(); ++i)
      if (fs.sigma(i) >= tau) proj += fs.right.col(i) * fs.right.col(i).adjoint();
    out_hat.set_face(k, Mat(out_hat.face(k) * proj.conjugate()));
  }
  return mode3_idft(out_hat);
}

// Rebuilds a tensor whose transformed faces are exactly the given matrices.
// Conjugate-symmetric inputs (face L-k == conj(face k)) produce a real tensor.
inline Tensor3 from_hat_faces(int rows, int cols, const std::vector<Mat>& faces) {
  Tensor3 hat(rows, cols, static_cast<int>(faces.size()));
  for (int k = 0; k < static_cast<int>(faces.size()); ++k) hat.set_face(k, faces[k]);
  return mode3_idft(hat);
}

inline Vec unit_real_vec(int dim, SplitMix64& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.next_unit() - 0.5;
  return v / v.norm();
}

inline Vec unit_cplx_vec(int dim, SplitMix64& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Cplx(rng.next_unit() - 0.5, rng.next_unit() - 0.5);
  return v / v.norm();
}

// A threshold is usable at magnitude width d only when every singular value's
// phase sits more than one coarse bin from theta_tau and no floor-code equals
// the comparator integer; inside that band the d-bit readout cannot separate
// the value from the threshold and the keep/drop decision is undefined.
inline bool band_free(const std::vector<double>& sigmas, double fro_norm, double tau, int d) {
  double th_tau = theta_of_sigma(tau, fro_norm);
  long t_int = static_cast<long>(std::floor(std::ldexp(th_tau / (2.0 * kPi), d) + 0.5));
  for (double s : sigmas) {
    if (s <= 1e-9) continue;
    double th = theta_of_sigma(s, fro_norm);
    if (std::fabs(th - th_tau) <= 2.0 * kPi / (1L << d)) return false;
    if (static_cast<long>(std::floor(std::ldexp(th / (2.0 * kPi), d))) == t_int) return false;
  }
  return true;
}

inline double spearman(std::vector<double> xs, std::vector<double> ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (size_t p = 0; p < idx.size(); ++p) r[idx[p]] = static_cast<double>(p);
    return r;
  };
  std::vector<double> rx = ranks(xs), ry = ranks(ys);
  double n = static_cast<double>(xs.size());
  double mx = (n - 1) / 2.0;
  double num = 0, dx = 0, dy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - mx);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - mx) * (ry[i] - mx);
  }
  return num / std::sqrt(dx * dy);
}

}  // namespace tsvd::test
