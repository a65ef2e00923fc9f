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

#include "tsvd/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsvd/fourier.hpp"
#include "tsvd/state_prep.hpp"

namespace tsvd {

namespace {

Tensor3 tube_transform(const Tensor3& t, const Mat& f) {
  Tensor3 out(t.rows(), t.cols(), t.depth());
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j) out.set_tube(i, j, f * t.tube(i, j));
  return out;
}

// Cyclic Jacobi eigen-decomposition of a Hermitian matrix: g is overwritten
// with the (nearly) diagonal form, v accumulates the eigenvector columns.
void jacobi_hermitian(Mat& g, Mat& v) {
  const long n = g.rows();
  v = Mat::Identity(n, n);
  if (n < 2) return;

  const double fro = std::max(g.norm(), 1e-300);
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (long p = 0; p < n; ++p)
      for (long q = p + 1; q < n; ++q) off += std::norm(g(p, q));
    if (std::sqrt(2.0 * off) <= 1e-14 * fro) return;

    for (long p = 0; p < n; ++p)
      for (long q = p + 1; q < n; ++q) {
        double r = std::abs(g(p, q));
        if (r <= 1e-300) continue;
        Cplx u = g(p, q) / r;  // phase of the pivot
        double app = g(p, p).real(), aqq = g(q, q).real();
        double tau = (app - aqq) / (2.0 * r);
        double tt = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + tt * tt);
        double sgn = tt * c;
        // Eigenvector block [[c, -s], [conj(u) s, conj(u) c]] of the 2x2 pivot.
        Cplx bqp = std::conj(u) * sgn, bqq = std::conj(u) * c;
        for (long i = 0; i < n; ++i) {
          Cplx gp = g(i, p), gq = g(i, q);
          g(i, p) = gp * c + gq * bqp;
          g(i, q) = gp * (-sgn) + gq * bqq;
          Cplx vp = v(i, p), vq = v(i, q);
          v(i, p) = vp * c + vq * bqp;
          v(i, q) = vp * (-sgn) + vq * bqq;
        }
        for (long j = 0; j < n; ++j) {
          Cplx gp = g(p, j), gq = g(q, j);
          g(p, j) = c * gp + std::conj(bqp) * gq;
          g(q, j) = -sgn * gp + std::conj(bqq) * gq;
        }
      }
  }
  double off = 0.0;
  for (long p = 0; p < n; ++p)
    for (long q = p + 1; q < n; ++q) off += std::norm(g(p, q));
  if (std::sqrt(2.0 * off) > 1e-14 * fro)
    throw NumericalError("svd_jacobi: Jacobi sweeps did not converge (off-diagonal " +
                         std::to_string(std::sqrt(2.0 * off)) + ", norm " + std::to_string(fro) + ")");
}

}  // namespace

Tensor3 mode3_dft(const Tensor3& t) { return tube_transform(t, fourier_matrix(t.depth()).adjoint()); }

Tensor3 mode3_idft(const Tensor3& t) { return tube_transform(t, fourier_matrix(t.depth())); }

FaceSvd svd_jacobi(const Mat& a) {
  const long m = a.rows(), n = a.cols();
  if (m < 1 || n < 1) throw ShapeError("svd_jacobi: empty matrix");

  Mat g = a.adjoint() * a;
  Mat v;
  jacobi_hermitian(g, v);

  const long r = std::min(m, n);
  std::vector<long> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> lam(n);
  for (long i = 0; i < n; ++i) lam[i] = std::max(g(i, i).real(), 0.0);
  std::stable_sort(order.begin(), order.end(), [&](long x, long y) { return lam[x] > lam[y]; });

  FaceSvd out;
  out.right = Mat(n, n);
  for (long i = 0; i < n; ++i) out.right.col(i) = v.col(order[i]);
  out.sigma = Eigen::VectorXd(r);
  for (long i = 0; i < r; ++i) out.sigma(i) = std::sqrt(lam[order[i]]);

  double smax = out.sigma.size() > 0 ? out.sigma(0) : 0.0;
  long lead = 0;
  Mat partial(m, r);
  for (long i = 0; i < r; ++i) {
    if (!(out.sigma(i) > smax * 1e-9 && out.sigma(i) > 0.0))
      break;  // sorted descending: the rest are null directions
    Vec w = a * out.right.col(i);
    // The images a*v_i are orthogonal in exact arithmetic, but when sigma(i)
    // is many orders below sigma(0) the rounding error in a*v_i is comparable
    // to its norm. Two Gram-Schmidt passes against the accepted columns keep
    // the basis orthonormal at machine precision in that regime.
    for (int pass = 0; pass < 2; ++pass)
      for (long x = 0; x < lead; ++x) w -= partial.col(x).dot(w) * partial.col(x);
    double nrm = w.norm();
    if (nrm <= smax * 1e-12) break;  // numerically dependent on earlier columns
    partial.col(lead++) = w / nrm;
  }
  out.left = complete_to_unitary(partial.leftCols(lead), m);
  return out;
}

TsvdFactors factorize(const Tensor3& t) {
  Tensor3 hat = mode3_dft(t);
  TsvdFactors f;
  f.rows = t.rows();
  f.cols = t.cols();
  f.depth = t.depth();
  f.faces.reserve(t.depth());
  for (int k = 0; k < t.depth(); ++k) f.faces.push_back(svd_jacobi(hat.face(k)));
  return f;
}

Tensor3 tsvd_compose(const TsvdFactors& f) {
  Tensor3 hat(f.rows, f.cols, f.depth);
  for (int k = 0; k < f.depth; ++k) {
    const FaceSvd& s = f.faces[k];
    Mat sr = Mat::Zero(f.rows, f.cols);
    for (long i = 0; i < s.sigma.size(); ++i) sr(i, i) = s.sigma(i);
    hat.set_face(k, s.left * sr * s.right.adjoint());
  }
  return mode3_idft(hat);
}

Tensor3 classical_truncate(const Tensor3& t, double tau) {
  if (tau < 0.0) throw ContractError("classical_truncate: tau must be >= 0");
  TsvdFactors f = factorize(t);
  for (FaceSvd& s : f.faces)
    for (long i = 0; i < s.sigma.size(); ++i)
      if (s.sigma(i) < tau) s.sigma(i) = 0.0;
  return tsvd_compose(f);
}

std::vector<double> all_sigmas(const TsvdFactors& f) {
  std::vector<double> out;
  for (const FaceSvd& s : f.faces)
    for (long i = 0; i < s.sigma.size(); ++i) out.push_back(s.sigma(i));
  std::sort(out.rbegin(), out.rend());
  return out;
}

SveParams sve_params(const Tensor3& t, double epsilon, double tau) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw ContractError("sve_params: epsilon must lie in (0, 1/2)");
  if (tau < 0.0) throw ContractError("sve_params: tau must be >= 0");

  SveParams p;
  p.epsilon = epsilon;
  p.tau = tau;
  p.fro_norm = t.frob_norm();
  if (p.fro_norm == 0.0) throw DegenerateInputError("sve_params: zero tensor");

  TsvdFactors f = factorize(t);
  const long r = std::min(t.rows(), t.cols());
  p.thetas = Eigen::MatrixXd(r, t.depth());
  double retained_sq = 0.0;
  std::vector<double> all;
  for (int k = 0; k < t.depth(); ++k)
    for (long i = 0; i < r; ++i) {
      double sg = f.faces[k].sigma(i);
      p.thetas(i, k) = theta_of_sigma(sg, p.fro_norm);
      // An analytically zero singular value of a rank-deficient face comes
      // back from the eigen-iteration as sqrt(eps)-level noise, which would
      // read as a cluster of spuriously distinct phases just below pi.  Snap
      // those onto pi so the coincidence collapse below absorbs them.
      if (kPi - p.thetas(i, k) < 1e-7) p.thetas(i, k) = kPi;
      all.push_back(p.thetas(i, k));
      if (sg >= tau) retained_sq += sg * sg;
    }
  p.alpha = std::sqrt(retained_sq) / p.fro_norm;

  // Gap scan over distinct values: exact coincidences (< 1e-9, forced for real
  // tensors by conjugate-symmetric transformed faces) collapse to one value.
  std::sort(all.begin(), all.end());
  std::vector<double> distinct;
  for (double th : all)
    if (distinct.empty() || th - distinct.back() > 1e-9) distinct.push_back(th);
  p.delta = 2.0 * kPi;
  for (size_t i = 1; i < distinct.size(); ++i)
    p.delta = std::min(p.delta, distinct[i] - distinct[i - 1]);
  if (p.delta < 1e-6)
    throw DegenerateInputError(
        "sve_params: near-degenerate phase spectrum (gap " + std::to_string(p.delta) +
        "); the register width it demands is not simulable, re-seed the tensor");

  p.d = 1;
  while (std::pow(2.0, -p.d) >= p.delta / (2.0 * kPi)) ++p.d;
  p.np = p.d + static_cast<int>(std::ceil(std::log2(2.0 + 1.0 / (2.0 * epsilon * epsilon))));
  return p;
}

}  // namespace tsvd
