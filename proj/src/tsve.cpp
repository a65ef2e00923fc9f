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

#include "tsvd/tsve.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace tsvd {

const Vec& WalkOperator::eigenvalues() const {
  if (!have_spectrum_) {
    Eigen::ComplexEigenSolver<Mat> es(w, false);
    if (es.info() != Eigen::Success)
      throw NumericalError("WalkOperator::eigenvalues: dense eigen-decomposition failed");
    eigenvalues_ = es.eigenvalues();
    have_spectrum_ = true;
  }
  return eigenvalues_;
}

WalkOperator build_walk(const PreparedOperators& ops) {
  const long m = ops.rows, n = ops.cols, l = ops.depth;
  const long dim = m * n * l * l;
  // The walk operator is held as a dense dim x dim matrix; past 2^13 the
  // reflections alone need several gigabytes, so refuse early instead of
  // dying in the allocator.
  if (dim > (1L << 13))
    throw BudgetError("build_walk: dense walk space of " + std::to_string(dim) +
                      " states exceeds the 2^13 cap");

  Mat p4 = p_prime_matrix(ops);
  Mat q4 = q_prime_matrix4(ops);

  // Reflection signs about |0> on (col, face-copy) and on (row, face-src),
  // in the basis ((i*n + j)*l + k)*l + lc.
  Eigen::VectorXd s24(dim), s13(dim);
  for (long idx = 0; idx < dim; ++idx) {
    long lc = idx % l;
    long k = (idx / l) % l;
    long j = (idx / (l * l)) % n;
    long i = idx / (n * l * l);
    s24(idx) = (j == 0 && lc == 0) ? 1.0 : -1.0;
    s13(idx) = (i == 0 && k == 0) ? 1.0 : -1.0;
  }

  WalkOperator walk;
  walk.rows = ops.rows;
  walk.cols = ops.cols;
  walk.depth = ops.depth;
  walk.fro_norm = ops.fro_norm;
  walk.w = (p4 * s24.asDiagonal() * p4.adjoint()) * (q4 * s13.asDiagonal() * q4.adjoint());
  return walk;
}

void qpe(QState& s, const Mat& w, const std::string& phase,
         const std::vector<std::string>& targets, bool adjoint) {
  const int np = s.layout().reg(phase).width;
  if (np < 1) throw ContractError("qpe: phase register needs at least one qubit");
  if (!adjoint) {
    s.hadamard_all(phase);
    // Most significant phase qubit drives the largest power, so the register
    // accumulates exp(i*phi*p) on basis value p and the inverse transform
    // concentrates near the signed integer 2^np * phi / (2pi).
    for (int q = 0; q < np; ++q)
      s.controlled_power(QubitRef{phase, q}, w, 1L << (np - 1 - q), targets);
    s.qft(phase, true);
  } else {
    s.qft(phase, false);
    Mat wdag = w.adjoint();
    for (int q = np - 1; q >= 0; --q)
      s.controlled_power(QubitRef{phase, q}, wdag, 1L << (np - 1 - q), targets);
    s.hadamard_all(phase);
  }
}

void abs_phase(QState& s, const std::string& phase, const std::string& abs) {
  const int np = s.layout().reg(phase).width;
  const int d = s.layout().reg(abs).width;
  if (d > np) throw ContractError("abs_phase: abs register wider than phase register");
  if (d == 0) return;
  s.permute_basis({phase, abs}, [np, d](long v) {
    long p = v >> d;
    long a = v & ((1L << d) - 1);
    long sv = signed_value(p, np);
    long mag = sv < 0 ? -sv : sv;
    return (p << d) | (a ^ (mag >> (np - d)));
  });
}

TsveOutcome tsve_pass(QState& s, const PreparedOperators& ops, const WalkOperator& walk,
                      const SveParams& params, const TsveBinding& b, bool adjoint) {
  const RegisterLayout& lay = s.layout();
  auto check_width = [&lay](const std::string& name, long dim, const char* role) {
    if (lay.reg(name).width != log2_exact(dim))
      throw ContractError("tsve_pass: register '" + name + "' does not match the " +
                          role + " dimension");
  };
  check_width(b.wlsv, ops.rows, "row");
  check_width(b.rsv, ops.cols, "column");
  check_width(b.wface, ops.depth, "face");
  check_width(b.face, ops.depth, "face");
  if (lay.reg(b.phase).width != params.np)
    throw ContractError("tsve_pass: phase register width does not match np");
  if (lay.reg(b.abs).width != params.d)
    throw ContractError("tsve_pass: abs register width does not match d");
  if (walk.rows != ops.rows || walk.cols != ops.cols || walk.depth != ops.depth)
    throw ContractError("tsve_pass: walk operator was built for different dimensions");

  // Reversing and adjointing the sequence below reproduces it term by term
  // (the magnitude XOR at the center is self-adjoint), so both flag values
  // execute the same circuit.
  (void)adjoint;
  const std::vector<std::string> loader = {b.wlsv, b.rsv, b.wface};
  const std::vector<std::string> targets = {b.wlsv, b.rsv, b.wface, b.face};
  apply_q_prime(s, ops, loader, false);
  qpe(s, walk.w, b.phase, targets, false);
  abs_phase(s, b.phase, b.abs);
  qpe(s, walk.w, b.phase, targets, true);
  apply_q_prime(s, ops, loader, true);

  TsveOutcome out;
  out.d = params.d;
  out.np = params.np;
  out.error_bound = std::sqrt(2.0) * params.epsilon;
  return out;
}

}  // namespace tsvd
