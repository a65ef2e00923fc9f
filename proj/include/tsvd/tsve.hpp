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

#include <string>
#include <vector>

#include "tsvd/classical.hpp"
#include "tsvd/qsim.hpp"
#include "tsvd/state_prep.hpp"

namespace tsvd {

// Product of two reflections on the joint (row, column, face-src, face-copy)
// space, basis index ((i*N + j)*L + k)*L + l: the reflection about the range
// of the row-side isometry times the reflection about the range of the
// column-side isometry.  Each eigenphase pair +-theta encodes one transformed
// singular value through cos(theta/2) = sigma / fro_norm.
class WalkOperator {
 public:
  int rows = 0, cols = 0, depth = 0;
  double fro_norm = 0.0;
  Mat w;

  long dim() const { return w.rows(); }

  // Spectral data for diagnostics, computed on first use and cached.  The
  // eigenvector columns are NOT reliable inside degenerate eigenspaces (the
  // dense solver does not orthonormalize them there); use the phases only.
  const Vec& eigenvalues() const;

 private:
  mutable Vec eigenvalues_;
  mutable bool have_spectrum_ = false;
};

// Assembles the walk operator from the preparation unitaries:
//   (P' . reflect|0> on registers 2,4 . P'^dag) x (Q' . reflect|0> on 1,3 . Q'^dag)
// where P' is taken over (row, col, face-src, face-copy) and Q' is the column
// slice loader on (row, col, face-src) tensored with the identity on the
// face-copy register.
WalkOperator build_walk(const PreparedOperators& ops);

// Register roles for one singular-value-estimation pass.  rsv and face carry
// the data pair (right vector, Fourier face vector); wlsv and wface are |0>
// ancillas spanned by the walk; phase and abs hold the signed estimate and
// its magnitude.
struct TsveBinding {
  std::string wlsv;   // row-side walk ancilla, dimension rows
  std::string rsv;    // column register, dimension cols
  std::string wface;  // face-src walk ancilla, dimension depth
  std::string face;   // face-copy register, dimension depth
  std::string phase;  // signed phase register, np qubits
  std::string abs;    // magnitude register, d qubits
};

// Phase estimation of the unitary `w` acting on `targets`, writing a signed
// two's-complement estimate of 2^np * phi / (2pi) into `phase` (np = width of
// the phase register).  Forward: Hadamards, controlled powers w^(2^j) with the
// phase register's most significant qubit controlling the largest power, then
// inverse Fourier transform on the phase register.  adjoint undoes exactly.
void qpe(QState& s, const Mat& w, const std::string& phase,
         const std::vector<std::string>& targets, bool adjoint = false);

// Magnitude extraction: XORs the top d bits of |signed phase value| into the
// abs register (d = abs width <= phase width).  A basis permutation, and an
// involution, so it is its own adjoint.
void abs_phase(QState& s, const std::string& phase, const std::string& abs);

// Bookkeeping returned by one pass.
struct TsveOutcome {
  int d = 0;
  int np = 0;
  double error_bound = 0.0;  // sqrt(2) * epsilon mass off the tagged branch
};

// One singular-value-estimation pass: column-slice loader, phase estimation
// of the walk operator, magnitude extraction, inverse phase estimation,
// inverse loader.  On an input carrying sum_t c_t |v_t>|f_t> on (rsv, face)
// with ancillas |0>, the output tags each branch with the d-bit encoding of
// theta_t in abs up to the phase-estimation error budget.  The composite is
// self-adjoint (the magnitude XOR is an involution), so the adjoint flag is
// equivalent but is honored literally by reversing the sequence.
TsveOutcome tsve_pass(QState& s, const PreparedOperators& ops, const WalkOperator& walk,
                      const SveParams& params, const TsveBinding& b, bool adjoint = false);

}  // namespace tsvd
