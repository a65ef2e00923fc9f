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

#include <cstdint>
#include <string>
#include <vector>

#include "tsvd/classical.hpp"
#include "tsvd/qsim.hpp"
#include "tsvd/state_prep.hpp"
#include "tsvd/tsve.hpp"

namespace tsvd {

// Sizing knobs for the truncation pipeline.  With both overrides at -1 the
// phase and magnitude widths come from the tensor's spectrum ledger; an
// np override alone pairs with d = np - 1.
struct TruncateOptions {
  double epsilon = 0.25;
  int np_override = -1;
  int d_override = -1;
};

struct TruncationResult {
  Tensor3 output;             // rescaled flag-0 branch on (row, col, face)
  double success_prob = 0.0;  // probability of the flag-0 branch
  double aux_residual = 0.0;  // post-selection weight left on ancillas
  SveParams params;
  int total_qubits = 0;
  std::vector<std::string> warnings;

  TruncationResult() : output(1, 1, 1) {}
};

// Pipeline registers in layout order: lsv, rsv, face (tensor data), wface,
// wlsv (walk ancillas), phase, abs, flag.
RegisterLayout truncation_layout(const PreparedOperators& ops, int np, int d);

// Applies the sizing overrides on top of the spectrum ledger and records a
// warning when tau exceeds the tensor norm (it is clamped there).
SveParams resolve_params(const Tensor3& t, double tau, const TruncateOptions& opt,
                         std::vector<std::string>* warnings);

// Loads the normalized tensor amplitudes: Hadamards on face, the face-pair
// preparation unitary, Hadamards on face and wface, then the column-slice
// loader on (lsv, rsv, face).  Leaves (1/|A|_F) sum a_ijk |i, j, k> with every
// other register |0>.  The overload returns a fresh four-register state.
void prepare_tensor_state(QState& s, const PreparedOperators& ops);
QState prepare_tensor_state(const PreparedOperators& ops);

// Threshold integer for the comparator: round-half-up of
// 2^d * theta_tau / (2 pi) with theta_tau = 2 acos(tau / fro_norm), so a
// magnitude code equal to the threshold is kept (the value sits at tau).
// tau beyond fro_norm is clamped with a warning.
long comparator_threshold(double tau, double fro_norm, int d,
                          std::vector<std::string>* warnings = nullptr);

// XORs the predicate (abs value > t_int) into the flag qubit.
void apply_comparator(QState& s, const std::string& abs_reg, const std::string& flag_reg,
                      long t_int);

// Full pipeline: prepare, estimation pass, comparator, inverse pass, flag
// postselection.  Output entries are branch amplitudes rescaled by
// fro_norm * sqrt(success_prob), i.e. the unnormalized flag-0 branch brought
// back to tensor scale.  Throws PostselectError when the threshold removes
// every singular value and NumericalError when more than 10 * epsilon^2 of
// the kept branch sits off the ancilla |0> space.
TruncationResult truncate(const Tensor3& t, double tau, const TruncateOptions& opt = {});

// Threshold-sweep engine.  The comparator commutes with phase estimation
// (disjoint registers), and conjugating it by the magnitude XOR turns the
// pipeline into
//     loader^dag . QPE^dag . G_tau . QPE . loader . prepare
// where G_tau flips the flag on (top d bits of |signed phase|) > t_int and
// returns the magnitude register to |0> identically, so that register can be
// dropped from the simulated layout.  Everything left of G_tau is cached
// once; each threshold costs one flag permutation and one inverse half, and
// the result equals truncate() with the same sizes to numerical precision.
// Unlike truncate(), run() does not throw when the threshold removes every
// singular value (the figure grid extends past the top one): it reports the
// leftover flag-0 branch, however small, and never enforces the ancilla
// residual bound.
class TruncationSweep {
 public:
  TruncationSweep(const Tensor3& t, double epsilon, int np, int d);

  TruncationResult run(double tau) const;

  const SveParams& base_params() const { return base_params_; }
  double max_sigma() const { return max_sigma_; }

 private:
  Tensor3 tensor_;
  double epsilon_;
  int np_, d_;
  PreparedOperators ops_;
  SveParams base_params_;
  RegisterLayout layout_;
  QState cache_;  // constructed before the walk so the qubit budget is checked first
  WalkOperator walk_;
  double max_sigma_ = 0.0;
};

struct RecommendResult {
  long col = 0;    // sampled column index j
  long slice = 0;  // sampled face index k
  std::vector<double> marginal;  // exact flag-0 distribution over (col, face)
  double success_prob = 0.0;
  SveParams params;
};

// Recommendation variant: the preparation step is replaced by |row> on lsv
// followed by the row-slice loader, the rest of the pipeline is unchanged,
// and the result is one Born sample of (rsv, face) from the exact flag-0
// marginal.  A zero row slice raises DegenerateInputError.
RecommendResult recommend(const Tensor3& t, long row, double tau, std::uint64_t seed,
                          const TruncateOptions& opt = {});

}  // namespace tsvd
